#include "asess/events.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace asess {

std::size_t EventStructure::relation_pairs() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = 0; j < size(); ++j)
            if (strictly_before(i, j)) ++n;
    return n;
}

std::size_t EventStructure::conflict_pairs() const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j)
            if (conflicts(i, j)) ++n;
    return n;
}

std::optional<std::string> check_laws(const EventStructure& es) {
    const std::size_t n = es.size();
    auto pair = [&](std::size_t i, std::size_t j) { return es.names[i] + ", " + es.names[j]; };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (es.conflicts(i, j) != es.conflicts(j, i)) return "conflict is not symmetric on " + pair(i, j);
    if (es.kind == EventStructure::Kind::Flow) {
        for (std::size_t i = 0; i < n; ++i)
            if (es.before(i, i)) return "flow is not irreflexive on " + es.names[i];
        return std::nullopt;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!es.before(i, i)) return "causality is not reflexive on " + es.names[i];
        if (es.conflicts(i, i)) return "conflict is not irreflexive on " + es.names[i];
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && es.before(i, j) && es.before(j, i)) return "causality is not antisymmetric on " + pair(i, j);
            for (std::size_t k = 0; k < n; ++k) {
                if (es.before(i, j) && es.before(j, k) && !es.before(i, k))
                    return "causality is not transitive on " + pair(i, k);
                if (es.conflicts(i, j) && es.before(j, k) && !es.conflicts(i, k))
                    return "conflict is not hereditary on " + pair(i, k);
            }
        }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

bool pevent_leq(const PEvent& a, const PEvent& b) {
    return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

bool pevent_conflict(const PEvent& a, const PEvent& b) {
    auto [ia, ib] = std::mismatch(a.begin(), a.end(), b.begin(), b.end());
    return ia != a.end() && ib != b.end();
}

namespace {

EventStructure make_structure(EventStructure::Kind kind, std::size_t n) {
    EventStructure es;
    es.kind = kind;
    es.names.resize(n);
    es.labels.resize(n);
    es.rel.assign(n, std::vector<char>(n, 0));
    es.conflict.assign(n, std::vector<char>(n, 0));
    return es;
}

void process_paths(const Process& p, std::size_t k, PEvent& cur, std::vector<PEvent>& out) {
    if (cur.size() >= k) return;
    for (std::size_t i = 0; i < p.branches().size(); ++i) {
        cur.push_back(Action{p.kind() == ProcNode::Kind::Out ? Dir::Out : Dir::In, p.peer(), p.branches()[i].label});
        out.push_back(cur);
        process_paths(p.child(i), k, cur, out);
        cur.pop_back();
    }
}

std::vector<PEvent> process_events(const Process& p, std::size_t k) {
    std::vector<PEvent> out;
    PEvent cur;
    process_paths(p, k, cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

ProcessES pes_of_process(const Process& p, std::size_t k) {
    ProcessES r;
    r.events = process_events(p, k);
    const std::size_t n = r.events.size();
    r.es = make_structure(EventStructure::Kind::Prime, n);
    for (std::size_t i = 0; i < n; ++i) {
        r.es.names[i] = to_string(r.events[i]);
        r.es.labels[i] = to_string(r.events[i].back());
        for (std::size_t j = 0; j < n; ++j) {
            r.es.rel[i][j] = pevent_leq(r.events[i], r.events[j]);
            r.es.conflict[i][j] = pevent_conflict(r.events[i], r.events[j]);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------

std::string to_string(const NEvent& e) { return e.loc + "::" + to_string(e.ev); }

Comm nevent_io(const NEvent& e) {
    if (e.ev.empty()) throw PreconditionError("empty n-event at " + e.loc);
    const Action& a = e.ev.back();
    return a.dir == Dir::Out ? out(e.loc, a.peer, a.label) : in(a.peer, e.loc, a.label);
}

namespace {

USeq proj_on(const OTrace& w, const Participant& p, const ActionSeq& tail, const Participant& q) {
    ActionSeq s = trace_proj(w, p);
    s.insert(s.end(), tail.begin(), tail.end());
    return actionseq_proj(s, q);
}

// Some sequence above the input history, cut at the matched input, is weakly dual to the
// output side. The receiver's queued messages to the sender come first in that history, and
// like its other outputs they may be moved past the matched input.
bool cross_condition(const USeq& out_side, const USeq& queued, const NEvent& input, std::size_t cap) {
    const Participant& p = input.ev.back().peer;
    const Label& l = input.ev.back().label;
    USeq theta = queued;
    USeq own = actionseq_proj(input.ev, p);
    theta.insert(theta.end(), own.begin(), own.end());
    for (const USeq& a : input_histories(theta, l, cap))
        if (weak_dual(out_side, a, cap)) return true;
    return false;
}

} // namespace

bool nevent_flow(const NEvent& a, const NEvent& b, const OTrace& w, std::size_t cap) {
    if (a.loc == b.loc) return a.ev.size() < b.ev.size() && pevent_leq(a.ev, b.ev);
    if (a.ev.empty() || b.ev.empty()) return false;
    const Action& x = a.ev.back();
    const Action& y = b.ev.back();
    if (x.dir != Dir::Out || y.dir != Dir::In) return false;
    if (x.peer != b.loc || y.peer != a.loc || x.label != y.label) return false;
    const Participant& p = a.loc;
    const Participant& q = b.loc;
    ActionSeq hist(a.ev.begin(), a.ev.end() - 1);
    USeq out_side = proj_on(w, p, hist, q);
    USeq queued = actionseq_proj(trace_proj(w, q), p);
    return cross_condition(out_side, queued, b, cap);
}

bool nevent_conflict(const NEvent& a, const NEvent& b) { return a.loc == b.loc && pevent_conflict(a.ev, b.ev); }

bool queue_justified(const NEvent& e, const OTrace& w, std::size_t cap) {
    if (e.ev.empty() || e.ev.back().dir != Dir::In) return false;
    const Participant& p = e.ev.back().peer;
    const Label& l = e.ev.back().label;
    // Only the messages on the channel p->q before the chosen one reach the output side.
    USeq before;
    for (const Comm& c : w) {
        if (c.from != p || c.to != e.loc) continue;
        if (c.label == l && cross_condition(before, {}, e, cap)) return true;
        before.push_back(UAct{Dir::Out, c.label});
    }
    return false;
}

std::set<NEvent> narrowing(const std::set<NEvent>& events, const OTrace& w, std::size_t cap) {
    std::set<NEvent> x = events;
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = x.begin(); it != x.end();) {
            const NEvent& e = *it;
            bool keep = true;
            if (e.ev.size() > 1) {
                NEvent pre{e.loc, PEvent(e.ev.begin(), e.ev.end() - 1)};
                keep = x.count(pre) > 0;
            }
            if (keep && e.ev.back().dir == Dir::In && !queue_justified(e, w, cap)) {
                keep = std::any_of(x.begin(), x.end(), [&](const NEvent& o) {
                    return o.loc != e.loc && nevent_flow(o, e, w, cap);
                });
            }
            if (keep) {
                ++it;
            } else {
                it = x.erase(it);
                changed = true;
            }
        }
    }
    return x;
}

std::optional<PEvent> proj_nevent(const NEvent& e, const Participant& p) {
    if (e.loc != p) return std::nullopt;
    return e.ev;
}

std::optional<std::size_t> NetworkES::index_of(const NEvent& e) const {
    auto it = std::lower_bound(events.begin(), events.end(), e);
    if (it == events.end() || *it != e) return std::nullopt;
    return static_cast<std::size_t>(it - events.begin());
}

NetworkES fes_of_network(const Network& n, std::size_t k) {
    NetworkES r;
    r.omega = otr(n.queue);
    std::set<NEvent> candidates;
    for (const auto& [p, proc] : n.procs)
        for (auto& e : process_events(proc, k)) candidates.insert(NEvent{p, std::move(e)});
    auto kept = narrowing(candidates, r.omega);
    r.events.assign(kept.begin(), kept.end());
    const std::size_t m = r.events.size();
    r.es = make_structure(EventStructure::Kind::Flow, m);
    for (std::size_t i = 0; i < m; ++i) {
        r.es.names[i] = to_string(r.events[i]);
        r.es.labels[i] = to_string(nevent_io(r.events[i]));
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            r.es.rel[i][j] = nevent_flow(r.events[i], r.events[j], r.omega);
            r.es.conflict[i][j] = nevent_conflict(r.events[i], r.events[j]);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------

TEvent make_tevent(const OTrace& w, const Trace& t) {
    if (!is_otrace(w)) throw PreconditionError("not an o-trace: " + to_string(w));
    if (t.empty()) throw PreconditionError("t-event with an empty trace");
    if (!pointed(t, w)) throw PreconditionError(to_string(t) + " is not pointed after " + to_string(w));
    OTrace cw = canonical_otrace(w);
    return TEvent{cw, canonical_trace(t, cw)};
}

std::string to_string(const TEvent& e) { return "[" + to_string(e.omega) + ", " + to_string(e.trace) + "]"; }

Comm tevent_io(const TEvent& e) { return e.trace.back(); }

bool tevent_equal(const TEvent& a, const TEvent& b) {
    return otrace_equiv(a.omega, b.omega) && trace_equiv(a.trace, b.trace, a.omega);
}

bool tevent_leq(const TEvent& a, const TEvent& b) {
    if (!otrace_equiv(a.omega, b.omega)) return false;
    if (a.trace.size() > b.trace.size()) return false;
    std::map<Participant, std::size_t> need;
    for (const Comm& c : a.trace) ++need[c.player()];
    // The events of b that must form the prefix: per player, the first as many as in a.
    Trace full = a.omega;
    full.insert(full.end(), b.trace.begin(), b.trace.end());
    auto m = match_map(full);
    const std::size_t off = a.omega.size();
    std::vector<char> in_d(b.trace.size(), 0);
    std::map<Participant, std::size_t> seen;
    Trace sub;
    for (std::size_t j = 0; j < b.trace.size(); ++j) {
        const Participant& p = b.trace[j].player();
        if (seen[p]++ < need[p]) {
            in_d[j] = 1;
            sub.push_back(b.trace[j]);
        }
    }
    if (sub.size() != a.trace.size()) return false;
    for (std::size_t j = 0; j < b.trace.size(); ++j) {
        if (!in_d[j] || b.trace[j].dir != Dir::In) continue;
        auto partner = m[j + off];
        if (partner && *partner >= off && !in_d[*partner - off]) return false;
    }
    return canonical_trace(sub, a.omega) == canonical_trace(a.trace, a.omega);
}

bool tevent_conflict(const TEvent& a, const TEvent& b) {
    if (!otrace_equiv(a.omega, b.omega)) return false;
    std::set<Participant> ps = players(a.trace);
    for (const auto& p : players(b.trace)) ps.insert(p);
    return std::any_of(ps.begin(), ps.end(), [&](const Participant& p) {
        return pevent_conflict(trace_proj(a.trace, p), trace_proj(b.trace, p));
    });
}

TEvent ev(const OTrace& w, const Trace& t) {
    if (t.empty()) throw PreconditionError("ev of the empty trace");
    if (!well_formed_trace(t, w)) throw PreconditionError(to_string(t) + " is not well formed after " + to_string(w));
    return make_tevent(w, filter_trace(t, w));
}

std::optional<std::size_t> TypeES::index_of(const TEvent& e) const {
    TEvent c{canonical_otrace(e.omega), {}};
    c.trace = canonical_trace(e.trace, c.omega);
    auto it = std::lower_bound(events.begin(), events.end(), c);
    if (it == events.end() || *it != c) return std::nullopt;
    return static_cast<std::size_t>(it - events.begin());
}

namespace {

void type_paths(const Global& g, std::size_t k, Trace& cur, std::vector<Trace>& out) {
    if (cur.size() >= k) return;
    for (std::size_t i = 0; i < g.branches().size(); ++i) {
        cur.push_back(g.comm(i));
        out.push_back(cur);
        type_paths(g.child(i), k, cur, out);
        cur.pop_back();
    }
}

} // namespace

std::vector<Trace> fpaths(const Global& g, std::size_t k) {
    std::vector<Trace> out;
    Trace cur;
    type_paths(g, k, cur, out);
    return out;
}

TypeES pes_of_type(const AsyncType& t, std::size_t k) {
    TypeES r;
    r.omega = canonical_otrace(otr(t.queue));
    std::set<TEvent> evs;
    for (const Trace& path : fpaths(t.global, k)) {
        if (!well_formed_trace(path, r.omega)) continue;
        evs.insert(ev(r.omega, path));
    }
    r.events.assign(evs.begin(), evs.end());
    const std::size_t n = r.events.size();
    r.es = make_structure(EventStructure::Kind::Prime, n);
    for (std::size_t i = 0; i < n; ++i) {
        r.es.names[i] = to_string(r.events[i]);
        r.es.labels[i] = to_string(tevent_io(r.events[i]));
        for (std::size_t j = 0; j < n; ++j) {
            r.es.rel[i][j] = i == j || tevent_leq(r.events[i], r.events[j]);
            r.es.conflict[i][j] = i != j && tevent_conflict(r.events[i], r.events[j]);
        }
    }
    return r;
}

// ---------------------------------------------------------------------------

std::optional<NEvent> nevent_residual(const NEvent& e, const Comm& beta) {
    if (beta.player() != e.loc) return e;
    if (e.ev.size() < 2 || e.ev.front() != beta.as_action()) return std::nullopt;
    return NEvent{e.loc, PEvent(e.ev.begin() + 1, e.ev.end())};
}

NEvent nevent_retrieval(const NEvent& e, const Comm& beta) {
    if (beta.player() != e.loc) return e;
    NEvent r = e;
    r.ev.insert(r.ev.begin(), beta.as_action());
    return r;
}

std::optional<OTrace> queue_map_fwd(const Comm& beta, const OTrace& w) {
    OTrace r = w;
    if (beta.dir == Dir::Out) {
        r.push_back(beta);
        return r;
    }
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (r[i].from != beta.from || r[i].to != beta.to) continue;
        if (r[i].label != beta.label) return std::nullopt;
        r.erase(r.begin() + static_cast<std::ptrdiff_t>(i));
        return r;
    }
    return std::nullopt;
}

std::optional<OTrace> queue_map_bwd(const Comm& beta, const OTrace& w) {
    OTrace r = w;
    if (beta.dir == Dir::In) {
        r.insert(r.begin(), out(beta.from, beta.to, beta.label));
        return r;
    }
    for (std::size_t i = r.size(); i-- > 0;) {
        if (r[i].from != beta.from || r[i].to != beta.to) continue;
        if (r[i].label != beta.label) return std::nullopt;
        r.erase(r.begin() + static_cast<std::ptrdiff_t>(i));
        return r;
    }
    return std::nullopt;
}

std::optional<TEvent> tevent_residual(const TEvent& e, const Comm& beta) {
    auto w = queue_map_fwd(beta, e.omega);
    if (!w) return std::nullopt;
    const Participant& p = beta.player();
    auto first = std::find_if(e.trace.begin(), e.trace.end(), [&](const Comm& c) { return c.player() == p; });
    if (first == e.trace.end()) return make_tevent(*w, e.trace);
    if (*first != beta) return std::nullopt;
    std::size_t j = static_cast<std::size_t>(first - e.trace.begin());
    if (beta.dir == Dir::In) {
        // beta can only move to the front if the output it consumes is already queued
        Trace full = e.omega;
        full.insert(full.end(), e.trace.begin(), e.trace.end());
        auto m = match_map(full);
        if (m[j + e.omega.size()] && *m[j + e.omega.size()] >= e.omega.size()) return std::nullopt;
    }
    Trace rest = e.trace;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
    if (rest.empty()) return std::nullopt;
    return make_tevent(*w, rest);
}

std::optional<TEvent> tevent_retrieval(const Comm& beta, const TEvent& e) {
    auto w = queue_map_bwd(beta, e.omega);
    if (!w) return std::nullopt;
    Trace longer{beta};
    longer.insert(longer.end(), e.trace.begin(), e.trace.end());
    if (pointed(longer, *w)) return make_tevent(*w, longer);
    if (!players(e.trace).count(beta.player())) return make_tevent(*w, e.trace);
    return std::nullopt;
}

std::vector<NEvent> nec(const Trace& t) {
    std::vector<NEvent> r;
    r.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        Trace pre(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(i + 1));
        r.push_back(NEvent{t[i].player(), trace_proj(pre, t[i].player())});
    }
    return r;
}

std::vector<TEvent> tec(const OTrace& w, const Trace& t) {
    std::vector<TEvent> r;
    r.reserve(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        r.push_back(ev(w, Trace(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(i + 1))));
    return r;
}

} // namespace asess
