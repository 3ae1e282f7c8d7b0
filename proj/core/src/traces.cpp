#include "asess/traces.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>

namespace asess {

OTrace otr(const Queue& m) {
    OTrace w;
    w.reserve(m.size());
    for (const auto& msg : m.msgs) w.push_back(out(msg.from, msg.to, msg.label));
    return w;
}

Queue queue_of(const OTrace& w) {
    Queue m;
    for (const Comm& c : w) {
        if (c.dir != Dir::Out) throw PreconditionError("o-trace contains the input " + to_string(c));
        m.msgs.push_back(Message{c.from, c.label, c.to});
    }
    return m;
}

bool is_otrace(const Trace& t) {
    return std::all_of(t.begin(), t.end(), [](const Comm& c) { return c.dir == Dir::Out; });
}

OTrace canonical_otrace(const OTrace& w) {
    OTrace r = w;
    std::stable_sort(r.begin(), r.end(), [](const Comm& a, const Comm& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    return r;
}

bool otrace_equiv(const OTrace& a, const OTrace& b) {
    return a.size() == b.size() && canonical_otrace(a) == canonical_otrace(b);
}

std::string to_string(const UAct& a) { return (a.dir == Dir::Out ? "!" : "?") + a.label; }

std::string to_string(const USeq& s) {
    if (s.empty()) return "eps";
    std::string r;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) r += ".";
        r += to_string(s[i]);
    }
    return r;
}

ActionSeq trace_proj(const Trace& t, const Participant& r) {
    ActionSeq s;
    for (const Comm& c : t)
        if (c.player() == r) s.push_back(c.as_action());
    return s;
}

USeq actionseq_proj(const ActionSeq& s, const Participant& r) {
    USeq u;
    for (const Action& a : s)
        if (a.peer == r) u.push_back(UAct{a.dir, a.label});
    return u;
}

std::size_t multiplicity(const Trace& t, const Participant& p, const Participant& q, Dir d) {
    return static_cast<std::size_t>(std::count_if(t.begin(), t.end(), [&](const Comm& c) {
        return c.dir == d && c.from == p && c.to == q;
    }));
}

bool matches(const Trace& t, std::size_t i, std::size_t j) {
    if (i < 1 || j > t.size() || i >= j) return false;
    const Comm& o = t[i - 1];
    const Comm& n = t[j - 1];
    if (o.dir != Dir::Out || n.dir != Dir::In) return false;
    if (o.from != n.from || o.to != n.to || o.label != n.label) return false;
    Trace before_i(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(i - 1));
    Trace before_j(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(j - 1));
    return multiplicity(before_i, o.from, o.to, Dir::Out) == multiplicity(before_j, o.from, o.to, Dir::In);
}

std::vector<std::optional<std::size_t>> match_map(const Trace& t) {
    std::vector<std::optional<std::size_t>> r(t.size());
    // k-th output on a channel can only be matched by the k-th input on it
    std::map<std::pair<Participant, Participant>, std::vector<std::size_t>> outs;
    std::map<std::pair<Participant, Participant>, std::size_t> ins;
    for (std::size_t j = 0; j < t.size(); ++j) {
        auto ch = std::make_pair(t[j].from, t[j].to);
        if (t[j].dir == Dir::Out) {
            outs[ch].push_back(j);
            continue;
        }
        std::size_t k = ins[ch]++;
        auto it = outs.find(ch);
        if (it == outs.end() || k >= it->second.size()) continue;
        std::size_t i = it->second[k];
        if (t[i].label != t[j].label) continue;
        r[i] = j;
        r[j] = i;
    }
    return r;
}

bool well_formed_trace(const Trace& t) {
    auto m = match_map(t);
    for (std::size_t j = 0; j < t.size(); ++j)
        if (t[j].dir == Dir::In && !m[j]) return false;
    return true;
}

namespace {

Trace concat(const Trace& a, const Trace& b) {
    Trace r;
    r.reserve(a.size() + b.size());
    r.insert(r.end(), a.begin(), a.end());
    r.insert(r.end(), b.begin(), b.end());
    return r;
}

} // namespace

bool well_formed_trace(const Trace& t, const Trace& prefix) { return well_formed_trace(concat(prefix, t)); }

std::optional<Trace> swap_step(const Trace& t, std::size_t i, const OTrace& w) {
    if (i < 1 || i + 1 > t.size())
        throw PreconditionError("swap position " + std::to_string(i) + " out of range for a trace of length " +
                                std::to_string(t.size()));
    Trace full = concat(w, t);
    if (!well_formed_trace(full)) throw PreconditionError("swap on a trace that is not well formed: " + to_string(t));
    const Comm& a = t[i - 1];
    const Comm& b = t[i];
    if (a.player() == b.player()) return std::nullopt;
    if (matches(full, i + w.size(), i + 1 + w.size())) return std::nullopt;
    Trace r = t;
    std::swap(r[i - 1], r[i]);
    return r;
}

std::set<Trace> swap_closure(const Trace& t, const OTrace& w, std::size_t cap) {
    std::set<Trace> seen{t};
    std::deque<Trace> todo{t};
    while (!todo.empty()) {
        Trace cur = std::move(todo.front());
        todo.pop_front();
        for (std::size_t i = 1; i < cur.size(); ++i) {
            auto n = swap_step(cur, i, w);
            if (!n || !seen.insert(*n).second) continue;
            if (seen.size() > cap) throw CapExceeded("swap closure exceeds " + std::to_string(cap) + " traces");
            todo.push_back(std::move(*n));
        }
    }
    return seen;
}

Trace canonical_trace(const Trace& t, const OTrace& w) {
    Trace full = concat(w, t);
    if (!well_formed_trace(full)) throw PreconditionError("not well formed: " + to_string(t));
    auto m = match_map(full);
    const std::size_t n = t.size();
    const std::size_t off = w.size();
    std::vector<std::vector<std::size_t>> succ(n);
    std::vector<std::size_t> indeg(n, 0);
    std::map<Participant, std::size_t> last;
    for (std::size_t j = 0; j < n; ++j) {
        auto it = last.find(t[j].player());
        if (it != last.end()) {
            succ[it->second].push_back(j);
            ++indeg[j];
        }
        last[t[j].player()] = j;
        if (t[j].dir == Dir::In && *m[j + off] >= off) {
            succ[*m[j + off] - off].push_back(j);
            ++indeg[j];
        }
    }
    auto cmp = [&](std::size_t a, std::size_t b) {
        if (t[a] != t[b]) return t[b] < t[a];
        return b < a;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(cmp)> ready(cmp);
    for (std::size_t j = 0; j < n; ++j)
        if (indeg[j] == 0) ready.push(j);
    Trace r;
    r.reserve(n);
    while (!ready.empty()) {
        std::size_t j = ready.top();
        ready.pop();
        r.push_back(t[j]);
        for (std::size_t s : succ[j])
            if (--indeg[s] == 0) ready.push(s);
    }
    return r;
}

bool trace_equiv(const Trace& a, const Trace& b, const OTrace& w) {
    if (a.size() != b.size()) return false;
    if (!well_formed_trace(a, w) || !well_formed_trace(b, w)) return a == b;
    return canonical_trace(a, w) == canonical_trace(b, w);
}

bool required(const Trace& t, std::size_t i) {
    if (i < 1 || i > t.size()) return false;
    const Participant& p = t[i - 1].player();
    for (std::size_t k = i; k < t.size(); ++k)
        if (t[k].player() == p) return true;
    return false;
}

bool pointed(const Trace& t, const Trace& prefix) {
    Trace full = concat(prefix, t);
    auto m = match_map(full);
    for (std::size_t j = 0; j < full.size(); ++j)
        if (full[j].dir == Dir::In && !m[j]) return false;
    const std::size_t off = prefix.size();
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (required(t, i)) continue;
        auto partner = m[off + i - 1];
        if (partner && *partner > off + i - 1) continue;
        return false;
    }
    return true;
}

Trace filter_trace(const Trace& t, const Trace& w, const Trace& rest) {
    Trace head = t;
    Trace kept = rest;
    while (!head.empty()) {
        Comm beta = head.back();
        head.pop_back();
        Trace cand;
        cand.reserve(kept.size() + 1);
        cand.push_back(beta);
        cand.insert(cand.end(), kept.begin(), kept.end());
        if (pointed(cand, concat(w, head))) kept = std::move(cand);
    }
    return kept;
}

std::set<USeq> precsim_closure(const USeq& s, std::size_t cap) {
    std::set<USeq> seen{s};
    std::deque<USeq> todo{s};
    while (!todo.empty()) {
        USeq cur = std::move(todo.front());
        todo.pop_front();
        for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
            if (cur[k].dir != Dir::Out || cur[k + 1].dir != Dir::In) continue;
            USeq n = cur;
            std::swap(n[k], n[k + 1]);
            if (!seen.insert(n).second) continue;
            if (seen.size() > cap) throw CapExceeded("order closure exceeds " + std::to_string(cap) + " sequences");
            todo.push_back(std::move(n));
        }
    }
    return seen;
}

bool precsim(const USeq& a, const USeq& b, std::size_t cap) { return precsim_closure(a, cap).count(b) > 0; }

USeq complement(const USeq& s) {
    USeq r = s;
    for (auto& a : r) a.dir = a.dir == Dir::Out ? Dir::In : Dir::Out;
    return r;
}

bool dual(const USeq& a, const USeq& b) { return a == complement(b); }

bool weak_dual(const USeq& a, const USeq& b, std::size_t cap) {
    if (a.size() != b.size()) return false;
    auto ca = precsim_closure(a, cap);
    for (const USeq& y : precsim_closure(b, cap))
        if (ca.count(complement(y))) return true;
    return false;
}

std::set<USeq> input_histories(const USeq& s, const Label& l, std::size_t cap) {
    std::set<USeq> r;
    for (const USeq& th : precsim_closure(s, cap)) {
        std::size_t k = th.size();
        while (k > 0 && th[k - 1].dir == Dir::Out) --k;
        if (k == 0 || th[k - 1].label != l) continue;
        r.insert(USeq(th.begin(), th.begin() + static_cast<std::ptrdiff_t>(k - 1)));
    }
    return r;
}

} // namespace asess
