#include "support.hpp"

#include <algorithm>
#include <deque>
#include <filesystem>
#include <map>

#include "asess/semantics.hpp"
#include "asess/typing.hpp"

namespace asess::testing {

std::string corpus_path(const std::string& file) { return std::string(ASESS_CORPUS_DIR) + "/" + file; }

SessionFile load_corpus(const std::string& file) { return load_session(corpus_path(file)); }

std::vector<std::string> corpus_files() {
    std::vector<std::string> r;
    for (const auto& e : std::filesystem::directory_iterator(ASESS_CORPUS_DIR))
        if (e.path().extension() == ".sess") r.push_back(e.path().filename().string());
    std::sort(r.begin(), r.end());
    return r;
}

Network network_of(const AsyncType& t) {
    Network n;
    n.queue = t.queue;
    for (const auto& p : players(t.global)) {
        auto pr = project(t.global, p);
        if (!pr.defined()) throw PreconditionError("no projection on " + p);
        n.procs.emplace(p, *pr.process);
    }
    return n;
}

namespace {

const std::vector<Participant> kRoles{"p", "q", "r"};
const std::vector<Label> kLabels{"a", "b"};

struct TypeBuilder {
    Gen& g;
    int budget;
    bool loops;

    GlobalTerm input(std::vector<Message> pending, std::size_t idx, int depth) {
        Message m = pending[idx];
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(idx));
        return GlobalTerm::recv(m.from, m.to, m.label, build(std::move(pending), depth + 1));
    }

    GlobalTerm build(std::vector<Message> pending, int depth) {
        // a message may be read only if it is the first one on its channel
        std::vector<std::size_t> heads;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            bool first = true;
            for (std::size_t j = 0; j < i; ++j)
                if (pending[j].from == pending[i].from && pending[j].to == pending[i].to) first = false;
            if (first) heads.push_back(i);
        }
        if (budget <= 0 || depth > 8) {
            if (pending.empty()) return loops && g.chance(0.5) ? GlobalTerm::reference("X") : GlobalTerm::end();
            return input(std::move(pending), g.pick(heads), depth);
        }
        --budget;
        if (!heads.empty() && g.chance(0.55)) return input(std::move(pending), g.pick(heads), depth);
        if (pending.empty() && depth > 0 && g.chance(0.2))
            return loops && g.chance(0.5) ? GlobalTerm::reference("X") : GlobalTerm::end();
        Participant p = g.pick(kRoles);
        Participant q = g.pick(kRoles);
        while (q == p) q = g.pick(kRoles);
        std::size_t width = g.chance(0.3) ? 2 : 1;
        std::vector<std::pair<Label, GlobalTerm>> branches;
        std::size_t first = g.below(kLabels.size());
        for (std::size_t i = 0; i < width; ++i) {
            const Label& l = kLabels[(first + i) % kLabels.size()];
            auto next = pending;
            next.push_back(Message{p, l, q});
            branches.emplace_back(l, build(std::move(next), depth + 1));
        }
        return GlobalTerm::choice(p, q, std::move(branches));
    }
};

} // namespace

AsyncType random_wellformed_type(Gen& g, std::size_t max_nodes) {
    for (;;) {
        TypeBuilder b{g, static_cast<int>(g.between(2, max_nodes)), g.chance(0.3)};
        Queue q;
        if (g.chance(0.25)) {
            std::size_t n = g.between(1, 2);
            for (std::size_t i = 0; i < n; ++i) {
                Participant p = g.pick(kRoles);
                Participant r = g.pick(kRoles);
                while (r == p) r = g.pick(kRoles);
                q.msgs.push_back(Message{p, g.pick(kLabels), r});
            }
        }
        GlobalTerm body = b.build(q.msgs, 0);
        if (body.kind == GlobalTerm::Kind::Ref) continue;
        DefEnv env;
        env.globals["X"] = body;
        AsyncType t;
        try {
            t = AsyncType{compile_global(GlobalTerm::reference("X"), env), q};
        } catch (const DefinitionError&) {
            continue;
        }
        if (t.global.is_end() || graph_size(t.global) > max_nodes) continue;
        if (!well_formed(t).ok) continue;
        return t;
    }
}

TypedPair random_typed_pair(Gen& g, std::size_t max_nodes) {
    for (;;) {
        AsyncType t = random_wellformed_type(g, max_nodes);
        Network n = network_of(t);
        std::size_t steps = g.below(3);
        bool ok = true;
        for (std::size_t i = 0; i < steps && ok; ++i) {
            auto en = type_enabled(t);
            if (en.empty()) break;
            Comm beta = g.pick(en);
            auto n2 = try_net_step(n, beta);
            if (!n2) {
                ok = false;
                break;
            }
            n = *n2;
            t = type_step(t, beta);
        }
        if (ok && typecheck(n, t).ok) return TypedPair{n, t};
    }
}

WfTrace random_wf_trace(Gen& g, std::size_t max_omega, std::size_t min_len, std::size_t max_len) {
    static const std::vector<Participant> roles{"p", "q", "r", "s"};
    WfTrace w;
    std::map<std::pair<Participant, Participant>, std::deque<Label>> chans;
    auto output = [&](Trace& into) {
        Participant p = g.pick(roles);
        Participant q = g.pick(roles);
        while (q == p) q = g.pick(roles);
        Label l = g.pick(kLabels);
        into.push_back(out(p, q, l));
        chans[{p, q}].push_back(l);
    };
    std::size_t k = g.below(max_omega + 1);
    for (std::size_t i = 0; i < k; ++i) output(w.omega);
    std::size_t len = g.between(min_len, max_len);
    while (w.trace.size() < len) {
        std::vector<std::pair<Participant, Participant>> full;
        for (const auto& [ch, q] : chans)
            if (!q.empty()) full.push_back(ch);
        if (!full.empty() && g.chance(0.5)) {
            auto ch = g.pick(full);
            w.trace.push_back(in(ch.first, ch.second, chans[ch].front()));
            chans[ch].pop_front();
        } else {
            output(w.trace);
        }
    }
    return w;
}

EventStructure random_es(Gen& g, EventStructure::Kind kind, std::size_t n) {
    for (;;) {
        EventStructure es;
        es.kind = kind;
        for (std::size_t i = 0; i < n; ++i) {
            es.names.push_back("e" + std::to_string(i));
            es.labels.push_back("e" + std::to_string(i));
        }
        es.rel.assign(n, std::vector<char>(n, 0));
        es.conflict.assign(n, std::vector<char>(n, 0));
        if (kind == EventStructure::Kind::Prime) {
            for (std::size_t i = 0; i < n; ++i) es.rel[i][i] = 1;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (g.chance(0.25)) es.rel[i][j] = 1;
            for (std::size_t m = 0; m < n; ++m)
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        if (es.rel[i][m] && es.rel[m][j]) es.rel[i][j] = 1;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (!es.rel[i][j] && g.chance(0.15)) es.conflict[i][j] = es.conflict[j][i] = 1;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (es.conflict[i][j])
                        for (std::size_t a = 0; a < n; ++a)
                            for (std::size_t b = 0; b < n; ++b)
                                if (es.rel[i][a] && es.rel[j][b]) es.conflict[a][b] = es.conflict[b][a] = 1;
        } else {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (i != j && g.chance(0.2)) es.rel[i][j] = 1;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (g.chance(0.15)) es.conflict[i][j] = es.conflict[j][i] = 1;
        }
        if (!check_laws(es)) return es;
    }
}

std::vector<std::size_t> members(std::uint32_t set) {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < 32; ++i)
        if (set >> i & 1u) r.push_back(i);
    return r;
}

namespace {

bool appendable(const EventStructure& es, std::uint32_t set, std::size_t e) {
    if (set >> e & 1u) return false;
    if (es.conflict[e][e]) return false;
    for (std::size_t x : members(set))
        if (es.conflict[x][e]) return false;
    for (std::size_t c = 0; c < es.size(); ++c) {
        if (c == e || !es.rel[c][e]) continue;
        if (set >> c & 1u) continue;
        if (es.kind == EventStructure::Kind::Prime) return false;
        bool excused = false;
        for (std::size_t k : members(set))
            if (es.conflict[c][k] && es.rel[k][e]) excused = true;
        if (!excused) return false;
    }
    return true;
}

} // namespace

std::vector<bool> provable_sets(const EventStructure& es) {
    const std::uint32_t full = 1u << es.size();
    std::vector<bool> reach(full, false);
    reach[0] = true;
    for (std::uint32_t s = 0; s < full; ++s) {
        if (!reach[s]) continue;
        for (std::size_t e = 0; e < es.size(); ++e)
            if (appendable(es, s, e)) reach[s | (1u << e)] = true;
    }
    return reach;
}

bool oracle_configuration(const EventStructure& es, std::uint32_t set) {
    auto xs = members(set);
    for (std::size_t a : xs)
        for (std::size_t b : xs)
            if (es.conflict[a][b]) return false;
    for (std::size_t e : xs)
        for (std::size_t c = 0; c < es.size(); ++c) {
            if (c == e || !es.rel[c][e] || (set >> c & 1u)) continue;
            if (es.kind == EventStructure::Kind::Prime) return false;
            bool excused = false;
            for (std::size_t k : xs)
                if (es.conflict[c][k] && es.rel[k][e]) excused = true;
            if (!excused) return false;
        }
    if (es.kind == EventStructure::Kind::Flow) {
        // no cycle of the flow inside the set: repeatedly drop members without predecessors
        std::uint32_t left = set;
        bool progress = true;
        while (left && progress) {
            progress = false;
            for (std::size_t e : members(left)) {
                bool has_pred = false;
                for (std::size_t c : members(left))
                    if (c != e && es.rel[c][e]) has_pred = true;
                if (!has_pred) {
                    left &= ~(1u << e);
                    progress = true;
                }
            }
        }
        if (left) return false;
    }
    return true;
}

} // namespace asess::testing
