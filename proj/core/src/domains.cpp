#include "asess/domains.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "asess/semantics.hpp"
#include "asess/typing.hpp"

namespace asess {

namespace {

bool contains(const Config& x, std::size_t e) { return std::binary_search(x.begin(), x.end(), e); }

bool conflict_free(const EventStructure& es, const std::vector<std::size_t>& x) {
    for (std::size_t a = 0; a < x.size(); ++a)
        for (std::size_t b = a; b < x.size(); ++b)
            if (es.conflicts(x[a], x[b])) return false;
    return true;
}

bool flow_acyclic(const EventStructure& es, const Config& x) {
    // Kahn's algorithm on the flow restricted to x
    std::vector<std::size_t> indeg(x.size(), 0);
    for (std::size_t a = 0; a < x.size(); ++a)
        for (std::size_t b = 0; b < x.size(); ++b)
            if (es.before(x[a], x[b])) ++indeg[b];
    std::vector<std::size_t> ready;
    for (std::size_t b = 0; b < x.size(); ++b)
        if (!indeg[b]) ready.push_back(b);
    std::size_t done = 0;
    while (!ready.empty()) {
        std::size_t a = ready.back();
        ready.pop_back();
        ++done;
        for (std::size_t b = 0; b < x.size(); ++b)
            if (es.before(x[a], x[b]) && --indeg[b] == 0) ready.push_back(b);
    }
    return done == x.size();
}

} // namespace

bool is_configuration(const EventStructure& es, const Config& x0) {
    Config x = x0;
    std::sort(x.begin(), x.end());
    if (std::adjacent_find(x.begin(), x.end()) != x.end()) return false;
    for (std::size_t e : x)
        if (e >= es.size()) return false;
    if (!conflict_free(es, x)) return false;
    for (std::size_t e : x)
        for (std::size_t c = 0; c < es.size(); ++c) {
            if (!es.strictly_before(c, e) || contains(x, c)) continue;
            if (es.kind == EventStructure::Kind::Prime) return false;
            bool covered = std::any_of(x.begin(), x.end(), [&](std::size_t d) {
                return es.conflicts(c, d) && es.before(d, e);
            });
            if (!covered) return false;
        }
    return es.kind == EventStructure::Kind::Prime || flow_acyclic(es, x);
}

bool is_proving_sequence(const EventStructure& es, const std::vector<std::size_t>& seq) {
    std::set<std::size_t> distinct(seq.begin(), seq.end());
    if (distinct.size() != seq.size()) return false;
    for (std::size_t e : seq)
        if (e >= es.size()) return false;
    if (!conflict_free(es, seq)) return false;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t c = 0; c < es.size(); ++c) {
            if (!es.strictly_before(c, seq[i])) continue;
            bool ok = false;
            for (std::size_t k = 0; k < i && !ok; ++k) {
                if (seq[k] == c) ok = true;
                else if (es.kind == EventStructure::Kind::Flow && es.conflicts(c, seq[k]) &&
                         es.before(seq[k], seq[i]))
                    ok = true;
            }
            if (!ok) return false;
        }
    return true;
}

Domain enumerate_configurations(const EventStructure& es, std::size_t k) {
    Domain d;
    d.max_size = k;
    std::vector<Config> layer{Config{}};
    d.configs.push_back(Config{});
    for (std::size_t size = 1; size <= k && !layer.empty(); ++size) {
        std::set<Config> next;
        for (const Config& x : layer)
            for (std::size_t e = 0; e < es.size(); ++e) {
                if (contains(x, e)) continue;
                Config y = x;
                y.insert(std::upper_bound(y.begin(), y.end(), e), e);
                if (!next.count(y) && is_configuration(es, y)) next.insert(std::move(y));
            }
        layer.assign(next.begin(), next.end());
        d.configs.insert(d.configs.end(), layer.begin(), layer.end());
    }
    return d;
}

std::string to_string(const EventStructure& es, const Config& x) {
    std::string r = "{";
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i) r += ", ";
        r += es.names[x[i]];
    }
    return r + "}";
}

std::size_t type_depth_for(const Global& g, std::size_t k) {
    auto nodes = reachable(g);
    bool cyclic = std::any_of(nodes.begin(), nodes.end(), [&](NodeId n) { return is_cyclic(g.at(n)); });
    if (cyclic) {
        // Each step of a run is the first action of its player, found within the deepest
        // first-action depth of some subterm below the previous step.
        std::size_t deepest = 1;
        for (NodeId n : nodes) {
            Global sub = g.at(n);
            for (const auto& p : players(sub)) {
                Depth d = depth(sub, p);
                if (!d.infinite) deepest = std::max(deepest, d.value);
            }
        }
        return std::max(k + 2 * graph_size(g), k * deepest);
    }
    std::map<NodeId, std::size_t> memo;
    std::function<std::size_t(NodeId)> longest = [&](NodeId n) -> std::size_t {
        auto it = memo.find(n);
        if (it != memo.end()) return it->second;
        std::size_t best = 0;
        for (const Branch& b : g.graph().nodes[n].branches) best = std::max(best, 1 + longest(b.next));
        return memo[n] = best;
    };
    return std::max(k, longest(g.id()));
}

IsoReport domain_iso(const Network& n, const AsyncType& t, std::size_t k) {
    auto typing = typecheck(n, t);
    if (!typing.ok) {
        std::string why = typing.diags.empty() ? std::string("the pair does not typecheck") : to_string(typing.diags.front());
        throw PreconditionError("domain comparison needs a typed pair: " + why);
    }
    IsoReport rep;
    rep.depth = k;
    rep.type_depth = type_depth_for(t.global, k);
    NetworkES fes = fes_of_network(n, k);
    TypeES pes = pes_of_type(t, rep.type_depth);
    Domain dn = enumerate_configurations(fes.es, k);
    Domain dt = enumerate_configurations(pes.es, k);
    rep.net_configs = dn.nonempty();
    rep.type_configs = dt.nonempty();

    auto fail = [&](std::string why) {
        rep.ok = false;
        if (rep.failure.empty()) rep.failure = std::move(why);
    };

    std::set<Config> net_set(dn.configs.begin(), dn.configs.end());
    std::set<Config> type_set(dt.configs.begin(), dt.configs.end());
    std::map<Config, Config> fwd;
    std::map<Config, Config> bwd;
    const OTrace& w = pes.omega;
    for (const Trace& tr : net_traces(n, k)) {
        if (tr.empty()) continue;
        Config cn, ct;
        auto ns = nec(tr);
        auto ts = tec(w, tr);
        for (std::size_t i = 0; i < tr.size(); ++i) {
            auto a = fes.index_of(ns[i]);
            auto b = pes.index_of(ts[i]);
            if (!a) {
                fail("trace " + to_string(tr) + " yields " + to_string(ns[i]) + ", not an event of the network");
                return rep;
            }
            if (!b) {
                fail("trace " + to_string(tr) + " yields " + to_string(ts[i]) + ", not an event of the type");
                return rep;
            }
            if (nevent_io(ns[i]) != tr[i] || tevent_io(ts[i]) != tr[i])
                fail("position " + std::to_string(i + 1) + " of " + to_string(tr) + " changes its communication");
            cn.push_back(*a);
            ct.push_back(*b);
        }
        std::sort(cn.begin(), cn.end());
        std::sort(ct.begin(), ct.end());
        if (!net_set.count(cn)) fail(to_string(fes.es, cn) + " from " + to_string(tr) + " is not a configuration of the network");
        if (!type_set.count(ct)) fail(to_string(pes.es, ct) + " from " + to_string(tr) + " is not a configuration of the type");
        auto [it, fresh] = fwd.emplace(cn, ct);
        if (!fresh && it->second != ct) fail("network configuration " + to_string(fes.es, cn) + " has two images");
        auto [jt, fresh2] = bwd.emplace(ct, cn);
        if (!fresh2 && jt->second != cn) fail("type configuration " + to_string(pes.es, ct) + " has two preimages");
    }
    for (const Config& x : dn.configs)
        if (!x.empty() && !fwd.count(x)) fail("network configuration " + to_string(fes.es, x) + " is reached by no trace");
    for (const Config& x : dt.configs)
        if (!x.empty() && !bwd.count(x)) fail("type configuration " + to_string(pes.es, x) + " is reached by no trace");

    auto subset = [](const Config& a, const Config& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); };
    for (const auto& [x, fx] : fwd)
        for (const auto& [y, fy] : fwd)
            if (subset(x, y) != subset(fx, fy))
                fail("inclusion between " + to_string(fes.es, x) + " and " + to_string(fes.es, y) + " is not preserved");

    for (const auto& [x, fx] : fwd) rep.table.emplace_back(to_string(fes.es, x), to_string(pes.es, fx));
    return rep;
}

} // namespace asess
