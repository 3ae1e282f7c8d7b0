#include "asess/typing.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "asess/semantics.hpp"

namespace asess {

std::string to_string(const Diagnostic& d) {
    std::string s = d.warning ? "warning" : "error";
    s += " [" + d.code + "]";
    if (!d.location.empty()) s += " at " + d.location;
    return s + ": " + d.message;
}

namespace {

std::string describe(const Global& g, NodeId n) {
    const auto& names = g.graph().names;
    if (auto it = names.find(n); it != names.end()) return it->second;
    const GlobalNode& node = g.graph().nodes[n];
    switch (node.kind) {
    case GlobalNode::Kind::End: return "End";
    case GlobalNode::Kind::In: return node.from + "->" + node.to + "?" + node.branches[0].label;
    case GlobalNode::Kind::Out: {
        std::string s = node.from + "->" + node.to + "!";
        if (node.branches.size() == 1) return s + node.branches[0].label;
        s += "{";
        for (std::size_t i = 0; i < node.branches.size(); ++i) s += (i ? "," : "") + node.branches[i].label;
        return s + "}";
    }
    }
    return "?";
}

const Participant& node_player(const GlobalNode& n) { return n.kind == GlobalNode::Kind::Out ? n.from : n.to; }

class PlayerCache {
public:
    explicit PlayerCache(const Global& g) : g_(g) {}
    const std::set<Participant>& at(NodeId n) {
        auto it = cache_.find(n);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(n, players(g_.at(n))).first->second;
    }

private:
    const Global& g_;
    std::unordered_map<NodeId, std::set<Participant>> cache_;
};

// ---------------------------------------------------------------------------
// Projection

struct ProjFail {
    Diagnostic d;
};

class Projector {
public:
    Projector(const Global& g, const Participant& r) : g_(g), r_(r), play_(g) {}

    Process run() {
        NodeId root = proj(g_.id());
        auto res = resolve_all();
        for (auto [a, b] : obligations_) {
            Process pa(res.graph, res.map.at(resolve(a.first)));
            Process pb(res.graph, res.map.at(resolve(b)));
            if (!regular_equal(pa, pb))
                throw ProjFail{{"proj.outsider-mismatch", describe(g_, a.second),
                                "branches of the choice project differently on " + r_, false}};
        }
        return compact(Process(res.graph, res.map.at(resolve(root))));
    }

private:
    struct PNode {
        enum class K { Pending, Nil, Out, In, Alias };
        K k = K::Pending;
        Participant peer;
        std::vector<Branch> br;
        NodeId alias = 0;
    };

    struct Resolved {
        std::shared_ptr<ProcGraph> graph;
        std::unordered_map<NodeId, NodeId> map;
    };

    NodeId fresh() { return fresh(PNode{}); }
    NodeId fresh(PNode n) {
        nodes_.push_back(std::move(n));
        return static_cast<NodeId>(nodes_.size() - 1);
    }

    [[noreturn]] void fail(const std::string& code, NodeId gn, const std::string& msg) const {
        throw ProjFail{{code, describe(g_, gn), msg, false}};
    }

    NodeId proj(NodeId n) {
        if (auto it = memo_.find(n); it != memo_.end()) return it->second;
        NodeId id = fresh();
        memo_[n] = id;
        if (!play_.at(n).count(r_)) {
            nodes_[id].k = PNode::K::Nil;
            return id;
        }
        const GlobalNode gn = g_.graph().nodes[n];
        PNode out;
        switch (gn.kind) {
        case GlobalNode::Kind::End: out.k = PNode::K::Nil; break;
        case GlobalNode::Kind::In: {
            if (r_ == gn.to) {
                guarded(id, PNode::K::In, gn.from, gn);
                return id;
            }
            out.k = PNode::K::Alias;
            out.alias = proj(gn.branches[0].next);
            break;
        }
        case GlobalNode::Kind::Out: {
            if (r_ == gn.from) {
                guarded(id, PNode::K::Out, gn.to, gn);
                return id;
            } else if (r_ == gn.to) {
                std::vector<NodeId> cs;
                for (const auto& b : gn.branches) cs.push_back(proj(b.next));
                out.k = PNode::K::Alias;
                out.alias = cs.size() == 1 ? cs[0] : factorize(n, gn, cs);
            } else {
                for (const auto& b : gn.branches)
                    if (!play_.at(b.next).count(r_))
                        fail("proj.outsider-absent", n,
                             r_ + " does not occur in every branch of the choice (branch " + b.label + ")");
                std::vector<NodeId> cs;
                for (const auto& b : gn.branches) cs.push_back(proj(b.next));
                for (std::size_t i = 1; i < cs.size(); ++i) obligations_.push_back({{cs[i], n}, cs[0]});
                out.k = PNode::K::Alias;
                out.alias = cs[0];
            }
            break;
        }
        }
        nodes_[id] = std::move(out);
        return id;
    }

    // A prefix of r is known before its continuations, so the node is filled first
    // with placeholders that later alias the projected continuations.
    void guarded(NodeId id, PNode::K k, const Participant& peer, const GlobalNode& gn) {
        PNode pn;
        pn.k = k;
        pn.peer = peer;
        for (const auto& b : gn.branches) pn.br.push_back(Branch{b.label, fresh()});
        nodes_[id] = pn;
        for (std::size_t i = 0; i < gn.branches.size(); ++i) {
            NodeId c = proj(gn.branches[i].next);
            nodes_[pn.br[i].next].k = PNode::K::Alias;
            nodes_[pn.br[i].next].alias = c;
        }
    }

    // Follows aliases; returns a Pending node if one is reached.
    NodeId resolve(NodeId id) const {
        std::unordered_set<NodeId> seen;
        while (nodes_[id].k == PNode::K::Alias) {
            if (!seen.insert(id).second)
                throw ProjFail{{"proj.unguarded", "", "projection on " + r_ + " is an unguarded recursion", false}};
            id = nodes_[id].alias;
        }
        return id;
    }

    NodeId factorize(NodeId gn_id, const GlobalNode& gn, const std::vector<NodeId>& cs) {
        const std::size_t limit = 2 * graph_size(g_) + 2;
        enum class St { Ok, Mismatch, Pending };
        for (std::size_t n = 0; n <= limit; ++n) {
            std::vector<Action> common;
            std::vector<NodeId> tails;
            bool mismatch = false, pending = false;
            for (std::size_t i = 0; i < cs.size() && !mismatch; ++i) {
                St st = St::Ok;
                NodeId cur = resolve(cs[i]);
                for (std::size_t step = 0; step < n && st == St::Ok; ++step) {
                    const PNode& pn = nodes_[cur];
                    if (pn.k == PNode::K::Pending) {
                        st = St::Pending;
                        break;
                    }
                    if ((pn.k != PNode::K::Out && pn.k != PNode::K::In) || pn.br.size() != 1) {
                        st = St::Mismatch;
                        break;
                    }
                    Action a{pn.k == PNode::K::Out ? Dir::Out : Dir::In, pn.peer, pn.br[0].label};
                    if (i == 0) common.push_back(a);
                    else if (common[step] != a) st = St::Mismatch;
                    cur = resolve(pn.br[0].next);
                }
                if (st == St::Ok) {
                    const PNode& pn = nodes_[cur];
                    if (pn.k == PNode::K::Pending) st = St::Pending;
                    else if (pn.k != PNode::K::In || pn.peer != gn.from || pn.br.size() != 1 ||
                             pn.br[0].label != gn.branches[i].label)
                        st = St::Mismatch;
                    else tails.push_back(pn.br[0].next);
                }
                if (st == St::Mismatch) mismatch = true;
                if (st == St::Pending) pending = true;
            }
            if (mismatch) continue;
            if (pending)
                fail("proj.unresolved", gn_id,
                     "cannot factor the branches on " + r_ + " through an unresolved recursion");
            PNode choice;
            choice.k = PNode::K::In;
            choice.peer = gn.from;
            for (std::size_t i = 0; i < cs.size(); ++i) choice.br.push_back(Branch{gn.branches[i].label, tails[i]});
            NodeId head = fresh(std::move(choice));
            for (std::size_t step = n; step-- > 0;) {
                PNode pre;
                pre.k = common[step].dir == Dir::Out ? PNode::K::Out : PNode::K::In;
                pre.peer = common[step].peer;
                pre.br.push_back(Branch{common[step].label, head});
                head = fresh(std::move(pre));
            }
            return head;
        }
        fail("proj.no-factorization", gn_id,
             "the branches on " + r_ + " do not share a common prefix followed by the input from " + gn.from);
    }

    Resolved resolve_all() {
        Resolved res;
        res.graph = std::make_shared<ProcGraph>();
        for (NodeId i = 0; i < nodes_.size(); ++i) {
            NodeId t = resolve(i);
            if (nodes_[t].k == PNode::K::Pending)
                throw InternalDiagnostic("projection left an unfilled node");
            if (t == i) {
                res.map[i] = static_cast<NodeId>(res.graph->nodes.size());
                res.graph->nodes.emplace_back();
            }
        }
        for (NodeId i = 0; i < nodes_.size(); ++i) {
            NodeId t = resolve(i);
            if (t != i) {
                res.map[i] = res.map.at(t);
                continue;
            }
            const PNode& pn = nodes_[i];
            ProcNode node;
            node.kind = pn.k == PNode::K::Nil  ? ProcNode::Kind::Nil
                        : pn.k == PNode::K::Out ? ProcNode::Kind::Out
                                                : ProcNode::Kind::In;
            node.peer = pn.peer;
            for (const auto& b : pn.br) node.branches.push_back(Branch{b.label, 0});
            res.graph->nodes[res.map.at(i)] = std::move(node);
        }
        for (NodeId i = 0; i < nodes_.size(); ++i) {
            if (resolve(i) != i) continue;
            auto& node = res.graph->nodes[res.map.at(i)];
            for (std::size_t b = 0; b < node.branches.size(); ++b)
                node.branches[b].next = res.map.at(resolve(nodes_[i].br[b].next));
            std::sort(node.branches.begin(), node.branches.end(),
                      [](const Branch& x, const Branch& y) { return x.label < y.label; });
        }
        return res;
    }

    const Global& g_;
    Participant r_;
    PlayerCache play_;
    std::vector<PNode> nodes_;
    std::unordered_map<NodeId, NodeId> memo_;
    std::vector<std::pair<std::pair<NodeId, NodeId>, NodeId>> obligations_;  // ((node, global node), rep)
};

bool is_player_node(const GlobalNode& n, const Participant& p) {
    return n.kind != GlobalNode::Kind::End && node_player(n) == p;
}

} // namespace

Projection project(const Global& g, const Participant& r) {
    Projection res;
    try {
        Projector pr(g, r);
        res.process = pr.run();
    } catch (const ProjFail& f) {
        res.diags.push_back(f.d);
    }
    return res;
}

// ---------------------------------------------------------------------------
// Depth

std::size_t ord(const Trace& t, const Participant& p) {
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i].player() == p) return i + 1;
    return 0;
}

Depth depth(const Global& g, const Participant& p) {
    if (!players(g).count(p)) return Depth::of(0);
    const auto& nodes = g.graph().nodes;
    if (is_player_node(nodes[g.id()], p)) return Depth::of(1);

    // p-free nodes reachable from the root without meeting p.
    std::vector<NodeId> free;
    std::unordered_set<NodeId> in_free;
    std::vector<NodeId> todo{g.id()};
    in_free.insert(g.id());
    while (!todo.empty()) {
        NodeId n = todo.back();
        todo.pop_back();
        free.push_back(n);
        for (const auto& b : nodes[n].branches)
            if (!is_player_node(nodes[b.next], p) && in_free.insert(b.next).second) todo.push_back(b.next);
    }
    // Keep those that lead to a p-node through p-free nodes.
    std::unordered_set<NodeId> good;
    bool changed = true;
    while (changed) {
        changed = false;
        for (NodeId n : free) {
            if (good.count(n)) continue;
            for (const auto& b : nodes[n].branches) {
                if (is_player_node(nodes[b.next], p) || good.count(b.next)) {
                    good.insert(n);
                    changed = true;
                    break;
                }
            }
        }
    }
    // Longest path with cycle detection.
    std::unordered_map<NodeId, int> state;  // 1 on stack, 2 done
    std::unordered_map<NodeId, std::size_t> len;
    bool cyclic = false;
    std::function<std::size_t(NodeId)> visit = [&](NodeId n) -> std::size_t {
        state[n] = 1;
        std::size_t best = 0;
        for (const auto& b : nodes[n].branches) {
            if (is_player_node(nodes[b.next], p)) {
                best = std::max<std::size_t>(best, 1);
            } else if (good.count(b.next)) {
                int s = state[b.next];
                if (s == 1) {
                    cyclic = true;
                    continue;
                }
                std::size_t l = s == 2 ? len[b.next] : visit(b.next);
                best = std::max(best, l);
            }
        }
        state[n] = 2;
        return len[n] = best + 1;
    };
    std::size_t d = visit(g.id());
    if (cyclic) return Depth::inf();
    return Depth::of(d);
}

BoundedReport bounded(const Global& g) {
    BoundedReport rep;
    for (NodeId n : reachable(g)) {
        Global sub = g.at(n);
        for (const auto& p : players(sub)) {
            if (depth(sub, p).infinite) {
                rep.ok = false;
                rep.offenders.emplace_back(n, p);
                rep.diags.push_back({"bounded.infinite-depth", describe(g, n),
                                     "depth of " + p + " is infinite", false});
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Balancing

BalanceReport balanced(const AsyncType& t) {
    BalanceReport rep;
    const Global& g = t.global;
    const auto& nodes = g.graph().nodes;
    const std::size_t limit = t.queue.size() + graph_size(g);
    std::unordered_set<std::string> seen;
    std::unordered_map<NodeId, bool> cyclic;
    auto is_cyc = [&](NodeId n) {
        auto it = cyclic.find(n);
        if (it != cyclic.end()) return it->second;
        return cyclic[n] = is_cyclic(g.at(n));
    };
    auto bad = [&](const std::string& code, NodeId n, const std::string& msg) {
        rep.ok = false;
        rep.diags.push_back({code, describe(g, n), msg, false});
        return false;
    };
    std::function<bool(NodeId, const Queue&)> visit = [&](NodeId n, const Queue& m) -> bool {
        std::string key = describe(g, n) + "#" + std::to_string(n) + " || " + queue_key(m);
        if (!seen.insert(key).second) return true;
        rep.derivation.push_back(describe(g, n) + " || " + to_string(canonical(m)));
        if (m.size() > limit) {
            rep.diverged = true;
            return bad("balance.divergence", n, "queue grows beyond " + std::to_string(limit) + " messages");
        }
        const GlobalNode& node = nodes[n];
        switch (node.kind) {
        case GlobalNode::Kind::End:
            if (!m.empty()) return bad("balance.end-queue", n, "End reached with queue " + to_string(m));
            return true;
        case GlobalNode::Kind::In: {
            auto idx = m.first_on(node.from, node.to);
            if (!idx || m.msgs[*idx].label != node.branches[0].label)
                return bad("balance.unmatched-input", n,
                           "no message <" + node.from + " " + node.branches[0].label + " " + node.to +
                               "> at the head of its channel in " + to_string(m));
            return visit(node.branches[0].next, m.erased(*idx));
        }
        case GlobalNode::Kind::Out:
            if (!m.empty() && is_cyc(n))
                return bad("balance.cyclic-nonempty", n, "cyclic output reached with queue " + to_string(m));
            for (const auto& b : node.branches)
                if (!visit(b.next, m.pushed(Message{node.from, b.label, node.to}))) return false;
            return true;
        }
        return false;
    };
    visit(g.id(), t.queue);
    return rep;
}

// ---------------------------------------------------------------------------

WellFormedReport well_formed(const AsyncType& t) {
    WellFormedReport rep;
    auto bal = balanced(t);
    rep.balanced = bal.ok;
    rep.diags.insert(rep.diags.end(), bal.diags.begin(), bal.diags.end());
    auto bnd = bounded(t.global);
    rep.bounded = bnd.ok;
    rep.diags.insert(rep.diags.end(), bnd.diags.begin(), bnd.diags.end());
    rep.projectable = true;
    for (const auto& p : players(t.global)) {
        auto pr = project(t.global, p);
        if (!pr.defined()) {
            rep.projectable = false;
            for (auto d : pr.diags) {
                d.message = "projection on " + p + ": " + d.message;
                rep.diags.push_back(d);
            }
        }
        rep.projections.emplace(p, std::move(pr));
    }
    for (NodeId n : reachable(t.global)) {
        const GlobalNode& node = t.global.graph().nodes[n];
        if (node.kind != GlobalNode::Kind::End && node.from == node.to)
            rep.diags.push_back({"lint.self-communication", describe(t.global, n),
                                 "participant " + node.from + " communicates with itself", true});
    }
    rep.ok = rep.balanced && rep.bounded && rep.projectable;
    return rep;
}

bool proc_leq(const Process& p, const Process& q) {
    std::set<std::pair<NodeId, NodeId>> seen;
    std::vector<std::pair<NodeId, NodeId>> todo{{p.id(), q.id()}};
    while (!todo.empty()) {
        auto [a, b] = todo.back();
        todo.pop_back();
        if (!seen.insert({a, b}).second) continue;
        const ProcNode& x = p.graph().nodes[a];
        const ProcNode& y = q.graph().nodes[b];
        if (x.kind != y.kind) return false;
        if (x.kind == ProcNode::Kind::Nil) continue;
        if (x.peer != y.peer) return false;
        if (x.kind == ProcNode::Kind::Out && x.branches.size() != y.branches.size()) return false;
        for (const auto& yb : y.branches) {
            auto it = std::find_if(x.branches.begin(), x.branches.end(),
                                   [&](const Branch& xb) { return xb.label == yb.label; });
            if (it == x.branches.end()) return false;
            todo.emplace_back(it->next, yb.next);
        }
    }
    return true;
}

TypingReport typecheck(const Network& n, const AsyncType& t) {
    TypingReport rep;
    if (!queue_equiv(n.queue, t.queue)) {
        rep.ok = false;
        rep.diags.push_back({"typing.queue", "", "network queue " + to_string(n.queue) +
                                                     " differs from type queue " + to_string(t.queue), false});
    }
    rep.wf = well_formed(t);
    if (!rep.wf.ok) {
        rep.ok = false;
        rep.diags.push_back({"typing.ill-formed", "", "the asynchronous type is not well formed", false});
    }
    auto play = players(t.global);
    auto active = n.active();
    for (const auto& p : play) {
        if (!active.count(p)) {
            rep.ok = false;
            rep.diags.push_back({"typing.missing-participant", p,
                                 "player " + p + " of the type has no active process in the network", false});
        }
    }
    for (const auto& [p, proc] : n.procs) {
        if (!play.count(p)) {
            if (!proc.is_nil()) {
                rep.ok = false;
                rep.diags.push_back({"typing.extra-participant", p,
                                     p + " is not a player of the type but its process is not 0", false});
            }
            continue;
        }
        const auto& pr = rep.wf.projections.at(p);
        if (!pr.defined()) continue;
        if (!proc_leq(proc, *pr.process)) {
            rep.ok = false;
            rep.diags.push_back({"typing.preorder", p, "the process of " + p + " is not below its projection",
                                 false});
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Progress

Depth idepth(const Global& g, const Comm& input) {
    const auto& nodes = g.graph().nodes;
    std::unordered_map<NodeId, Depth> memo;
    std::unordered_set<NodeId> stack;
    std::function<Depth(NodeId)> go = [&](NodeId n) -> Depth {
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        if (stack.count(n)) return Depth::inf();
        stack.insert(n);
        const GlobalNode& node = nodes[n];
        Depth r;
        switch (node.kind) {
        case GlobalNode::Kind::End: r = Depth::inf(); break;
        case GlobalNode::Kind::In:
            if (in(node.from, node.to, node.branches[0].label) == input) {
                r = Depth::of(1);
            } else {
                Depth c = go(node.branches[0].next);
                r = c.infinite ? c : Depth::of(c.value + 1);
            }
            break;
        case GlobalNode::Kind::Out: {
            std::size_t best = 0;
            bool inf = false;
            for (const auto& b : node.branches) {
                Depth c = go(b.next);
                if (c.infinite) inf = true;
                else best = std::max(best, c.value);
            }
            r = inf ? Depth::inf() : Depth::of(best + 1);
            break;
        }
        }
        stack.erase(n);
        memo[n] = r;
        return r;
    };
    return go(g.id());
}

namespace {

Comm root_comm(const AsyncType& cur) {
    if (cur.global.is_end()) throw InternalDiagnostic("progress walk reached End before the target");
    return cur.global.comm(0);
}

} // namespace

ProgressWitness progress_witness(const Network& n, const AsyncType& t, const ProgressTarget& target) {
    auto tc = typecheck(n, t);
    if (!tc.ok) throw PreconditionError("progress requires a typed network");
    ProgressWitness w;
    AsyncType cur = t;
    if (target.kind == ProgressTarget::Kind::Participant) {
        const Participant& p = target.participant;
        auto it = n.procs.find(p);
        if (it == n.procs.end() || it->second.is_nil())
            throw PreconditionError("participant " + p + " has no active process");
        Depth d = depth(t.global, p);
        if (d.infinite) throw InternalDiagnostic("depth of " + p + " is infinite in a bounded type");
        w.bound = d.value;
        while (true) {
            Comm b = root_comm(cur);
            cur = type_step(cur, b);
            w.trace.push_back(b);
            if (w.trace.size() > w.bound)
                throw InternalDiagnostic("progress bound " + std::to_string(w.bound) + " exceeded for " + p);
            if (b.player() == p) break;
        }
    } else {
        if (target.message_index >= n.queue.size()) throw PreconditionError("no queued message at that index");
        const Message& m = n.queue.msgs[target.message_index];
        std::size_t rank = 0;
        for (std::size_t i = 0; i <= target.message_index; ++i)
            if (n.queue.msgs[i].from == m.from && n.queue.msgs[i].to == m.to) ++rank;
        std::size_t consumed = 0;
        while (consumed < rank) {
            auto idx = cur.queue.first_on(m.from, m.to);
            if (!idx) throw InternalDiagnostic("message channel drained unexpectedly");
            Comm want = in(m.from, m.to, cur.queue.msgs[*idx].label);
            Depth d = idepth(cur.global, want);
            if (d.infinite) throw InternalDiagnostic("input depth of " + to_string(want) + " is infinite");
            w.bound += d.value;
            std::size_t seg = 0;
            while (true) {
                Comm b = root_comm(cur);
                cur = type_step(cur, b);
                w.trace.push_back(b);
                if (++seg > d.value)
                    throw InternalDiagnostic("input depth bound exceeded for " + to_string(want));
                if (b == want) break;
            }
            ++consumed;
        }
    }
    try {
        net_run(n, w.trace);
    } catch (const NotEnabled& e) {
        throw InternalDiagnostic(std::string("network cannot follow the witness: ") + e.what());
    }
    return w;
}

} // namespace asess
