#include "asess/semantics.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <unordered_set>

namespace asess {

std::vector<Comm> net_enabled(const Network& n) {
    std::vector<Comm> r;
    for (const auto& [p, proc] : n.procs) {
        switch (proc.kind()) {
        case ProcNode::Kind::Nil: break;
        case ProcNode::Kind::Out:
            for (const auto& b : proc.branches()) r.push_back(out(p, proc.peer(), b.label));
            break;
        case ProcNode::Kind::In: {
            auto idx = n.queue.first_on(proc.peer(), p);
            if (!idx) break;
            const Label& l = n.queue.msgs[*idx].label;
            if (proc.child(l)) r.push_back(in(proc.peer(), p, l));
            break;
        }
        }
    }
    std::sort(r.begin(), r.end());
    return r;
}

std::optional<Network> try_net_step(const Network& n, const Comm& beta) {
    auto it = n.procs.find(beta.player());
    if (it == n.procs.end()) return std::nullopt;
    const Process& proc = it->second;
    if (beta.dir == Dir::Out) {
        if (proc.kind() != ProcNode::Kind::Out || proc.peer() != beta.to) return std::nullopt;
        auto c = proc.child(beta.label);
        if (!c) return std::nullopt;
        Network r = n;
        r.procs.at(beta.from) = *c;
        r.queue.msgs.push_back(Message{beta.from, beta.label, beta.to});
        return r;
    }
    if (proc.kind() != ProcNode::Kind::In || proc.peer() != beta.from) return std::nullopt;
    auto idx = n.queue.first_on(beta.from, beta.to);
    if (!idx || n.queue.msgs[*idx].label != beta.label) return std::nullopt;
    auto c = proc.child(beta.label);
    if (!c) return std::nullopt;
    Network r = n;
    r.procs.at(beta.to) = *c;
    r.queue = r.queue.erased(*idx);
    return r;
}

Network net_step(const Network& n, const Comm& beta) {
    auto r = try_net_step(n, beta);
    if (!r) throw NotEnabled(to_string(beta), 1);
    return *r;
}

Network net_run(const Network& n, const Trace& t) {
    Network cur = n;
    for (std::size_t i = 0; i < t.size(); ++i) {
        auto r = try_net_step(cur, t[i]);
        if (!r) throw NotEnabled(to_string(t[i]), i + 1);
        cur = std::move(*r);
    }
    return cur;
}

namespace {

struct Stepped {
    NodeId node;
    Queue queue;
};

class TypeStepper {
public:
    TypeStepper(const Global& g, const Comm& beta)
        : g_(g), nodes_(g.graph().nodes), beta_(beta), builder_(g.graph()), guard_(2 * graph_size(g) + 2) {}

    std::optional<AsyncType> run(const Queue& m) {
        auto r = step(g_.id(), m, 0);
        if (!r) return std::nullopt;
        return AsyncType{builder_.finish(r->node), r->queue};
    }

private:
    std::optional<Stepped> step(NodeId n, const Queue& m, std::size_t depth) {
        if (depth > guard_) return std::nullopt;
        std::string key = std::to_string(n) + "@" + queue_key(m);
        if (!stack_.insert(key).second) return std::nullopt;
        auto r = step_node(n, m, depth);
        stack_.erase(key);
        return r;
    }

    std::optional<Stepped> step_node(NodeId n, const Queue& m, std::size_t depth) {
        const GlobalNode& node = nodes_[n];
        const Participant& p = node.from;
        const Participant& q = node.to;
        switch (node.kind) {
        case GlobalNode::Kind::End: return std::nullopt;
        case GlobalNode::Kind::Out: {
            if (beta_.dir == Dir::Out && beta_.from == p && beta_.to == q) {
                for (const auto& b : node.branches)
                    if (b.label == beta_.label) return Stepped{b.next, m.pushed(Message{p, b.label, q})};
                return std::nullopt;
            }
            if (beta_.player() == p) return std::nullopt;
            GlobalNode fresh = node;
            std::optional<Queue> common;
            for (std::size_t i = 0; i < node.branches.size(); ++i) {
                const Branch b = nodes_[n].branches[i];
                Message added{p, b.label, q};
                auto r = step(b.next, m.pushed(added), depth + 1);
                if (!r) return std::nullopt;
                auto last = r->queue.last_on(p, q);
                if (!last || r->queue.msgs[*last] != added) return std::nullopt;
                Queue stripped = r->queue.erased(*last);
                if (common && !queue_equiv(*common, stripped))
                    throw InternalDiagnostic("branches of " + p + "->" + q +
                                             " disagree on the queue effect of " + to_string(beta_));
                if (!common) common = stripped;
                fresh.branches[i].next = r->node;
            }
            NodeId id = builder_.add(std::move(fresh));
            return Stepped{id, *common};
        }
        case GlobalNode::Kind::In: {
            const Label& l = node.branches[0].label;
            auto idx = m.first_on(p, q);
            if (!idx || m.msgs[*idx].label != l) return std::nullopt;
            Queue rest = m.erased(*idx);
            if (beta_ == in(p, q, l)) return Stepped{node.branches[0].next, rest};
            if (beta_.player() == q) return std::nullopt;
            GlobalNode fresh = node;
            auto r = step(node.branches[0].next, rest, depth + 1);
            if (!r) return std::nullopt;
            fresh.branches[0].next = r->node;
            NodeId id = builder_.add(std::move(fresh));
            return Stepped{id, r->queue.prepended(Message{p, l, q})};
        }
        }
        return std::nullopt;
    }

    const Global& g_;
    const std::vector<GlobalNode>& nodes_;
    const Comm& beta_;
    GlobalBuilder builder_;
    std::size_t guard_;
    std::unordered_set<std::string> stack_;
};

std::set<Comm> candidate_comms(const Global& g) {
    std::set<Comm> s;
    for (NodeId n : reachable(g)) {
        Global at = g.at(n);
        for (std::size_t i = 0; i < at.branches().size(); ++i) s.insert(at.comm(i));
    }
    return s;
}

template <class State, class Enabled, class Step>
void enumerate_traces(const State& s, std::size_t k, Trace& cur, std::vector<Trace>& out, Enabled en, Step st) {
    out.push_back(cur);
    if (cur.size() >= k) return;
    for (const Comm& c : en(s)) {
        State next = st(s, c);
        cur.push_back(c);
        enumerate_traces(next, k, cur, out, en, st);
        cur.pop_back();
    }
}

} // namespace

std::optional<AsyncType> try_type_step(const AsyncType& t, const Comm& beta) {
    TypeStepper s(t.global, beta);
    return s.run(t.queue);
}

AsyncType type_step(const AsyncType& t, const Comm& beta) {
    auto r = try_type_step(t, beta);
    if (!r) throw NotEnabled(to_string(beta), 1);
    return *r;
}

AsyncType type_run(const AsyncType& t, const Trace& tr) {
    AsyncType cur = t;
    for (std::size_t i = 0; i < tr.size(); ++i) {
        auto r = try_type_step(cur, tr[i]);
        if (!r) throw NotEnabled(to_string(tr[i]), i + 1);
        cur = std::move(*r);
    }
    return cur;
}

std::vector<Comm> type_enabled(const AsyncType& t) {
    std::vector<Comm> r;
    for (const Comm& c : candidate_comms(t.global))
        if (try_type_step(t, c)) r.push_back(c);
    return r;
}

std::vector<Trace> net_traces(const Network& n, std::size_t k) {
    std::vector<Trace> out;
    Trace cur;
    enumerate_traces(n, k, cur, out, [](const Network& s) { return net_enabled(s); },
                     [](const Network& s, const Comm& c) { return net_step(s, c); });
    return out;
}

std::vector<Trace> type_traces(const AsyncType& t, std::size_t k) {
    std::vector<Trace> out;
    Trace cur;
    enumerate_traces(t, k, cur, out, [](const AsyncType& s) { return type_enabled(s); },
                     [](const AsyncType& s, const Comm& c) { return type_step(s, c); });
    return out;
}

BisimReport bisimilar_to_depth(const Network& n, const AsyncType& t, std::size_t k) {
    struct Node {
        Network net;
        AsyncType ty;
        Trace path;
    };
    BisimReport rep;
    std::deque<Node> todo;
    std::unordered_set<std::string> seen;
    todo.push_back({n, t, {}});
    seen.insert(state_key(n) + "##" + state_key(t));
    while (!todo.empty()) {
        Node cur = std::move(todo.front());
        todo.pop_front();
        ++rep.states;
        auto en = net_enabled(cur.net);
        auto et = type_enabled(cur.ty);
        if (en != et) {
            std::vector<Comm> only_n, only_t;
            std::set_difference(en.begin(), en.end(), et.begin(), et.end(), std::back_inserter(only_n));
            std::set_difference(et.begin(), et.end(), en.begin(), en.end(), std::back_inserter(only_t));
            rep.ok = false;
            rep.witness = cur.path;
            if (!only_n.empty() && (only_t.empty() || only_n.front() < only_t.front())) {
                rep.witness.push_back(only_n.front());
                rep.reason = "network enables " + to_string(only_n.front()) + " but the type does not";
            } else {
                rep.witness.push_back(only_t.front());
                rep.reason = "type enables " + to_string(only_t.front()) + " but the network does not";
            }
            return rep;
        }
        if (cur.path.size() >= k) continue;
        for (const Comm& c : en) {
            Node nx{net_step(cur.net, c), type_step(cur.ty, c), cur.path};
            nx.path.push_back(c);
            if (seen.insert(state_key(nx.net) + "##" + state_key(nx.ty)).second) todo.push_back(std::move(nx));
        }
    }
    return rep;
}

} // namespace asess
