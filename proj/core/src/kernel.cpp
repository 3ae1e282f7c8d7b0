#include "asess/kernel.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace asess {

// ---------------------------------------------------------------------------
// Communications

std::strong_ordering Comm::operator<=>(const Comm& o) const {
    if (auto c = player() <=> o.player(); c != 0) return c;
    if (auto c = dir <=> o.dir; c != 0) return c;
    if (auto c = peer() <=> o.peer(); c != 0) return c;
    return label <=> o.label;
}

Comm out(Participant p, Participant q, Label l) { return Comm{Dir::Out, std::move(p), std::move(q), std::move(l)}; }
Comm in(Participant p, Participant q, Label l) { return Comm{Dir::In, std::move(p), std::move(q), std::move(l)}; }

std::set<Participant> players(const Comm& c) { return {c.player()}; }

std::set<Participant> players(const Trace& t) {
    std::set<Participant> s;
    for (const auto& c : t) s.insert(c.player());
    return s;
}

bool is_self_comm(const Comm& c) { return c.from == c.to; }

std::string to_string(const Action& a) {
    return a.peer + (a.dir == Dir::Out ? "!" : "?") + a.label;
}

std::string to_string(const ActionSeq& s) {
    if (s.empty()) return "eps";
    std::string r;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) r += ";";
        r += to_string(s[i]);
    }
    return r;
}

std::string to_string(const Comm& c) {
    return c.from + "->" + c.to + (c.dir == Dir::Out ? "!" : "?") + c.label;
}

std::string to_string(const Trace& t) {
    if (t.empty()) return "eps";
    std::string r;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) r += " . ";
        r += to_string(t[i]);
    }
    return r;
}

std::string to_string(const Message& m) { return "<" + m.from + " " + m.label + " " + m.to + ">"; }

// ---------------------------------------------------------------------------
// Queues

std::optional<std::size_t> Queue::first_on(const Participant& from, const Participant& to) const {
    for (std::size_t i = 0; i < msgs.size(); ++i)
        if (msgs[i].from == from && msgs[i].to == to) return i;
    return std::nullopt;
}

std::optional<std::size_t> Queue::last_on(const Participant& from, const Participant& to) const {
    for (std::size_t i = msgs.size(); i-- > 0;)
        if (msgs[i].from == from && msgs[i].to == to) return i;
    return std::nullopt;
}

Queue Queue::pushed(Message m) const {
    Queue r = *this;
    r.msgs.push_back(std::move(m));
    return r;
}

Queue Queue::erased(std::size_t idx) const {
    Queue r = *this;
    r.msgs.erase(r.msgs.begin() + static_cast<std::ptrdiff_t>(idx));
    return r;
}

Queue Queue::prepended(Message m) const {
    Queue r;
    r.msgs.reserve(msgs.size() + 1);
    r.msgs.push_back(std::move(m));
    r.msgs.insert(r.msgs.end(), msgs.begin(), msgs.end());
    return r;
}

Queue canonical(const Queue& q) {
    Queue r = q;
    std::stable_sort(r.msgs.begin(), r.msgs.end(), [](const Message& a, const Message& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    return r;
}

bool queue_equiv(const Queue& a, const Queue& b) { return canonical(a) == canonical(b); }

std::string to_string(const Queue& q) {
    if (q.empty()) return "empty";
    std::string r;
    for (std::size_t i = 0; i < q.msgs.size(); ++i) {
        if (i) r += " . ";
        r += to_string(q.msgs[i]);
    }
    return r;
}

std::string queue_key(const Queue& q) { return to_string(canonical(q)); }

// ---------------------------------------------------------------------------
// Terms

ProcTerm ProcTerm::nil() { return ProcTerm{}; }

ProcTerm ProcTerm::reference(std::string name) {
    ProcTerm t;
    t.kind = Kind::Ref;
    t.ref = std::move(name);
    return t;
}

ProcTerm ProcTerm::choice(Dir d, Participant peer, std::vector<std::pair<Label, ProcTerm>> branches) {
    ProcTerm t;
    t.kind = d == Dir::Out ? Kind::Out : Kind::In;
    t.peer = std::move(peer);
    for (auto& [l, c] : branches) {
        t.labels.push_back(l);
        t.conts.push_back(std::move(c));
    }
    return t;
}

ProcTerm ProcTerm::prefix(Dir d, Participant peer, Label l, ProcTerm cont) {
    std::vector<std::pair<Label, ProcTerm>> b;
    b.emplace_back(std::move(l), std::move(cont));
    return choice(d, std::move(peer), std::move(b));
}

GlobalTerm GlobalTerm::end() { return GlobalTerm{}; }

GlobalTerm GlobalTerm::reference(std::string name) {
    GlobalTerm t;
    t.kind = Kind::Ref;
    t.ref = std::move(name);
    return t;
}

GlobalTerm GlobalTerm::choice(Participant p, Participant q, std::vector<std::pair<Label, GlobalTerm>> branches) {
    GlobalTerm t;
    t.kind = Kind::Out;
    t.from = std::move(p);
    t.to = std::move(q);
    for (auto& [l, c] : branches) {
        t.labels.push_back(l);
        t.conts.push_back(std::move(c));
    }
    return t;
}

GlobalTerm GlobalTerm::send(Participant p, Participant q, Label l, GlobalTerm cont) {
    std::vector<std::pair<Label, GlobalTerm>> b;
    b.emplace_back(std::move(l), std::move(cont));
    return choice(std::move(p), std::move(q), std::move(b));
}

GlobalTerm GlobalTerm::recv(Participant p, Participant q, Label l, GlobalTerm cont) {
    GlobalTerm t;
    t.kind = Kind::In;
    t.from = std::move(p);
    t.to = std::move(q);
    t.labels.push_back(std::move(l));
    t.conts.push_back(std::move(cont));
    return t;
}

namespace {

template <class Term>
const Term& lookup(const std::map<std::string, Term>& defs, const std::string& name, const char* what) {
    auto it = defs.find(name);
    if (it == defs.end()) throw DefinitionError(std::string("undefined ") + what + " name '" + name + "'");
    return it->second;
}

// Follows a chain of bare references; returns the constructor-headed body and its name.
template <class Term>
const Term& resolve_chain(const std::map<std::string, Term>& defs, const std::string& start, const char* what,
                          std::string& final_name) {
    std::set<std::string> seen;
    std::string cur = start;
    while (true) {
        if (!seen.insert(cur).second)
            throw DefinitionError("unguarded recursion through '" + cur + "'");
        const Term& body = lookup(defs, cur, what);
        if (body.kind != Term::Kind::Ref) {
            final_name = cur;
            return body;
        }
        cur = body.ref;
    }
}

void check_labels(const std::vector<Label>& labels, std::size_t nconts, const std::string& where) {
    if (labels.empty()) throw DefinitionError("empty choice at " + where);
    if (labels.size() != nconts) throw DefinitionError("malformed choice at " + where);
    std::set<Label> s(labels.begin(), labels.end());
    if (s.size() != labels.size()) throw DefinitionError("duplicate label in choice at " + where);
}

struct ProcCompiler {
    const DefEnv& env;
    ProcGraph g;
    std::map<std::string, NodeId> memo;

    NodeId reserve() {
        g.nodes.emplace_back();
        return static_cast<NodeId>(g.nodes.size() - 1);
    }

    NodeId build(const ProcTerm& t) {
        if (t.kind == ProcTerm::Kind::Ref) {
            std::string name;
            const ProcTerm& body = resolve_chain(env.procs, t.ref, "process", name);
            if (auto it = memo.find(name); it != memo.end()) return it->second;
            NodeId id = reserve();
            memo[name] = id;
            g.names[id] = name;
            fill(id, body);
            return id;
        }
        NodeId id = reserve();
        fill(id, t);
        return id;
    }

    void fill(NodeId id, const ProcTerm& t) {
        ProcNode n;
        if (t.kind == ProcTerm::Kind::Nil) {
            g.nodes[id] = n;
            return;
        }
        n.kind = t.kind == ProcTerm::Kind::Out ? ProcNode::Kind::Out : ProcNode::Kind::In;
        n.peer = t.peer;
        check_labels(t.labels, t.conts.size(), "choice with " + t.peer);
        for (std::size_t i = 0; i < t.labels.size(); ++i) {
            NodeId c = build(t.conts[i]);
            n.branches.push_back(Branch{t.labels[i], c});
        }
        std::sort(n.branches.begin(), n.branches.end(),
                  [](const Branch& a, const Branch& b) { return a.label < b.label; });
        g.nodes[id] = std::move(n);
    }
};

struct GlobalCompiler {
    const DefEnv& env;
    GlobalGraph g;
    std::map<std::string, NodeId> memo;

    NodeId reserve() {
        g.nodes.emplace_back();
        return static_cast<NodeId>(g.nodes.size() - 1);
    }

    NodeId build(const GlobalTerm& t) {
        if (t.kind == GlobalTerm::Kind::Ref) {
            std::string name;
            const GlobalTerm& body = resolve_chain(env.globals, t.ref, "global type", name);
            if (auto it = memo.find(name); it != memo.end()) return it->second;
            NodeId id = reserve();
            memo[name] = id;
            g.names[id] = name;
            fill(id, body);
            return id;
        }
        NodeId id = reserve();
        fill(id, t);
        return id;
    }

    void fill(NodeId id, const GlobalTerm& t) {
        GlobalNode n;
        if (t.kind == GlobalTerm::Kind::End) {
            g.nodes[id] = n;
            return;
        }
        n.kind = t.kind == GlobalTerm::Kind::Out ? GlobalNode::Kind::Out : GlobalNode::Kind::In;
        n.from = t.from;
        n.to = t.to;
        check_labels(t.labels, t.conts.size(), t.from + "->" + t.to);
        if (n.kind == GlobalNode::Kind::In && t.labels.size() != 1)
            throw DefinitionError("global input " + t.from + "->" + t.to + " must carry exactly one label");
        for (std::size_t i = 0; i < t.labels.size(); ++i) {
            NodeId c = build(t.conts[i]);
            n.branches.push_back(Branch{t.labels[i], c});
        }
        std::sort(n.branches.begin(), n.branches.end(),
                  [](const Branch& a, const Branch& b) { return a.label < b.label; });
        g.nodes[id] = std::move(n);
    }
};

template <class Node>
std::vector<NodeId> bfs(const std::vector<Node>& nodes, NodeId root) {
    std::vector<NodeId> order;
    std::vector<char> seen(nodes.size(), 0);
    std::deque<NodeId> todo{root};
    seen[root] = 1;
    while (!todo.empty()) {
        NodeId n = todo.front();
        todo.pop_front();
        order.push_back(n);
        for (const auto& b : nodes[n].branches)
            if (!seen[b.next]) {
                seen[b.next] = 1;
                todo.push_back(b.next);
            }
    }
    return order;
}

template <class Graph>
Graph compact_graph(const Graph& g, NodeId root, NodeId& new_root) {
    auto order = bfs(g.nodes, root);
    std::unordered_map<NodeId, NodeId> remap;
    for (std::size_t i = 0; i < order.size(); ++i) remap[order[i]] = static_cast<NodeId>(i);
    Graph r;
    r.nodes.reserve(order.size());
    for (NodeId old : order) {
        auto n = g.nodes[old];
        for (auto& b : n.branches) b.next = remap.at(b.next);
        r.nodes.push_back(std::move(n));
    }
    std::set<std::string> used;
    for (const auto& [id, name] : g.names) {
        auto it = remap.find(id);
        if (it != remap.end() && used.insert(name).second) r.names[it->second] = name;
    }
    new_root = 0;
    return r;
}

std::string sig(const ProcNode& n) {
    std::string s;
    switch (n.kind) {
    case ProcNode::Kind::Nil: return "0";
    case ProcNode::Kind::Out: s = "!"; break;
    case ProcNode::Kind::In: s = "?"; break;
    }
    s += n.peer;
    for (const auto& b : n.branches) s += "|" + b.label;
    return s;
}

std::string sig(const GlobalNode& n) {
    std::string s;
    switch (n.kind) {
    case GlobalNode::Kind::End: return "E";
    case GlobalNode::Kind::Out: s = "!"; break;
    case GlobalNode::Kind::In: s = "?"; break;
    }
    s += n.from + ">" + n.to;
    for (const auto& b : n.branches) s += "|" + b.label;
    return s;
}

// Moore refinement over the reachable subgraph, then a BFS serialization of the quotient.
template <class Node>
std::string canon(const std::vector<Node>& nodes, NodeId root) {
    auto order = bfs(nodes, root);
    std::unordered_map<NodeId, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    std::vector<std::size_t> cls(order.size());
    {
        std::map<std::string, std::size_t> m;
        for (std::size_t i = 0; i < order.size(); ++i)
            cls[i] = m.emplace(sig(nodes[order[i]]), m.size()).first->second;
    }
    std::size_t count = 0;
    for (auto c : cls) count = std::max(count, c + 1);
    while (true) {
        std::map<std::vector<std::size_t>, std::size_t> m;
        std::vector<std::size_t> next(order.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            std::vector<std::size_t> k{cls[i]};
            for (const auto& b : nodes[order[i]].branches) k.push_back(cls[pos.at(b.next)]);
            next[i] = m.emplace(std::move(k), m.size()).first->second;
        }
        cls = std::move(next);
        if (m.size() == count) break;
        count = m.size();
    }
    std::vector<std::size_t> rep(count, 0);
    for (std::size_t i = order.size(); i-- > 0;) rep[cls[i]] = i;
    std::vector<long> num(count, -1);
    std::deque<std::size_t> todo{cls[0]};
    num[cls[0]] = 0;
    long next_num = 1;
    std::string out;
    while (!todo.empty()) {
        std::size_t c = todo.front();
        todo.pop_front();
        const auto& n = nodes[order[rep[c]]];
        out += sig(n);
        out += "[";
        for (const auto& b : n.branches) {
            std::size_t cc = cls[pos.at(b.next)];
            if (num[cc] < 0) {
                num[cc] = next_num++;
                todo.push_back(cc);
            }
            out += std::to_string(num[cc]) + ",";
        }
        out += "]";
    }
    return out;
}

template <class Node>
void validate_nodes(const std::vector<Node>& nodes) {
    for (const auto& n : nodes) {
        std::set<Label> seen;
        for (const auto& b : n.branches) {
            if (b.next >= nodes.size()) throw DefinitionError("dangling edge in term graph");
            if (!seen.insert(b.label).second) throw DefinitionError("duplicate label '" + b.label + "' in choice");
        }
    }
}

std::shared_ptr<const ProcGraph> nil_graph() {
    static const auto g = [] {
        auto p = std::make_shared<ProcGraph>();
        p->nodes.emplace_back();
        return std::shared_ptr<const ProcGraph>(p);
    }();
    return g;
}

std::shared_ptr<const GlobalGraph> end_graph() {
    static const auto g = [] {
        auto p = std::make_shared<GlobalGraph>();
        p->nodes.emplace_back();
        return std::shared_ptr<const GlobalGraph>(p);
    }();
    return g;
}

} // namespace

ProcTerm unfold(const ProcTerm& t, const DefEnv& env) {
    if (t.kind != ProcTerm::Kind::Ref) return t;
    std::string name;
    return resolve_chain(env.procs, t.ref, "process", name);
}

GlobalTerm unfold(const GlobalTerm& t, const DefEnv& env) {
    if (t.kind != GlobalTerm::Kind::Ref) return t;
    std::string name;
    return resolve_chain(env.globals, t.ref, "global type", name);
}

void validate(const ProcGraph& g) {
    validate_nodes(g.nodes);
    for (const auto& n : g.nodes)
        if (n.kind != ProcNode::Kind::Nil && n.branches.empty()) throw DefinitionError("empty choice");
}

void validate(const GlobalGraph& g) {
    validate_nodes(g.nodes);
    for (const auto& n : g.nodes) {
        if (n.kind != GlobalNode::Kind::End && n.branches.empty()) throw DefinitionError("empty choice");
        if (n.kind == GlobalNode::Kind::In && n.branches.size() != 1)
            throw DefinitionError("global input must carry exactly one label");
    }
}

// ---------------------------------------------------------------------------
// Handles

Process::Process() : g_(nil_graph()), id_(0) {}
Process::Process(std::shared_ptr<const ProcGraph> g, NodeId id) : g_(std::move(g)), id_(id) {}

std::optional<Process> Process::child(const Label& l) const {
    for (const auto& b : node().branches)
        if (b.label == l) return Process(g_, b.next);
    return std::nullopt;
}

Global::Global() : g_(end_graph()), id_(0) {}
Global::Global(std::shared_ptr<const GlobalGraph> g, NodeId id) : g_(std::move(g)), id_(id) {}

std::optional<Global> Global::child(const Label& l) const {
    for (const auto& b : node().branches)
        if (b.label == l) return Global(g_, b.next);
    return std::nullopt;
}

Comm Global::comm(std::size_t i) const {
    const auto& n = node();
    return Comm{n.kind == GlobalNode::Kind::Out ? Dir::Out : Dir::In, n.from, n.to, n.branches.at(i).label};
}

Process compile_process(const ProcTerm& t, const DefEnv& env) {
    ProcCompiler c{env, {}, {}};
    NodeId root = c.build(t);
    NodeId nr = 0;
    auto g = std::make_shared<ProcGraph>(compact_graph(c.g, root, nr));
    return Process(std::move(g), nr);
}

Global compile_global(const GlobalTerm& t, const DefEnv& env) {
    GlobalCompiler c{env, {}, {}};
    NodeId root = c.build(t);
    NodeId nr = 0;
    auto g = std::make_shared<GlobalGraph>(compact_graph(c.g, root, nr));
    return Global(std::move(g), nr);
}

std::vector<NodeId> reachable(const Process& p) { return bfs(p.graph().nodes, p.id()); }
std::vector<NodeId> reachable(const Global& g) { return bfs(g.graph().nodes, g.id()); }
std::size_t graph_size(const Process& p) { return reachable(p).size(); }
std::size_t graph_size(const Global& g) { return reachable(g).size(); }

Process compact(const Process& p) {
    NodeId nr = 0;
    auto g = std::make_shared<ProcGraph>(compact_graph(p.graph(), p.id(), nr));
    return Process(std::move(g), nr);
}

Global compact(const Global& g) {
    NodeId nr = 0;
    auto gg = std::make_shared<GlobalGraph>(compact_graph(g.graph(), g.id(), nr));
    return Global(std::move(gg), nr);
}

std::string canonical_key(const Process& p) { return canon(p.graph().nodes, p.id()); }
std::string canonical_key(const Global& g) { return canon(g.graph().nodes, g.id()); }

bool regular_equal(const Process& a, const Process& b) { return canonical_key(a) == canonical_key(b); }
bool regular_equal(const Global& a, const Global& b) { return canonical_key(a) == canonical_key(b); }

bool regular_equal(const ProcTerm& a, const ProcTerm& b, const DefEnv& env) {
    return regular_equal(compile_process(a, env), compile_process(b, env));
}

bool regular_equal(const GlobalTerm& a, const GlobalTerm& b, const DefEnv& env) {
    return regular_equal(compile_global(a, env), compile_global(b, env));
}

std::set<Participant> players(const Global& g) {
    std::set<Participant> s;
    for (NodeId n : reachable(g)) {
        const auto& node = g.graph().nodes[n];
        if (node.kind == GlobalNode::Kind::Out) s.insert(node.from);
        else if (node.kind == GlobalNode::Kind::In) s.insert(node.to);
    }
    return s;
}

bool is_cyclic(const Global& g) {
    const auto& nodes = g.graph().nodes;
    std::vector<char> seen(nodes.size(), 0);
    std::deque<NodeId> todo;
    for (const auto& b : g.branches()) todo.push_back(b.next);
    while (!todo.empty()) {
        NodeId n = todo.front();
        todo.pop_front();
        if (n == g.id()) return true;
        if (seen[n]) continue;
        seen[n] = 1;
        for (const auto& b : nodes[n].branches) todo.push_back(b.next);
    }
    return false;
}

// ---------------------------------------------------------------------------
// Builders

NodeId GlobalBuilder::add(GlobalNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
}

Global GlobalBuilder::finish(NodeId root) const {
    GlobalGraph g;
    g.nodes = nodes_;
    g.names = names_;
    NodeId nr = 0;
    auto gg = std::make_shared<GlobalGraph>(compact_graph(g, root, nr));
    return Global(std::move(gg), nr);
}

NodeId ProcBuilder::add(ProcNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
}

Process ProcBuilder::finish(NodeId root) const {
    ProcGraph g;
    g.nodes = nodes_;
    g.names = names_;
    NodeId nr = 0;
    auto gg = std::make_shared<ProcGraph>(compact_graph(g, root, nr));
    return Process(std::move(gg), nr);
}

// ---------------------------------------------------------------------------

std::set<Participant> Network::active() const {
    std::set<Participant> s;
    for (const auto& [p, proc] : procs)
        if (!proc.is_nil()) s.insert(p);
    return s;
}

std::string state_key(const Network& n) {
    std::string k;
    for (const auto& [p, proc] : n.procs) {
        if (proc.is_nil()) continue;
        k += p + "=" + canonical_key(proc) + ";";
    }
    return k + "||" + queue_key(n.queue);
}

std::string state_key(const AsyncType& t) { return canonical_key(t.global) + "||" + queue_key(t.queue); }

} // namespace asess
