#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "asess/error.hpp"

namespace asess {

using Participant = std::string;
using Label = std::string;

enum class Dir : std::uint8_t { Out = 0, In = 1 };

/// An atomic action p!l or p?l performed by some (implicit) participant.
struct Action {
    Dir dir = Dir::Out;
    Participant peer;
    Label label;

    auto operator<=>(const Action&) const = default;
};

using ActionSeq = std::vector<Action>;

/// A communication pq!l (p enqueues l for q) or pq?l (q dequeues l from p).
struct Comm {
    Dir dir = Dir::Out;
    Participant from;
    Participant to;
    Label label;

    const Participant& player() const { return dir == Dir::Out ? from : to; }
    const Participant& peer() const { return dir == Dir::Out ? to : from; }
    Action as_action() const { return Action{dir, peer(), label}; }

    bool operator==(const Comm&) const = default;
    // Exploration order: player, direction, peer, label.
    std::strong_ordering operator<=>(const Comm& o) const;
};

using Trace = std::vector<Comm>;

Comm out(Participant p, Participant q, Label l);
Comm in(Participant p, Participant q, Label l);

std::set<Participant> players(const Comm& c);
std::set<Participant> players(const Trace& t);
bool is_self_comm(const Comm& c);

std::string to_string(const Action& a);
std::string to_string(const ActionSeq& s);
std::string to_string(const Comm& c);
std::string to_string(const Trace& t);

struct Message {
    Participant from;
    Label label;
    Participant to;

    auto operator<=>(const Message&) const = default;
};

std::string to_string(const Message& m);

/// A message queue. Equality that matters is queue_equiv, not operator==.
struct Queue {
    std::vector<Message> msgs;

    bool empty() const { return msgs.empty(); }
    std::size_t size() const { return msgs.size(); }
    bool operator==(const Queue&) const = default;

    // Index of the first message on channel from->to, if any.
    std::optional<std::size_t> first_on(const Participant& from, const Participant& to) const;
    std::optional<std::size_t> last_on(const Participant& from, const Participant& to) const;
    Queue pushed(Message m) const;
    Queue erased(std::size_t idx) const;
    Queue prepended(Message m) const;
};

bool queue_equiv(const Queue& a, const Queue& b);
/// Stable sort by channel: the representative of the equivalence class.
Queue canonical(const Queue& q);
std::string to_string(const Queue& q);
std::string queue_key(const Queue& q);

// ---------------------------------------------------------------------------
// Source-level terms, as written in recursion equations.

struct ProcTerm {
    enum class Kind : std::uint8_t { Nil, Out, In, Ref };
    Kind kind = Kind::Nil;
    Participant peer;
    std::vector<Label> labels;
    std::vector<ProcTerm> conts;
    std::string ref;

    static ProcTerm nil();
    static ProcTerm reference(std::string name);
    static ProcTerm choice(Dir d, Participant peer, std::vector<std::pair<Label, ProcTerm>> branches);
    static ProcTerm prefix(Dir d, Participant peer, Label l, ProcTerm cont);

    bool operator==(const ProcTerm&) const = default;
};

struct GlobalTerm {
    enum class Kind : std::uint8_t { End, Out, In, Ref };
    Kind kind = Kind::End;
    Participant from;
    Participant to;
    std::vector<Label> labels;
    std::vector<GlobalTerm> conts;
    std::string ref;

    static GlobalTerm end();
    static GlobalTerm reference(std::string name);
    static GlobalTerm choice(Participant p, Participant q, std::vector<std::pair<Label, GlobalTerm>> branches);
    static GlobalTerm send(Participant p, Participant q, Label l, GlobalTerm cont);
    static GlobalTerm recv(Participant p, Participant q, Label l, GlobalTerm cont);

    bool operator==(const GlobalTerm&) const = default;
};

struct DefEnv {
    std::map<std::string, ProcTerm> procs;
    std::map<std::string, GlobalTerm> globals;
};

/// Resolves top-level references until the head is a constructor.
ProcTerm unfold(const ProcTerm& t, const DefEnv& env);
GlobalTerm unfold(const GlobalTerm& t, const DefEnv& env);

// ---------------------------------------------------------------------------
// Term graphs. Branches are kept sorted by label.

using NodeId = std::uint32_t;

struct Branch {
    Label label;
    NodeId next = 0;
    bool operator==(const Branch&) const = default;
};

struct ProcNode {
    enum class Kind : std::uint8_t { Nil, Out, In };
    Kind kind = Kind::Nil;
    Participant peer;
    std::vector<Branch> branches;
    bool operator==(const ProcNode&) const = default;
};

struct GlobalNode {
    enum class Kind : std::uint8_t { End, Out, In };
    Kind kind = Kind::End;
    Participant from;
    Participant to;
    std::vector<Branch> branches;  // exactly one for In
    bool operator==(const GlobalNode&) const = default;
};

struct ProcGraph {
    std::vector<ProcNode> nodes;
    std::map<NodeId, std::string> names;
};

struct GlobalGraph {
    std::vector<GlobalNode> nodes;
    std::map<NodeId, std::string> names;
};

/// Checks label distinctness, nonempty choices and edge targets. Throws DefinitionError.
void validate(const ProcGraph& g);
void validate(const GlobalGraph& g);

class Process {
public:
    Process();  // the inaction 0
    Process(std::shared_ptr<const ProcGraph> g, NodeId id);

    const ProcGraph& graph() const { return *g_; }
    const std::shared_ptr<const ProcGraph>& graph_ptr() const { return g_; }
    NodeId id() const { return id_; }
    const ProcNode& node() const { return g_->nodes[id_]; }

    ProcNode::Kind kind() const { return node().kind; }
    bool is_nil() const { return kind() == ProcNode::Kind::Nil; }
    const Participant& peer() const { return node().peer; }
    const std::vector<Branch>& branches() const { return node().branches; }
    Process child(std::size_t i) const { return Process(g_, node().branches.at(i).next); }
    std::optional<Process> child(const Label& l) const;
    Process at(NodeId n) const { return Process(g_, n); }

private:
    std::shared_ptr<const ProcGraph> g_;
    NodeId id_ = 0;
};

class Global {
public:
    Global();  // End
    Global(std::shared_ptr<const GlobalGraph> g, NodeId id);

    const GlobalGraph& graph() const { return *g_; }
    const std::shared_ptr<const GlobalGraph>& graph_ptr() const { return g_; }
    NodeId id() const { return id_; }
    const GlobalNode& node() const { return g_->nodes[id_]; }

    GlobalNode::Kind kind() const { return node().kind; }
    bool is_end() const { return kind() == GlobalNode::Kind::End; }
    const Participant& from() const { return node().from; }
    const Participant& to() const { return node().to; }
    const std::vector<Branch>& branches() const { return node().branches; }
    Global child(std::size_t i) const { return Global(g_, node().branches.at(i).next); }
    std::optional<Global> child(const Label& l) const;
    Global at(NodeId n) const { return Global(g_, n); }
    /// The communication labelling branch i.
    Comm comm(std::size_t i) const;

private:
    std::shared_ptr<const GlobalGraph> g_;
    NodeId id_ = 0;
};

Process compile_process(const ProcTerm& t, const DefEnv& env);
Global compile_global(const GlobalTerm& t, const DefEnv& env);

/// Reachable node ids in BFS order from the root (root first).
std::vector<NodeId> reachable(const Process& p);
std::vector<NodeId> reachable(const Global& g);
std::size_t graph_size(const Process& p);
std::size_t graph_size(const Global& g);

/// Keeps reachable nodes only, renumbered in BFS order. Names are carried over.
Process compact(const Process& p);
Global compact(const Global& g);

/// A string that is equal for two terms iff their infinite unfoldings are equal.
std::string canonical_key(const Process& p);
std::string canonical_key(const Global& g);
bool regular_equal(const Process& a, const Process& b);
bool regular_equal(const Global& a, const Global& b);
bool regular_equal(const ProcTerm& a, const ProcTerm& b, const DefEnv& env);
bool regular_equal(const GlobalTerm& a, const GlobalTerm& b, const DefEnv& env);

/// Least set of players over the reachable graph; empty for End.
std::set<Participant> players(const Global& g);
/// True iff the node lies on a cycle of its reachable graph.
bool is_cyclic(const Global& g);

/// Appends nodes to a copy of an existing graph; finish() compacts from a root.
class GlobalBuilder {
public:
    GlobalBuilder() = default;
    explicit GlobalBuilder(const GlobalGraph& base) : nodes_(base.nodes), names_(base.names) {}

    NodeId add(GlobalNode n);
    GlobalNode& operator[](NodeId id) { return nodes_[id]; }
    std::size_t size() const { return nodes_.size(); }
    Global finish(NodeId root) const;

private:
    std::vector<GlobalNode> nodes_;
    std::map<NodeId, std::string> names_;
};

class ProcBuilder {
public:
    NodeId add(ProcNode n);
    ProcNode& operator[](NodeId id) { return nodes_[id]; }
    std::size_t size() const { return nodes_.size(); }
    void name(NodeId id, std::string n) { names_[id] = std::move(n); }
    Process finish(NodeId root) const;

private:
    std::vector<ProcNode> nodes_;
    std::map<NodeId, std::string> names_;
};

// ---------------------------------------------------------------------------

/// N || M. Entries whose process is 0 are semantically absent.
struct Network {
    std::map<Participant, Process> procs;
    Queue queue;

    /// Participants with a non-inaction process.
    std::set<Participant> active() const;
};

struct AsyncType {
    Global global;
    Queue queue;
};

/// Keys identifying states up to regular equality and queue equivalence.
std::string state_key(const Network& n);
std::string state_key(const AsyncType& t);

} // namespace asess
