#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "asess/kernel.hpp"
#include "asess/traces.hpp"

namespace asess {

/// Events with a causality (prime) or flow relation and a conflict relation, over indices.
struct EventStructure {
    enum class Kind { Prime, Flow };
    Kind kind = Kind::Prime;
    std::vector<std::string> names;
    std::vector<std::string> labels;  // the communication (or action) an event stands for
    // For a prime structure rel[i][j] means i <= j (reflexive); for a flow structure i flows to j.
    std::vector<std::vector<char>> rel;
    std::vector<std::vector<char>> conflict;

    std::size_t size() const { return names.size(); }
    bool before(std::size_t i, std::size_t j) const { return rel[i][j] != 0; }
    bool strictly_before(std::size_t i, std::size_t j) const { return i != j && rel[i][j] != 0; }
    bool conflicts(std::size_t i, std::size_t j) const { return conflict[i][j] != 0; }
    std::size_t relation_pairs() const;  // strict pairs
    std::size_t conflict_pairs() const;  // unordered pairs
};

/// Empty when the structure obeys the laws of its kind, otherwise a description of a violation.
std::optional<std::string> check_laws(const EventStructure& es);

// ---- p-events

using PEvent = ActionSeq;

bool pevent_leq(const PEvent& a, const PEvent& b);
bool pevent_conflict(const PEvent& a, const PEvent& b);

struct ProcessES {
    std::vector<PEvent> events;
    EventStructure es;
};

/// Events are the nonempty paths of the process tree of length at most k.
ProcessES pes_of_process(const Process& p, std::size_t k);

// ---- n-events

struct NEvent {
    Participant loc;
    PEvent ev;
    auto operator<=>(const NEvent&) const = default;
};

std::string to_string(const NEvent& e);
Comm nevent_io(const NEvent& e);
bool nevent_flow(const NEvent& a, const NEvent& b, const OTrace& w, std::size_t cap = kDefaultClosureCap);
bool nevent_conflict(const NEvent& a, const NEvent& b);
bool queue_justified(const NEvent& e, const OTrace& w, std::size_t cap = kDefaultClosureCap);
std::set<NEvent> narrowing(const std::set<NEvent>& events, const OTrace& w, std::size_t cap = kDefaultClosureCap);
std::optional<PEvent> proj_nevent(const NEvent& e, const Participant& p);

struct NetworkES {
    OTrace omega;
    std::vector<NEvent> events;
    EventStructure es;
    std::optional<std::size_t> index_of(const NEvent& e) const;
};

/// The candidate events of every located process of length at most k, narrowed.
NetworkES fes_of_network(const Network& n, std::size_t k);

// ---- t-events

/// Stored canonically: the o-trace stably sorted by channel, the trace the least of its class.
struct TEvent {
    OTrace omega;
    Trace trace;
    auto operator<=>(const TEvent&) const = default;
};

/// Throws PreconditionError unless t is nonempty and w-pointed.
TEvent make_tevent(const OTrace& w, const Trace& t);
std::string to_string(const TEvent& e);
Comm tevent_io(const TEvent& e);
bool tevent_equal(const TEvent& a, const TEvent& b);
bool tevent_leq(const TEvent& a, const TEvent& b);
bool tevent_conflict(const TEvent& a, const TEvent& b);

/// Throws PreconditionError unless t is nonempty and w-well-formed.
TEvent ev(const OTrace& w, const Trace& t);

struct TypeES {
    OTrace omega;
    std::vector<TEvent> events;
    EventStructure es;
    std::optional<std::size_t> index_of(const TEvent& e) const;
};

/// Finite paths of the type tree of length at most k.
std::vector<Trace> fpaths(const Global& g, std::size_t k);
TypeES pes_of_type(const AsyncType& t, std::size_t k);

// ---- residuals and retrievals

std::optional<NEvent> nevent_residual(const NEvent& e, const Comm& beta);
NEvent nevent_retrieval(const NEvent& e, const Comm& beta);

std::optional<OTrace> queue_map_fwd(const Comm& beta, const OTrace& w);
std::optional<OTrace> queue_map_bwd(const Comm& beta, const OTrace& w);

std::optional<TEvent> tevent_residual(const TEvent& e, const Comm& beta);
std::optional<TEvent> tevent_retrieval(const Comm& beta, const TEvent& e);

std::vector<NEvent> nec(const Trace& t);
std::vector<TEvent> tec(const OTrace& w, const Trace& t);

} // namespace asess
