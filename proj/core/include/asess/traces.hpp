#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "asess/kernel.hpp"

namespace asess {

/// A trace made of outputs only, standing for the contents of a queue.
using OTrace = Trace;

OTrace otr(const Queue& m);
Queue queue_of(const OTrace& w);
bool is_otrace(const Trace& t);
bool otrace_equiv(const OTrace& a, const OTrace& b);
/// Stable sort by channel.
OTrace canonical_otrace(const OTrace& w);

// ---- projections

/// An action with the peer forgotten.
struct UAct {
    Dir dir = Dir::Out;
    Label label;
    auto operator<=>(const UAct&) const = default;
};

using USeq = std::vector<UAct>;

std::string to_string(const UAct& a);
std::string to_string(const USeq& s);

ActionSeq trace_proj(const Trace& t, const Participant& r);
USeq actionseq_proj(const ActionSeq& s, const Participant& r);

// ---- matching and well-formedness (positions are 1-based)

std::size_t multiplicity(const Trace& t, const Participant& p, const Participant& q, Dir d);
bool matches(const Trace& t, std::size_t i, std::size_t j);

/// For every 0-based position, the 0-based position it matches with, if any.
std::vector<std::optional<std::size_t>> match_map(const Trace& t);

bool well_formed_trace(const Trace& t);
bool well_formed_trace(const Trace& t, const Trace& prefix);

// ---- swapping

/// Swaps the 1-based positions i and i+1. Empty when the pair may not be exchanged;
/// throws PreconditionError when i is out of range or t is not prefix-well-formed.
std::optional<Trace> swap_step(const Trace& t, std::size_t i, const OTrace& w);

/// Every trace reachable by swaps. Throws CapExceeded past the cap.
std::set<Trace> swap_closure(const Trace& t, const OTrace& w, std::size_t cap = 100000);

/// The least trace of the swap class in the Comm order.
Trace canonical_trace(const Trace& t, const OTrace& w);

bool trace_equiv(const Trace& a, const Trace& b, const OTrace& w);

// ---- pointedness and filtering

bool required(const Trace& t, std::size_t i);
bool pointed(const Trace& t, const Trace& prefix);

/// Filtering of t·rest with cursor between them.
Trace filter_trace(const Trace& t, const Trace& w, const Trace& rest);
inline Trace filter_trace(const Trace& t, const Trace& w) { return filter_trace(t, w, {}); }

// ---- undirected sequences

constexpr std::size_t kDefaultClosureCap = 100000;

/// Everything above s in the order that lets inputs overtake outputs.
std::set<USeq> precsim_closure(const USeq& s, std::size_t cap = kDefaultClosureCap);
bool precsim(const USeq& a, const USeq& b, std::size_t cap = kDefaultClosureCap);
USeq complement(const USeq& s);
bool dual(const USeq& a, const USeq& b);
bool weak_dual(const USeq& a, const USeq& b, std::size_t cap = kDefaultClosureCap);

/// All prefixes a such that some sequence above s has the shape a·?l·x with x outputs only.
std::set<USeq> input_histories(const USeq& s, const Label& l, std::size_t cap = kDefaultClosureCap);

} // namespace asess
