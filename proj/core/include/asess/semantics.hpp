#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asess/kernel.hpp"

namespace asess {

/// Communications enabled in a network, sorted by exploration order.
std::vector<Comm> net_enabled(const Network& n);
std::optional<Network> try_net_step(const Network& n, const Comm& beta);
/// Throws NotEnabled when beta is not enabled.
Network net_step(const Network& n, const Comm& beta);
/// Left fold of net_step; NotEnabled carries the 1-based index of the failing step.
Network net_run(const Network& n, const Trace& t);

std::vector<Comm> type_enabled(const AsyncType& t);
std::optional<AsyncType> try_type_step(const AsyncType& t, const Comm& beta);
AsyncType type_step(const AsyncType& t, const Comm& beta);
AsyncType type_run(const AsyncType& t, const Trace& tr);

/// All traces of length at most k (including the empty one) in exploration order.
std::vector<Trace> net_traces(const Network& n, std::size_t k);
std::vector<Trace> type_traces(const AsyncType& t, std::size_t k);

struct BisimReport {
    bool ok = true;
    Trace witness;       // leads to the divergent state, followed by the offending comm
    std::string reason;
    std::size_t states = 0;
};

/// Compares enabled sets of the two LTSs at every state reachable in at most k steps.
BisimReport bisimilar_to_depth(const Network& n, const AsyncType& t, std::size_t k);

} // namespace asess
