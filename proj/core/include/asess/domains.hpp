#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "asess/events.hpp"
#include "asess/kernel.hpp"

namespace asess {

/// A set of events of a host structure, as sorted indices.
using Config = std::vector<std::size_t>;

bool is_configuration(const EventStructure& es, const Config& x);
bool is_proving_sequence(const EventStructure& es, const std::vector<std::size_t>& seq);

struct Domain {
    std::vector<Config> configs;  // includes the empty configuration; ordered by size, then indices
    std::size_t max_size = 0;     // the bound used for enumeration
    std::size_t nonempty() const { return configs.empty() ? 0 : configs.size() - 1; }
};

/// All configurations with at most k events, grown one event at a time from the empty one.
Domain enumerate_configurations(const EventStructure& es, std::size_t k);

std::string to_string(const EventStructure& es, const Config& x);

struct IsoReport {
    bool ok = true;
    std::string failure;
    std::size_t depth = 0;       // configurations compared have at most this many events
    std::size_t type_depth = 0;  // path length used to build the type structure
    std::size_t net_configs = 0;  // nonempty
    std::size_t type_configs = 0;
    std::vector<std::pair<std::string, std::string>> table;  // network configuration, type configuration
};

/// Compares the configuration domains of a typed network and its type, up to k events.
/// Throws PreconditionError when the pair does not typecheck.
IsoReport domain_iso(const Network& n, const AsyncType& t, std::size_t k);

/// Path length at which the type structure is built for a comparison at depth k.
std::size_t type_depth_for(const Global& g, std::size_t k);

} // namespace asess
