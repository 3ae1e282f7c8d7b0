#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "asess/events.hpp"
#include "asess/kernel.hpp"
#include "asess/textfmt.hpp"
#include "asess/traces.hpp"

namespace asess {

// Readable values in test failure messages.
inline void PrintTo(const Comm& c, std::ostream* os) { *os << to_string(c); }
inline void PrintTo(const NEvent& e, std::ostream* os) { *os << to_string(e); }
inline void PrintTo(const TEvent& e, std::ostream* os) { *os << to_string(e); }

} // namespace asess

namespace asess::testing {

std::string corpus_path(const std::string& file);
SessionFile load_corpus(const std::string& file);
/// Every .sess file of the corpus, sorted by name.
std::vector<std::string> corpus_files();

/// Seeded source of small random choices.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}
    std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
    template <class T>
    const T& pick(const std::vector<T>& xs) { return xs[below(xs.size())]; }
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

struct TypedPair {
    Network net;
    AsyncType type;
};

/// Network made of the projections of a well-formed type, with the type's queue.
Network network_of(const AsyncType& t);

/// A random well-formed asynchronous type whose graph has at most max_nodes nodes.
AsyncType random_wellformed_type(Gen& g, std::size_t max_nodes = 6);

/// A random typed pair: the projections of a random well-formed type, possibly after a few steps.
TypedPair random_typed_pair(Gen& g, std::size_t max_nodes = 6);

/// An o-trace w and a trace t such that w.t is well formed.
struct WfTrace {
    OTrace omega;
    Trace trace;
};
WfTrace random_wf_trace(Gen& g, std::size_t max_omega, std::size_t min_len, std::size_t max_len);

/// A random event structure obeying the laws of its kind, with names e0, e1, ...
EventStructure random_es(Gen& g, EventStructure::Kind kind, std::size_t n);

/// Sets of events (as bitmasks) reachable by extending a proving sequence one event at a time.
/// Written from the definition, independently of the library's checks.
std::vector<bool> provable_sets(const EventStructure& es);

/// Configuration test straight from the definitions, over a bitmask.
bool oracle_configuration(const EventStructure& es, std::uint32_t set);

std::vector<std::size_t> members(std::uint32_t set);

} // namespace asess::testing
