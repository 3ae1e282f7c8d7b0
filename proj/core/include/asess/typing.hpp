#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "asess/kernel.hpp"

namespace asess {

struct Diagnostic {
    std::string code;
    std::string location;
    std::string message;
    bool warning = false;
};

std::string to_string(const Diagnostic& d);

/// A natural number or infinity.
struct Depth {
    std::size_t value = 0;
    bool infinite = false;

    static Depth inf() { return Depth{0, true}; }
    static Depth of(std::size_t v) { return Depth{v, false}; }
    bool operator==(const Depth&) const = default;
    std::string str() const { return infinite ? "inf" : std::to_string(value); }
};

// ---- projection

struct Projection {
    std::optional<Process> process;
    std::vector<Diagnostic> diags;
    bool defined() const { return process.has_value(); }
};

Projection project(const Global& g, const Participant& r);

// ---- depth and boundedness

/// Position of the first communication played by p, or 0.
std::size_t ord(const Trace& t, const Participant& p);
Depth depth(const Global& g, const Participant& p);

struct BoundedReport {
    bool ok = true;
    std::vector<std::pair<NodeId, Participant>> offenders;
    std::vector<Diagnostic> diags;
};

BoundedReport bounded(const Global& g);

// ---- balancing

struct BalanceReport {
    bool ok = true;
    bool diverged = false;
    std::vector<std::string> derivation;  // judgements in the order they were visited
    std::vector<Diagnostic> diags;
};

BalanceReport balanced(const AsyncType& t);

// ---- well-formedness, preorder and typing

struct WellFormedReport {
    bool ok = true;
    bool balanced = false;
    bool bounded = false;
    bool projectable = false;
    std::map<Participant, Projection> projections;
    std::vector<Diagnostic> diags;
};

WellFormedReport well_formed(const AsyncType& t);

bool proc_leq(const Process& p, const Process& q);

struct TypingReport {
    bool ok = true;
    WellFormedReport wf;
    std::vector<Diagnostic> diags;
};

TypingReport typecheck(const Network& n, const AsyncType& t);

// ---- progress

Depth idepth(const Global& g, const Comm& input);

struct ProgressTarget {
    enum class Kind { Participant, Message };
    Kind kind = Kind::Participant;
    Participant participant;
    std::size_t message_index = 0;  // 0-based position in the network queue

    static ProgressTarget of_participant(Participant p) { return {Kind::Participant, std::move(p), 0}; }
    static ProgressTarget of_message(std::size_t i) { return {Kind::Message, {}, i}; }
};

struct ProgressWitness {
    Trace trace;
    std::size_t bound = 0;
};

/// Throws PreconditionError on untyped input or an inactive target,
/// InternalDiagnostic when the bound is exceeded.
ProgressWitness progress_witness(const Network& n, const AsyncType& t, const ProgressTarget& target);

} // namespace asess
