#pragma once

#include <string>
#include <vector>

#include "asess/kernel.hpp"

namespace asess {

struct Expectation {
    enum class Kind { Typable, Balanced, Bounded, WellFormed };
    Kind kind = Kind::Typable;
    bool negated = false;
    std::string net;   // only for Typable
    std::string type;
    std::size_t line = 0;
};

std::string to_string(Expectation::Kind k);

/// Contents of a .sess file, with every network and type already compiled.
struct SessionFile {
    std::string path;
    DefEnv env;
    std::vector<std::string> net_names;   // declaration order
    std::vector<std::string> type_names;
    std::map<std::string, Network> networks;
    std::map<std::string, AsyncType> types;
    std::vector<Expectation> expectations;

    const Network& network(const std::string& name) const;
    /// A declared type, or a global definition paired with the empty queue.
    AsyncType type(const std::string& name) const;
    /// A process definition by name.
    Process process(const std::string& name) const;
};

// Standalone parsers. Each accepts an optional trailing `where NAME = term` list
// whose definitions are added to a copy of env before the item is compiled.
ProcTerm parse_process_term(const std::string& text);
GlobalTerm parse_global_term(const std::string& text);
Process parse_process(const std::string& text, const DefEnv& env = {});
Global parse_global(const std::string& text, const DefEnv& env = {});
Queue parse_queue(const std::string& text);
Network parse_network(const std::string& text, const DefEnv& env = {});
AsyncType parse_async_type(const std::string& text, const DefEnv& env = {});
Comm parse_comm(const std::string& text);
Trace parse_trace(const std::string& text);
Action parse_action(const std::string& text);
ActionSeq parse_action_seq(const std::string& text);

SessionFile parse_session(const std::string& text, const std::string& filename = "<input>");
SessionFile load_session(const std::string& path);

/// Printers. Nodes that close a cycle are emitted as `def` statements ahead of the term.
std::string print(const Process& p);
std::string print(const Global& g);
std::string print(const Network& n);
std::string print(const AsyncType& t);

/// Prints a term without defs; refs to the returned names appear in `defs`.
struct PrintedTerms {
    std::vector<std::pair<std::string, std::string>> defs;
    std::vector<std::string> terms;
    std::string defs_text() const;
};
PrintedTerms print_processes(const std::vector<Process>& ps);
PrintedTerms print_globals(const std::vector<Global>& gs);

} // namespace asess
