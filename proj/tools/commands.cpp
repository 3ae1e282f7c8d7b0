#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "asess/domains.hpp"
#include "asess/events.hpp"
#include "asess/semantics.hpp"
#include "asess/textfmt.hpp"
#include "asess/typing.hpp"

namespace asess::cli {

using nlohmann::ordered_json;

namespace {

SessionFile load(const Options& o) {
    return o.inline_source ? parse_session(o.source, "<inline>") : load_session(o.source);
}

const std::string& name_at(const Options& o, std::size_t i, const char* what) {
    if (i >= o.names.size()) throw Error(std::string("missing ") + what);
    return o.names[i];
}

const char* yes(bool b) { return b ? "true" : "false"; }

// Longest path from the root in a term graph, or nothing when a cycle is reachable.
template <class Node>
std::optional<std::size_t> longest_run(const std::vector<Node>& nodes, NodeId root) {
    std::vector<int> color(nodes.size(), 0);
    std::vector<std::size_t> best(nodes.size(), 0);
    bool cyclic = false;
    std::function<void(NodeId)> visit = [&](NodeId n) {
        color[n] = 1;
        for (const Branch& b : nodes[n].branches) {
            if (color[b.next] == 1) cyclic = true;
            if (color[b.next] == 0) visit(b.next);
            best[n] = std::max(best[n], 1 + best[b.next]);
        }
        color[n] = 2;
    };
    visit(root);
    if (cyclic) return std::nullopt;
    return best[root];
}

std::optional<std::size_t> finite_length(const Network& n) {
    std::size_t total = 0;
    for (const auto& [p, proc] : n.procs) {
        auto l = longest_run(proc.graph().nodes, proc.id());
        if (!l) return std::nullopt;
        total += *l;
    }
    return total;
}

std::optional<std::size_t> finite_length(const AsyncType& t) {
    return longest_run(t.global.graph().nodes, t.global.id());
}

std::optional<std::size_t> finite_length(const Process& p) { return longest_run(p.graph().nodes, p.id()); }

template <class T>
std::size_t depth_for(const Options& o, const T& x) {
    if (o.depth) return *o.depth;
    return finite_length(x).value_or(kFallbackDepth);
}

// A name in a session file: a network, a type or a process definition.
struct Item {
    enum class Kind { Net, Type, Proc } kind;
    std::string name;
    Network net;
    AsyncType type;
    Process proc;
};

Item resolve(const SessionFile& sf, const std::string& name, bool allow_proc) {
    if (sf.networks.count(name)) return Item{Item::Kind::Net, name, sf.network(name), {}, {}};
    if (sf.types.count(name) || sf.env.globals.count(name)) return Item{Item::Kind::Type, name, {}, sf.type(name), {}};
    if (allow_proc && sf.env.procs.count(name)) return Item{Item::Kind::Proc, name, {}, {}, sf.process(name)};
    throw Error("no network or type named '" + name + "' in " + sf.path);
}

const char* kind_name(Item::Kind k) {
    switch (k) {
    case Item::Kind::Net: return "network";
    case Item::Kind::Type: return "type";
    case Item::Kind::Proc: return "process";
    }
    return "?";
}

std::size_t item_depth(const Options& o, const Item& it) {
    switch (it.kind) {
    case Item::Kind::Net: return depth_for(o, it.net);
    case Item::Kind::Type: return depth_for(o, it.type);
    case Item::Kind::Proc: return depth_for(o, it.proc);
    }
    return kFallbackDepth;
}

void add_diags(Report& r, const std::vector<Diagnostic>& ds) {
    for (const auto& d : ds) r.diagnostic(d.code, d.message, d.location, d.warning);
}

void add_inputs(Report& r, const Options& o) {
    r.inputs["source"] = o.inline_source ? "<inline>" : o.source;
    r.inputs["names"] = o.names;
}

bool expectation_holds(const SessionFile& sf, const Expectation& ex) {
    AsyncType t = sf.type(ex.type);
    switch (ex.kind) {
    case Expectation::Kind::Typable: return typecheck(sf.network(ex.net), t).ok;
    case Expectation::Kind::Balanced: return balanced(t).ok;
    case Expectation::Kind::Bounded: return bounded(t.global).ok;
    case Expectation::Kind::WellFormed: return well_formed(t).ok;
    }
    return false;
}

std::string describe(const Expectation& ex) {
    std::string s = "expect ";
    if (ex.negated) s += "not ";
    s += to_string(ex.kind) + " ";
    if (!ex.net.empty()) s += ex.net + " ";
    return s + ex.type;
}

struct BuiltES {
    EventStructure es;
    std::string omega;
};

BuiltES build_es(const Item& it, std::size_t k) {
    switch (it.kind) {
    case Item::Kind::Net: {
        auto f = fes_of_network(it.net, k);
        return {std::move(f.es), to_string(f.omega)};
    }
    case Item::Kind::Type: {
        auto p = pes_of_type(it.type, k);
        return {std::move(p.es), to_string(p.omega)};
    }
    case Item::Kind::Proc: return {pes_of_process(it.proc, k).es, {}};
    }
    return {};
}

std::vector<std::pair<std::size_t, std::size_t>> drawn_relation(const EventStructure& es) {
    std::vector<std::pair<std::size_t, std::size_t>> r;
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = 0; j < es.size(); ++j) {
            if (!es.strictly_before(i, j)) continue;
            if (es.kind == EventStructure::Kind::Prime) {
                bool covered = false;
                for (std::size_t m = 0; m < es.size() && !covered; ++m)
                    covered = es.strictly_before(i, m) && es.strictly_before(m, j);
                if (covered) continue;
            }
            r.emplace_back(i, j);
        }
    return r;
}

std::vector<std::pair<std::size_t, std::size_t>> drawn_conflicts(const EventStructure& es) {
    std::vector<std::pair<std::size_t, std::size_t>> r;
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j) {
            if (!es.conflicts(i, j)) continue;
            if (es.kind == EventStructure::Kind::Prime) {
                bool inherited = false;
                for (std::size_t a = 0; a < es.size() && !inherited; ++a)
                    for (std::size_t b = 0; b < es.size() && !inherited; ++b)
                        inherited = (a != i || b != j) && es.before(a, i) && es.before(b, j) && es.conflicts(a, b);
                if (inherited) continue;
            }
            r.emplace_back(i, j);
        }
    return r;
}

std::string dot_escape(const std::string& s) {
    std::string r;
    for (char c : s) {
        if (c == '"' || c == '\\') r += '\\';
        r += c;
    }
    return r;
}

std::string to_dot(const EventStructure& es, const std::string& name) {
    std::ostringstream os;
    os << "digraph \"" << dot_escape(name) << "\" {\n  rankdir=BT;\n  node [shape=box];\n";
    for (std::size_t i = 0; i < es.size(); ++i)
        os << "  e" << i << " [label=\"" << dot_escape(es.labels[i]) << "\", tooltip=\"" << dot_escape(es.names[i])
           << "\"];\n";
    for (auto [i, j] : drawn_relation(es)) os << "  e" << i << " -> e" << j << ";\n";
    for (auto [i, j] : drawn_conflicts(es)) os << "  e" << i << " -> e" << j << " [style=dashed, dir=none];\n";
    os << "}\n";
    return os.str();
}

ordered_json config_json(const EventStructure& es, const Config& x) {
    ordered_json a = ordered_json::array();
    for (std::size_t e : x) a.push_back(es.names[e]);
    return a;
}

std::string state_text(const Network& n) { return print(n); }
std::string state_text(const AsyncType& t) { return print(t); }

} // namespace

Report cmd_check(const Options& o) {
    Report r;
    add_inputs(r, o);
    SessionFile sf = load(o);
    if (o.names.size() >= 2) {
        auto rep = typecheck(sf.network(o.names[0]), sf.type(o.names[1]));
        r.verdict("typable", rep.ok);
        r.verdict("balanced", rep.wf.balanced);
        r.verdict("bounded", rep.wf.bounded);
        r.verdict("projectable", rep.wf.projectable);
        add_diags(r, rep.wf.diags);
        add_diags(r, rep.diags);
        r.line(std::string("typable: ") + yes(rep.ok));
        r.line(std::string("well-formed: ") + yes(rep.wf.ok) + " (balanced: " + yes(rep.wf.balanced) +
               ", bounded: " + yes(rep.wf.bounded) + ", projectable: " + yes(rep.wf.projectable) + ")");
        r.exit = rep.ok ? kOk : kFalse;
        return r;
    }
    if (o.names.size() == 1) {
        auto rep = well_formed(sf.type(o.names[0]));
        r.verdict("wellformed", rep.ok);
        r.verdict("balanced", rep.balanced);
        r.verdict("bounded", rep.bounded);
        r.verdict("projectable", rep.projectable);
        add_diags(r, rep.diags);
        r.line(std::string("well-formed: ") + yes(rep.ok) + " (balanced: " + yes(rep.balanced) +
               ", bounded: " + yes(rep.bounded) + ", projectable: " + yes(rep.projectable) + ")");
        r.exit = rep.ok ? kOk : kFalse;
        return r;
    }
    ordered_json results = ordered_json::array();
    std::size_t failed = 0;
    for (const auto& ex : sf.expectations) {
        bool actual = expectation_holds(sf, ex);
        bool pass = actual != ex.negated;
        if (!pass) ++failed;
        results.push_back({{"expectation", describe(ex)}, {"line", ex.line}, {"holds", pass}});
        r.line(describe(ex) + ": " + (pass ? "ok" : "FAILED"));
    }
    r.artifacts["expectations"] = results;
    r.verdict("expectations_hold", failed == 0);
    r.line(std::to_string(sf.expectations.size() - failed) + "/" + std::to_string(sf.expectations.size()) +
           " expectations hold");
    r.exit = failed == 0 ? kOk : kFalse;
    return r;
}

Report cmd_project(const Options& o) {
    Report r;
    add_inputs(r, o);
    SessionFile sf = load(o);
    AsyncType t = sf.type(name_at(o, 0, "type name"));
    const std::string& p = name_at(o, 1, "participant");
    auto pr = project(t.global, p);
    r.verdict("defined", pr.defined());
    add_diags(r, pr.diags);
    if (pr.defined()) {
        std::string text = print(*pr.process);
        r.artifacts["projection"] = text;
        r.line(text);
    } else {
        r.line("projection on " + p + ": undefined");
        r.exit = kFalse;
    }
    return r;
}

Report cmd_balance(const Options& o) {
    Report r;
    add_inputs(r, o);
    SessionFile sf = load(o);
    auto rep = balanced(sf.type(name_at(o, 0, "type name")));
    r.verdict("balanced", rep.ok);
    r.artifacts["derivation"] = rep.derivation;
    r.artifacts["diverged"] = rep.diverged;
    add_diags(r, rep.diags);
    r.line(std::string("balanced: ") + yes(rep.ok));
    r.exit = rep.ok ? kOk : kFalse;
    return r;
}

Report cmd_bounded(const Options& o) {
    Report r;
    add_inputs(r, o);
    SessionFile sf = load(o);
    AsyncType t = sf.type(name_at(o, 0, "type name"));
    auto rep = bounded(t.global);
    ordered_json table = ordered_json::object();
    for (const auto& p : players(t.global)) {
        Depth d = depth(t.global, p);
        table[p] = d.str();
        r.line("depth(" + p + ") = " + d.str());
    }
    r.artifacts["depth"] = table;
    ordered_json offenders = ordered_json::array();
    for (const auto& [node, p] : rep.offenders) offenders.push_back({{"node", node}, {"participant", p}});
    r.artifacts["offenders"] = offenders;
    add_diags(r, rep.diags);
    r.verdict("bounded", rep.ok);
    r.line(std::string("bounded: ") + yes(rep.ok));
    r.exit = rep.ok ? kOk : kFalse;
    return r;
}

Report cmd_sim(const Options& o) {
    Report r;
    add_inputs(r, o);
    SessionFile sf = load(o);
    Item it = resolve(sf, name_at(o, 0, "network or type name"), false);
    r.inputs["kind"] = kind_name(it.kind);
    if (!o.trace.empty()) {
        Trace tr = parse_trace(o.trace);
        r.inputs["trace"] = to_string(tr);
        try {
            std::string final_state = it.kind == Item::Kind::Net ? state_text(net_run(it.net, tr))
                                                                 : state_text(type_run(it.type, tr));
            r.verdict("enabled", true);
            r.artifacts["state"] = final_state;
            r.line("enabled: true");
            r.line(final_state);
        } catch (const NotEnabled& e) {
            r.verdict("enabled", false);
            r.diagnostic("not-enabled", e.what(), "step " + std::to_string(e.index()));
            r.line("enabled: false");
            r.exit = kFalse;
        }
        return r;
    }
    std::size_t k = o.enumerate ? *o.enumerate : item_depth(o, it);
    r.inputs["depth"] = k;
    auto traces = it.kind == Item::Kind::Net ? net_traces(it.net, k) : type_traces(it.type, k);
    ordered_json list = ordered_json::array();
    for (const Trace& t : traces) {
        list.push_back(to_string(t));
        r.line(to_string(t));
    }
    r.artifacts["traces"] = list;
    r.line(std::to_string(traces.size()) + " traces of length at most " + std::to_string(k));
    return r;
}

Report cmd_events(const Options& o) {
    Report r;
    add_inputs(r, o);
    SessionFile sf = load(o);
    Item it = resolve(sf, name_at(o, 0, "network, type or process name"), true);
    std::size_t k = item_depth(o, it);
    r.inputs["kind"] = kind_name(it.kind);
    r.inputs["depth"] = k;
    BuiltES b = build_es(it, k);
    const EventStructure& es = b.es;
    const bool flow = es.kind == EventStructure::Kind::Flow;

    ordered_json events = ordered_json::array();
    r.line(std::string(flow ? "flow" : "prime") + " event structure, " + std::to_string(es.size()) + " events" +
           (b.omega.empty() ? std::string() : ", o-trace " + b.omega));
    for (std::size_t i = 0; i < es.size(); ++i) {
        events.push_back({{"id", "e" + std::to_string(i)}, {"event", es.names[i]}, {"io", es.labels[i]}});
        r.line("  e" + std::to_string(i) + "  " + es.labels[i] + "  " + es.names[i]);
    }
    ordered_json rel = ordered_json::array();
    ordered_json conf = ordered_json::array();
    std::string rel_text, conf_text;
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = 0; j < es.size(); ++j) {
            if (es.strictly_before(i, j)) {
                rel.push_back({"e" + std::to_string(i), "e" + std::to_string(j)});
                rel_text += " e" + std::to_string(i) + (flow ? "->e" : "<e") + std::to_string(j);
            }
            if (i < j && es.conflicts(i, j)) {
                conf.push_back({"e" + std::to_string(i), "e" + std::to_string(j)});
                conf_text += " e" + std::to_string(i) + "#e" + std::to_string(j);
            }
        }
    r.line(std::string(flow ? "flow:" : "causality:") + (rel_text.empty() ? " none" : rel_text));
    r.line(std::string("conflict:") + (conf_text.empty() ? " none" : conf_text));

    auto laws = check_laws(es);
    r.verdict("laws_hold", !laws);
    if (laws) {
        r.diagnostic("laws", *laws);
        r.exit = kFalse;
    }
    r.artifacts["kind"] = flow ? "flow" : "prime";
    if (!b.omega.empty()) r.artifacts["omega"] = b.omega;
    r.artifacts["events"] = events;
    r.artifacts[flow ? "flow" : "causality"] = rel;
    r.artifacts["conflict"] = conf;

    if (!o.dot.empty()) {
        std::string dot = to_dot(es, it.name);
        if (o.dot == "-") {
            r.lines.push_back(dot);
        } else {
            std::ofstream out(o.dot);
            if (!out) throw Error("cannot write '" + o.dot + "'");
            out << dot;
        }
        r.artifacts["dot"] = o.dot;
    }
    return r;
}

Report cmd_domain(const Options& o) {
    Report r;
    add_inputs(r, o);
    SessionFile sf = load(o);
    Item it = resolve(sf, name_at(o, 0, "network, type or process name"), true);
    std::size_t k = item_depth(o, it);
    r.inputs["kind"] = kind_name(it.kind);
    r.inputs["depth"] = k;
    BuiltES b = build_es(it, k);
    Domain d = enumerate_configurations(b.es, k);
    ordered_json list = ordered_json::array();
    for (const Config& x : d.configs) {
        if (x.empty()) continue;
        list.push_back(config_json(b.es, x));
        r.line(to_string(b.es, x));
    }
    r.artifacts["configurations"] = list;
    r.artifacts["count"] = d.nonempty();
    r.line("configurations: " + std::to_string(d.nonempty()));
    return r;
}

Report cmd_iso(const Options& o) {
    Report r;
    add_inputs(r, o);
    SessionFile sf = load(o);
    const Network& n = sf.network(name_at(o, 0, "network name"));
    AsyncType t = sf.type(name_at(o, 1, "type name"));
    std::size_t k = o.depth ? *o.depth : [&] {
        auto a = finite_length(n);
        auto b = finite_length(t);
        return a && b ? std::max(*a, *b) : kFallbackDepth;
    }();
    r.inputs["depth"] = k;
    IsoReport rep = domain_iso(n, t, k);
    r.verdict("isomorphic", rep.ok);
    r.artifacts["network_configurations"] = rep.net_configs;
    r.artifacts["type_configurations"] = rep.type_configs;
    r.artifacts["type_depth"] = rep.type_depth;
    ordered_json table = ordered_json::array();
    for (const auto& [x, y] : rep.table) table.push_back({{"network", x}, {"type", y}});
    r.artifacts["bijection"] = table;
    if (!rep.ok) r.diagnostic("iso", rep.failure);
    r.line(std::string("isomorphic: ") + yes(rep.ok) + ", configurations: " + std::to_string(rep.net_configs) +
           (rep.net_configs == rep.type_configs ? std::string() : " vs " + std::to_string(rep.type_configs)));
    for (const auto& [x, y] : rep.table) r.line("  " + x + "  <->  " + y);
    r.exit = rep.ok ? kOk : kFalse;
    return r;
}

Report cmd_progress(const Options& o) {
    Report r;
    add_inputs(r, o);
    SessionFile sf = load(o);
    const Network& n = sf.network(name_at(o, 0, "network name"));
    AsyncType t = sf.type(name_at(o, 1, "type name"));
    std::vector<ProgressTarget> targets;
    if (!o.target.empty()) {
        if (o.target[0] == '#') targets.push_back(ProgressTarget::of_message(std::stoul(o.target.substr(1))));
        else targets.push_back(ProgressTarget::of_participant(o.target));
    } else {
        for (const auto& p : n.active()) targets.push_back(ProgressTarget::of_participant(p));
        for (std::size_t i = 0; i < n.queue.size(); ++i) targets.push_back(ProgressTarget::of_message(i));
    }
    ordered_json list = ordered_json::array();
    for (const auto& tg : targets) {
        std::string what = tg.kind == ProgressTarget::Kind::Participant
                               ? tg.participant
                               : "message #" + std::to_string(tg.message_index) + " " +
                                     to_string(n.queue.msgs.at(tg.message_index));
        ProgressWitness w = progress_witness(n, t, tg);
        list.push_back({{"target", what}, {"witness", to_string(w.trace)}, {"length", w.trace.size()}, {"bound", w.bound}});
        r.line(what + ": " + to_string(w.trace) + " (length " + std::to_string(w.trace.size()) + ", bound " +
               std::to_string(w.bound) + ")");
    }
    r.artifacts["witnesses"] = list;
    r.verdict("progress", true);
    r.line("progress: true");
    return r;
}

Report run(const std::string& command, const Options& o) {
    static const std::map<std::string, Report (*)(const Options&)> table{
        {"check", cmd_check},   {"project", cmd_project}, {"balance", cmd_balance},
        {"bounded", cmd_bounded}, {"sim", cmd_sim},       {"events", cmd_events},
        {"domain", cmd_domain}, {"iso", cmd_iso},         {"progress", cmd_progress},
    };
    auto fail = [&](int code, const std::string& diag, const std::string& msg, const std::string& where = {}) {
        Report r;
        r.command = command;
        add_inputs(r, o);
        r.diagnostic(diag, msg, where);
        r.exit = code;
        return r;
    };
    auto it = table.find(command);
    if (it == table.end()) return fail(kInputError, "usage", "unknown command '" + command + "'");
    try {
        Report r = it->second(o);
        r.command = command;
        return r;
    } catch (const ParseError& e) {
        return fail(kInputError, "parse", e.bare_message(),
                    e.file() + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()));
    } catch (const DefinitionError& e) {
        return fail(kInputError, "definition", e.what());
    } catch (const PreconditionError& e) {
        return fail(kInputError, "precondition", e.what());
    } catch (const CapExceeded& e) {
        return fail(kCapExceeded, "cap-exceeded", e.what());
    } catch (const InternalDiagnostic& e) {
        return fail(kCapExceeded, "internal", e.what());
    } catch (const Error& e) {
        return fail(kInputError, "input", e.what());
    } catch (const std::exception& e) {
        return fail(kInputError, "input", e.what());
    }
}

} // namespace asess::cli
