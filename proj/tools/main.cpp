#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace asess::cli;

int main(int argc, char** argv) {
    CLI::App app{"asess: asynchronous sessions, their types and their event structures"};
    app.require_subcommand(1);

    Options o;
    std::string format = "text";
    std::size_t depth = 0;

    auto common = [&](CLI::App* sub, const std::string& names_help) {
        sub->add_option("source", o.source, "a .sess file, or session text with -e")->required();
        sub->add_option("names", o.names, names_help);
        sub->add_flag("-e,--expr", o.inline_source, "read the session text from the source argument");
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--depth", depth, "bound on event length, trace length and configuration size")
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed, "seed for randomized commands");
    };

    std::map<std::string, CLI::App*> subs;
    subs["check"] = app.add_subcommand("check", "run the expectations of a file, or check [NET] TYPE");
    common(subs["check"], "[NET] TYPE");
    subs["project"] = app.add_subcommand("project", "project a global type on a participant");
    common(subs["project"], "TYPE PARTICIPANT");
    subs["balance"] = app.add_subcommand("balance", "decide balancing of an asynchronous type");
    common(subs["balance"], "TYPE");
    subs["bounded"] = app.add_subcommand("bounded", "depth table and boundedness of a global type");
    common(subs["bounded"], "TYPE");
    subs["sim"] = app.add_subcommand("sim", "run a trace, or list the traces of a network or type");
    common(subs["sim"], "NET|TYPE");
    subs["sim"]->add_option("--trace", o.trace, "trace to run, e.g. \"p->q!l . p->q?l\"");
    std::size_t enumerate = 0;
    subs["sim"]->add_option("--enumerate", enumerate, "list traces up to this length");
    subs["events"] = app.add_subcommand("events", "build the event structure of a network, type or process");
    common(subs["events"], "NET|TYPE|PROC");
    subs["events"]->add_option("--dot", o.dot, "write a DOT graph to this file ('-' for standard output)");
    subs["domain"] = app.add_subcommand("domain", "list the configurations of an event structure");
    common(subs["domain"], "NET|TYPE|PROC");
    subs["iso"] = app.add_subcommand("iso", "compare the configuration domains of a network and its type");
    common(subs["iso"], "NET TYPE");
    subs["progress"] = app.add_subcommand("progress", "find progress witnesses for participants and messages");
    common(subs["progress"], "NET TYPE");
    subs["progress"]->add_option("--target", o.target, "a participant, or #i for the i-th queued message");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), kInputError);
    }

    if (depth) o.depth = depth;
    if (enumerate) o.enumerate = enumerate;
    o.format = format == "json" ? Format::Json : Format::Text;

    for (const auto& [name, sub] : subs) {
        if (!sub->parsed()) continue;
        Report r = run(name, o);
        emit(r, o.format);
        return r.exit;
    }
    return kInputError;
}
