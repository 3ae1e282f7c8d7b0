#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "commands.hpp"
#include "support.hpp"

namespace asess::cli {
namespace {

Options file_opts(const std::string& file, std::vector<std::string> names) {
    Options o;
    o.source = testing::corpus_path(file);
    o.names = std::move(names);
    o.format = Format::Json;
    return o;
}

Options text_opts(const std::string& text, std::vector<std::string> names) {
    Options o;
    o.source = text;
    o.inline_source = true;
    o.names = std::move(names);
    return o;
}

TEST(CliReport, JsonShape) {
    Report r = run("check", file_opts("characteristic.sess", {"N", "T1"}));
    auto j = to_json(r);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"schema", "command", "exit", "inputs", "verdicts", "diagnostics",
                                              "artifacts"}));
    EXPECT_EQ(j["schema"], kSchema);
    EXPECT_EQ(j["command"], "check");
    EXPECT_EQ(j["exit"], 0);
    EXPECT_EQ(j["verdicts"]["typable"], true);
    EXPECT_TRUE(j["diagnostics"].is_array());
}

TEST(CliReport, DiagnosticFields) {
    Report r = run("check", file_opts("characteristic.sess", {"B1"}));
    EXPECT_EQ(r.exit, kFalse);
    auto j = to_json(r);
    ASSERT_FALSE(j["diagnostics"].empty());
    for (const auto& d : j["diagnostics"]) {
        EXPECT_TRUE(d.contains("code"));
        EXPECT_TRUE(d.contains("severity"));
        EXPECT_TRUE(d.contains("location"));
        EXPECT_TRUE(d.contains("message"));
    }
}

TEST(CliExit, Codes) {
    EXPECT_EQ(run("check", file_opts("characteristic.sess", {})).exit, kOk);
    EXPECT_EQ(run("balance", file_opts("balancing.sess", {"E2"})).exit, kFalse);
    EXPECT_EQ(run("balance", file_opts("balancing.sess", {"E1"})).exit, kOk);
    EXPECT_EQ(run("check", file_opts("no-such-file.sess", {})).exit, kInputError);
    EXPECT_EQ(run("check", text_opts("type T = p->q!l;", {"T"})).exit, kInputError);
    EXPECT_EQ(run("iso", file_opts("characteristic.sess", {"Nbad", "B1"})).exit, kInputError);
    EXPECT_EQ(run("project", file_opts("balancing.sess", {"U", "r"})).exit, kFalse);
    EXPECT_EQ(run("check", file_opts("characteristic.sess", {"Missing"})).exit, kInputError);
}

TEST(CliExit, ParseErrorLocation) {
    Report r = run("check", text_opts("net N = p :: 0\ntype T = p->q!l; ; End", {}));
    EXPECT_EQ(r.exit, kInputError);
    auto j = to_json(r);
    ASSERT_FALSE(j["diagnostics"].empty());
    EXPECT_NE(j["diagnostics"][0]["location"].get<std::string>().find(":2:"), std::string::npos);
}

TEST(CliCommands, Projection) {
    Report r = run("project", text_opts("type T = p->q!l; p->q?l; End", {"T", "q"}));
    ASSERT_EQ(r.exit, kOk);
    ASSERT_EQ(r.lines.size(), 1u);
    EXPECT_EQ(r.lines[0], "p?l");
}

TEST(CliCommands, DepthTable) {
    Report r = run("bounded", file_opts("depth.sess", {"D"}));
    EXPECT_EQ(r.exit, kFalse);
    auto j = to_json(r);
    EXPECT_EQ(j["verdicts"]["bounded"], false);
}

TEST(CliCommands, SimTrace) {
    Options o = file_opts("characteristic.sess", {"N"});
    o.trace = "p->q!l . q->p!l' . q->p?l' . p->q?l";
    Report r = run("sim", o);
    EXPECT_EQ(r.exit, kOk);
    o.trace = "p->q?l";
    EXPECT_EQ(run("sim", o).exit, kFalse);
}

TEST(CliCommands, IsoCounts) {
    Report r = run("iso", file_opts("choice.sess", {"N", "G"}));
    EXPECT_EQ(r.exit, kOk);
    auto j = to_json(r);
    EXPECT_EQ(j["verdicts"]["isomorphic"], true);
    EXPECT_EQ(j["artifacts"]["network_configurations"], 12);
    EXPECT_EQ(j["artifacts"]["type_configurations"], 12);
}

TEST(CliDot, FlowGraph) {
    auto path = std::filesystem::temp_directory_path() / "asess_cli_test.dot";
    Options o = file_opts("choice.sess", {"N"});
    o.dot = path.string();
    Report r = run("events", o);
    ASSERT_EQ(r.exit, kOk);
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string dot = ss.str();
    std::filesystem::remove(path);
    EXPECT_EQ(dot.rfind("digraph ", 0), 0u);
    EXPECT_EQ(dot.back(), '\n');
    std::regex node(R"(e\d+ \[label=)"), edge(R"(e\d+ -> e\d+;)"), conf(R"(e\d+ -> e\d+ \[style=dashed, dir=none\];)");
    auto count = [&](const std::regex& re) {
        return std::distance(std::sregex_iterator(dot.begin(), dot.end(), re), std::sregex_iterator());
    };
    EXPECT_EQ(count(node), 7);
    EXPECT_EQ(count(edge), 6);
    EXPECT_EQ(count(conf), 5);
}

TEST(CliDot, PrimeGraphDrawsMinimalConflicts) {
    Options o = file_opts("choice.sess", {"G"});
    o.dot = "-";
    o.format = Format::Text;
    Report r = run("events", o);
    ASSERT_EQ(r.exit, kOk);
    std::string dot = r.lines.back();
    std::regex conf(R"(\[style=dashed, dir=none\])");
    EXPECT_EQ(std::distance(std::sregex_iterator(dot.begin(), dot.end(), conf), std::sregex_iterator()), 1);
    std::regex edge(R"(e\d+ -> e\d+;)");
    EXPECT_EQ(std::distance(std::sregex_iterator(dot.begin(), dot.end(), edge), std::sregex_iterator()), 6);
}

} // namespace
} // namespace asess::cli
