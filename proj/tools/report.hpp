#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace asess::cli {

enum class Format { Text, Json };

enum Exit : int { kOk = 0, kFalse = 1, kInputError = 2, kCapExceeded = 3 };

/// What a command produced. Text lines are shown in text mode, the rest in JSON mode.
struct Report {
    std::string command;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    nlohmann::ordered_json verdicts = nlohmann::ordered_json::object();
    nlohmann::ordered_json diagnostics = nlohmann::ordered_json::array();
    nlohmann::ordered_json artifacts = nlohmann::ordered_json::object();
    std::vector<std::string> lines;
    int exit = kOk;

    void line(std::string s) { lines.push_back(std::move(s)); }
    void diagnostic(const std::string& code, const std::string& message, const std::string& location = {},
                    bool warning = false);
    void verdict(const std::string& key, bool value);
};

inline constexpr const char* kSchema = "asess-report/1";

nlohmann::ordered_json to_json(const Report& r);
void emit(const Report& r, Format f);

} // namespace asess::cli
