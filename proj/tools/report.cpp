#include "report.hpp"

#include <iostream>

namespace asess::cli {

void Report::diagnostic(const std::string& code, const std::string& message, const std::string& location,
                        bool warning) {
    diagnostics.push_back({{"code", code},
                           {"severity", warning ? "warning" : "error"},
                           {"location", location},
                           {"message", message}});
}

void Report::verdict(const std::string& key, bool value) { verdicts[key] = value; }

nlohmann::ordered_json to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["schema"] = kSchema;
    j["command"] = r.command;
    j["exit"] = r.exit;
    j["inputs"] = r.inputs;
    j["verdicts"] = r.verdicts;
    j["diagnostics"] = r.diagnostics;
    j["artifacts"] = r.artifacts;
    return j;
}

void emit(const Report& r, Format f) {
    if (f == Format::Json) {
        std::cout << to_json(r).dump(2) << '\n';
        return;
    }
    for (const auto& l : r.lines) std::cout << l << '\n';
    for (const auto& d : r.diagnostics) {
        std::cerr << d["severity"].get<std::string>() << " [" << d["code"].get<std::string>() << "]";
        const auto& loc = d["location"].get_ref<const std::string&>();
        if (!loc.empty()) std::cerr << " at " << loc;
        std::cerr << ": " << d["message"].get<std::string>() << '\n';
    }
}

} // namespace asess::cli
