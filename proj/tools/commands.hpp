#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "report.hpp"

namespace asess::cli {

struct Options {
    std::string source;          // a path, or session text when inline_source is set
    bool inline_source = false;
    std::vector<std::string> names;  // positional names after the source
    std::optional<std::size_t> depth;
    std::string trace;           // sim --trace
    std::optional<std::size_t> enumerate;  // sim --enumerate
    std::string dot;             // events --dot
    std::string target;          // progress --target
    std::uint64_t seed = 1;
    Format format = Format::Text;
};

Report cmd_check(const Options& o);
Report cmd_project(const Options& o);
Report cmd_balance(const Options& o);
Report cmd_bounded(const Options& o);
Report cmd_sim(const Options& o);
Report cmd_events(const Options& o);
Report cmd_domain(const Options& o);
Report cmd_iso(const Options& o);
Report cmd_progress(const Options& o);

/// Dispatches by name, turning library exceptions into diagnostics and exit codes.
Report run(const std::string& command, const Options& o);

/// Depth used when --depth is absent: the longest run if everything is finite, else 8.
inline constexpr std::size_t kFallbackDepth = 8;

} // namespace asess::cli
