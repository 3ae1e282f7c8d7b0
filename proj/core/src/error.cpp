#include "asess/error.hpp"

namespace asess {

ParseError::ParseError(std::string file, std::size_t line, std::size_t col, const std::string& msg)
    : Error(file + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
      file_(std::move(file)), line_(line), col_(col), bare_(msg) {}

NotEnabled::NotEnabled(const std::string& comm, std::size_t index)
    : Error("communication " + comm + " not enabled at step " + std::to_string(index)),
      index_(index) {}

} // namespace asess
