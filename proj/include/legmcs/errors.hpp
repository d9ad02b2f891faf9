#pragma once

#include <stdexcept>
#include <string>

namespace legmcs {

/// Domain error with a stable machine-readable code (surfaced as JSON by the CLI).
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

private:
  std::string code_;
};

[[noreturn]] inline void fail(const char* code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace legmcs
