#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace synthpanel {

// Every failure surfaced by the engine carries a stable machine-readable
// code (used by the CLI for structured messages and exit status) plus a
// human-readable message.
class Error : public std::runtime_error {
public:
  // Validation errors are config/design problems (CLI exit 1);
  // runtime errors are algorithmic or I/O failures (CLI exit 2).
  enum class Kind { validation, runtime };

  Error(std::string code, const std::string& message, Kind kind = Kind::runtime)
      : std::runtime_error("[" + code + "] " + message),
        code_(std::move(code)),
        kind_(kind) {}

  const std::string& code() const { return code_; }
  Kind kind() const { return kind_; }

private:
  std::string code_;
  Kind kind_;
};

inline Error validation_error(std::string code, const std::string& message) {
  return Error(std::move(code), message, Error::Kind::validation);
}

inline Error runtime_error(std::string code, const std::string& message) {
  return Error(std::move(code), message, Error::Kind::runtime);
}

}  // namespace synthpanel
