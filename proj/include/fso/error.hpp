#pragma once

#include <stdexcept>
#include <string>

namespace fso {

enum class ErrorKind {
  UniverseMismatch,
  UndefinedCapacity,
  Validation,
  NoCanon,
  UnknownProtocol,
  UnknownLevel,
  UnknownRole,
  Configuration,
};

const char* to_string(ErrorKind kind);

// Library-wide exception. `kind` lets callers map failures to exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fso
