#pragma once

#include <stdexcept>
#include <string>

namespace lucid {

/// Failure categories. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  kInternal = 1,
  kInput = 2,
  kBudget = 3,
  kInfeasible = 4,
  kArgument = 5,
  kIo = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace lucid
