#pragma once

#include <stdexcept>
#include <string>

namespace biortho {

enum class ErrorKind {
  invalid_argument,
  precondition,
  truncation,
  non_convergence,
  precision_exhausted,
  parse,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, const std::string& what,
                    ErrorKind kind = ErrorKind::precondition) {
  if (!condition) fail(kind, what);
}

}  // namespace biortho
