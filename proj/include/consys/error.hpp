#pragma once

#include <stdexcept>
#include <string>

namespace consys {

// Failure categories. The CLI maps them onto exit codes.
enum class ErrorKind {
  InvalidInput,       // malformed or out-of-contract input
  NotInvertible,      // singular matrix, zero denominator, ...
  Unsupported,        // outside the represented field or an unimplemented case
  InsufficientOrder,  // truncation too short for the requested result
  Resonance,          // a recurrence stalls at some index
  Inconsistent,       // data contradicts an equation (seed vs operator, ...)
  ResourceCap,        // doubling schedule exhausted
  Internal            // invariant violated; a bug, not a user error
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &what) { throw Error(kind, what); }

const char *to_string(ErrorKind kind) noexcept;

} // namespace consys
