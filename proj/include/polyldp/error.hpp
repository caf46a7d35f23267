#pragma once

#include <stdexcept>
#include <string>

namespace polyldp {

/// Broad failure classes. The CLI maps each one to its own exit code.
enum class ErrorKind {
  kInvalidInput,   // malformed polyomino, curve or argument
  kPrecondition,   // operation called outside its domain
  kInfeasible,     // constraint admits no object
  kOverflow,       // DP state space exceeded its packing limits
  kSolver,         // root finder / quadrature did not converge
  kIo,
  kConfig,
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

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace polyldp
