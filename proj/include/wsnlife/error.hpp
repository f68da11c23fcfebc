#pragma once

#include <stdexcept>
#include <string>

namespace wsnlife {

enum class ErrorKind {
  kValidation,       // malformed input or violated precondition
  kParse,            // unreadable scenario document
  kUnknownNode,      // id outside 0..N-1
  kModelDegeneracy,  // covariance not positive definite, non-positive loads
  kGuard,            // instance too large for an exhaustive method
  kInfeasibleEnergy, // energy budget below the h*ln2 infimum
  kNumeric,          // root finder / simplex failed to converge
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit status for an error kind: 2 validation, 3 guard, 4 numeric.
inline int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kGuard:
      return 3;
    case ErrorKind::kInfeasibleEnergy:
    case ErrorKind::kNumeric:
      return 4;
    default:
      return 2;
  }
}

const char* to_string(ErrorKind kind);

}  // namespace wsnlife
