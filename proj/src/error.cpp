#include "wsnlife/error.hpp"

namespace wsnlife {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation:
      return "validation";
    case ErrorKind::kParse:
      return "parse";
    case ErrorKind::kUnknownNode:
      return "unknown-node";
    case ErrorKind::kModelDegeneracy:
      return "model-degeneracy";
    case ErrorKind::kGuard:
      return "guard";
    case ErrorKind::kInfeasibleEnergy:
      return "infeasible-energy";
    case ErrorKind::kNumeric:
      return "numeric";
  }
  return "unknown";
}

}  // namespace wsnlife
