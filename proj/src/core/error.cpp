#include "bohmvel/error.hpp"

namespace bohmvel {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid_input";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Configuration: return "configuration";
    case ErrorKind::NumericalFailure: return "numerical_failure";
    case ErrorKind::NonConverged: return "non_converged";
    case ErrorKind::NodeProximity: return "node_proximity";
    case ErrorKind::Regularity: return "regularity";
  }
  return "unknown";
}

}  // namespace bohmvel
