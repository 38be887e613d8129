#include "ptzeros/common.hpp"

namespace ptzeros {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DegeneratePair: return "DegeneratePair";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::BranchAmbiguity: return "BranchAmbiguity";
    case ErrorKind::PTViolation: return "PTViolation";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DerivativeVanishes: return "DerivativeVanishes";
    case ErrorKind::BranchFailure: return "BranchFailure";
    case ErrorKind::LostPath: return "LostPath";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace ptzeros
