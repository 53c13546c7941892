#include "splab/types.hpp"

namespace splab {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidData: return "InvalidData";
    case ErrorKind::Admissibility: return "AdmissibilityError";
    case ErrorKind::EvaluationAtPole: return "EvaluationAtPole";
    case ErrorKind::DegenerateZeta: return "DegenerateZeta";
    case ErrorKind::MassPresent: return "MassPresent";
    case ErrorKind::NoInvertibleShift: return "NoInvertibleShift";
    case ErrorKind::EigensolveFailure: return "EigensolveFailure";
    case ErrorKind::DegreeOverflow: return "DegreeOverflow";
    case ErrorKind::ChainRequired: return "ChainRequired";
    case ErrorKind::OrderTooHigh: return "OrderTooHigh";
    case ErrorKind::SingularGauge: return "SingularGauge";
    case ErrorKind::NotMinimal: return "NotMinimal";
    case ErrorKind::DivergentNearRealZero: return "DivergentNearRealZero";
    case ErrorKind::NotBiorthogonal: return "NotBiorthogonal";
    case ErrorKind::ContourTooClose: return "ContourTooClose";
    case ErrorKind::BadParameters: return "BadParameters";
    case ErrorKind::NearPole: return "NearPole";
    case ErrorKind::ExhaustedInput: return "ExhaustedInput";
    case ErrorKind::BisectionFailure: return "BisectionFailure";
    case ErrorKind::DecayViolation: return "DecayViolation";
  }
  return "Unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidData:
    case ErrorKind::Admissibility:
    case ErrorKind::BadParameters:
    case ErrorKind::NearPole:
    case ErrorKind::ExhaustedInput:
    case ErrorKind::DegenerateZeta:
    case ErrorKind::MassPresent:
    case ErrorKind::SingularGauge:
    case ErrorKind::ChainRequired:
    case ErrorKind::OrderTooHigh:
      return 2;
    case ErrorKind::DecayViolation:
    case ErrorKind::NotBiorthogonal:
      return 3;
    default:
      return 4;
  }
}

}  // namespace splab
