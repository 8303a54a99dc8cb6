#include "spcert/error.hpp"

namespace spcert {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotUnderdetermined: return "NotUnderdetermined";
    case ErrorCode::NumericalBreakdown: return "NumericalBreakdown";
    case ErrorCode::LpInfeasible: return "LpInfeasible";
    case ErrorCode::AllFacesInfeasible: return "AllFacesInfeasible";
    case ErrorCode::NotADictionary: return "NotADictionary";
    case ErrorCode::ZeroColumn: return "ZeroColumn";
    case ErrorCode::NonpositiveCoherence: return "NonpositiveCoherence";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::WitnessUnavailable: return "WitnessUnavailable";
    case ErrorCode::BadDimensions: return "BadDimensions";
    case ErrorCode::NotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InternalInvariant: return "InternalInvariant";
  }
  return "Unknown";
}

}  // namespace spcert
