#include "coulomb/error.hpp"

namespace coulomb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidConfiguration: return "InvalidConfiguration";
    case ErrorCode::MissingBetaPrime: return "MissingBetaPrime";
    case ErrorCode::PoleNotInvertible: return "PoleNotInvertible";
    case ErrorCode::InadmissibleModel: return "InadmissibleModel";
    case ErrorCode::CoincidentPoints: return "CoincidentPoints";
    case ErrorCode::MismatchedSupports: return "MismatchedSupports";
    case ErrorCode::NoClosedForm: return "NoClosedForm";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::NoReference: return "NoReference";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace coulomb
