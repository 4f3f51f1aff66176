#include "qae/core/error.hpp"

namespace qae {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
    case Errc::NonFinite: return "NonFinite";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::ProviderUnavailable: return "ProviderUnavailable";
    case Errc::MalformedResponse: return "MalformedResponse";
    case Errc::DimMismatchAcrossBatch: return "DimMismatchAcrossBatch";
    case Errc::GenerationFailed: return "GenerationFailed";
    case Errc::UnparseableOutput: return "UnparseableOutput";
    case Errc::TooFewQueries: return "TooFewQueries";
    case Errc::DuplicateDocumentId: return "DuplicateDocumentId";
    case Errc::EmptyIndex: return "EmptyIndex";
    case Errc::IoError: return "IoError";
    case Errc::FormatVersionMismatch: return "FormatVersionMismatch";
    case Errc::NoJudgedQueries: return "NoJudgedQueries";
    case Errc::AllZeroRelevance: return "AllZeroRelevance";
    case Errc::ParseError: return "ParseError";
    case Errc::DuplicateId: return "DuplicateId";
    case Errc::DegenerateCluster: return "DegenerateCluster";
    case Errc::InsufficientQueries: return "InsufficientQueries";
    case Errc::SingularCovariance: return "SingularCovariance";
    case Errc::TooFewSamples: return "TooFewSamples";
    case Errc::ZeroVariance: return "ZeroVariance";
    case Errc::InvalidCovariance: return "InvalidCovariance";
  }
  return "Unknown";
}

ErrorClass classify(Errc code) noexcept {
  switch (code) {
    case Errc::ProviderUnavailable:
    case Errc::MalformedResponse:
    case Errc::DimMismatchAcrossBatch:
    case Errc::GenerationFailed:
    case Errc::UnparseableOutput:
    case Errc::TooFewQueries:
      return ErrorClass::Provider;
    case Errc::InvalidArgument:
    case Errc::AlphaOutOfRange:
      return ErrorClass::Usage;
    default:
      return ErrorClass::Data;
  }
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace qae
