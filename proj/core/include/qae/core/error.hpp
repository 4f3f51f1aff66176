#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qae {

enum class Errc {
  // vector arithmetic
  DimensionMismatch,
  ZeroVector,
  EmptyInput,
  AlphaOutOfRange,
  NonFinite,
  InvalidArgument,
  // providers
  ProviderUnavailable,
  MalformedResponse,
  DimMismatchAcrossBatch,
  GenerationFailed,
  UnparseableOutput,
  TooFewQueries,
  // index
  DuplicateDocumentId,
  EmptyIndex,
  IoError,
  FormatVersionMismatch,
  // eval
  NoJudgedQueries,
  AllZeroRelevance,
  ParseError,
  DuplicateId,
  // hypolab
  DegenerateCluster,
  InsufficientQueries,
  SingularCovariance,
  TooFewSamples,
  ZeroVariance,
  InvalidCovariance,
};

std::string_view to_string(Errc code) noexcept;

// Coarse error class, used by the CLI to pick an exit code.
enum class ErrorClass { Usage, Data, Provider };
ErrorClass classify(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qae
