#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adgpt {

// Every domain failure raised by the library carries one of these codes. The
// CLI prints the code name as a machine-parsable prefix; the service maps it
// to an HTTP status.
enum class ErrorCode {
  // ingest
  kEmptyList,
  kMalformedSymbol,
  kMissingColumn,
  kCoordinateOrder,
  kBadStrand,
  kBadChromosome,
  kQValueRange,
  kMalformedRow,
  kMissingReasoning,
  kDuplicateGene,
  kManifestError,
  // knowledge
  kUnknownGeneInQtl,
  kUnknownGeneInOmim,
  kDuplicateAnnotation,
  kDuplicateQtlRecord,
  kUnknownGene,
  kUnknownRegion,
  kSnapshotVersion,
  kSnapshotFormat,
  // corpora
  kMissingAnnotation,
  kBadFraction,
  kSchemaError,
  kTemplateError,
  kIoError,
  // router
  kMissingClass,
  // engines
  kMissingEntity,
  kAmbiguousGene,
  kUngroundedOutput,
  kUnknownBackend,
  // eval
  kLengthMismatch,
  kEmpty,
  kZeroVariance,
  kEmptyRatings,
  kInvalidArgument,
  // service
  kConfigError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

}  // namespace adgpt
