#include "adgpt/error.hpp"

namespace adgpt {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyList: return "EmptyList";
    case ErrorCode::kMalformedSymbol: return "MalformedSymbol";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kCoordinateOrder: return "CoordinateOrder";
    case ErrorCode::kBadStrand: return "BadStrand";
    case ErrorCode::kBadChromosome: return "BadChromosome";
    case ErrorCode::kQValueRange: return "QValueRange";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kMissingReasoning: return "MissingReasoning";
    case ErrorCode::kDuplicateGene: return "DuplicateGene";
    case ErrorCode::kManifestError: return "ManifestError";
    case ErrorCode::kUnknownGeneInQtl: return "UnknownGeneInQtl";
    case ErrorCode::kUnknownGeneInOmim: return "UnknownGeneInOmim";
    case ErrorCode::kDuplicateAnnotation: return "DuplicateAnnotation";
    case ErrorCode::kDuplicateQtlRecord: return "DuplicateQtlRecord";
    case ErrorCode::kUnknownGene: return "UnknownGene";
    case ErrorCode::kUnknownRegion: return "UnknownRegion";
    case ErrorCode::kSnapshotVersion: return "SnapshotVersion";
    case ErrorCode::kSnapshotFormat: return "SnapshotFormat";
    case ErrorCode::kMissingAnnotation: return "MissingAnnotation";
    case ErrorCode::kBadFraction: return "BadFraction";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kTemplateError: return "TemplateError";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMissingClass: return "MissingClass";
    case ErrorCode::kMissingEntity: return "MissingEntity";
    case ErrorCode::kAmbiguousGene: return "AmbiguousGene";
    case ErrorCode::kUngroundedOutput: return "UngroundedOutput";
    case ErrorCode::kUnknownBackend: return "UnknownBackend";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmpty: return "Empty";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kEmptyRatings: return "EmptyRatings";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace adgpt
