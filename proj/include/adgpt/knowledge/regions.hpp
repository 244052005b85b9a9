#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace adgpt {

// The thirteen GTEx brain tissues. Order is the canonical listing order and is
// used for iteration everywhere (corpus generation, /regions, reports).
enum class BrainRegion : std::uint8_t {
  kFrontalCortex,
  kAmygdala,
  kAnteriorCingulateCortex,
  kCaudateBasalGanglia,
  kCerebellarHemisphere,
  kCerebellum,
  kNucleusAccumbensBasalGanglia,
  kPutamenBasalGanglia,
  kCervicalSpinalCord,
  kCortex,
  kHypothalamus,
  kHippocampus,
  kSubstantiaNigra,
};

inline constexpr std::size_t kBrainRegionCount = 13;

struct RegionInfo {
  BrainRegion region;
  std::string_view id;     // snake_case identifier used in file names and JSON
  std::string_view label;  // display label used in generated text
  std::span<const std::string_view> aliases;
};

const std::array<BrainRegion, kBrainRegionCount>& all_regions();
const RegionInfo& region_info(BrainRegion region);

std::string_view region_id(BrainRegion region);
std::string_view region_label(BrainRegion region);

// Accepts the identifier, the display label or any alias, case-insensitively
// and ignoring punctuation ("Caudate (basal ganglia)" == "caudate basal ganglia").
std::optional<BrainRegion> parse_region(std::string_view text);

// Lowercases ASCII and maps every non-alphanumeric run to a single space.
std::string normalize_phrase(std::string_view text);

enum class QtlKind : std::uint8_t { kEqtl, kSqtl };

inline constexpr std::array<QtlKind, 2> kAllQtlKinds{QtlKind::kEqtl, QtlKind::kSqtl};

std::string_view qtl_kind_name(QtlKind kind);         // "eQTL" / "sQTL"
std::string_view qtl_kind_mechanism(QtlKind kind);    // "expression" / "splicing regulation"
std::optional<QtlKind> parse_qtl_kind(std::string_view text);

}  // namespace adgpt
