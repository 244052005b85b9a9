#include "adgpt/knowledge/regions.hpp"

#include <cctype>

namespace adgpt {
namespace {

// Aliases are pre-normalized (see normalize_phrase) and pairwise disjoint.
constexpr std::string_view kFrontalAliases[] = {"frontal cortex", "frontal cortex ba9",
                                                "brain frontal cortex ba9"};
constexpr std::string_view kAmygdalaAliases[] = {"amygdala", "brain amygdala"};
constexpr std::string_view kAnteriorCingulateAliases[] = {
    "anterior cingulate cortex", "anterior cingulate cortex ba24",
    "brain anterior cingulate cortex ba24", "anterior cingulate"};
constexpr std::string_view kCaudateAliases[] = {"caudate basal ganglia", "caudate",
                                                "brain caudate basal ganglia"};
constexpr std::string_view kCerebellarHemisphereAliases[] = {"cerebellar hemisphere",
                                                             "brain cerebellar hemisphere"};
constexpr std::string_view kCerebellumAliases[] = {"cerebellum", "brain cerebellum"};
constexpr std::string_view kNucleusAccumbensAliases[] = {
    "nucleus accumbens basal ganglia", "nucleus accumbens",
    "brain nucleus accumbens basal ganglia"};
constexpr std::string_view kPutamenAliases[] = {"putamen basal ganglia", "putamen",
                                                "brain putamen basal ganglia"};
constexpr std::string_view kSpinalCordAliases[] = {
    "cervical spinal cord", "spinal cord cervical c 1", "brain spinal cord cervical c 1",
    "spinal cord"};
constexpr std::string_view kCortexAliases[] = {"cortex", "brain cortex"};
constexpr std::string_view kHypothalamusAliases[] = {"hypothalamus", "brain hypothalamus"};
constexpr std::string_view kHippocampusAliases[] = {"hippocampus", "brain hippocampus"};
constexpr std::string_view kSubstantiaNigraAliases[] = {"substantia nigra",
                                                        "brain substantia nigra"};

const std::array<RegionInfo, kBrainRegionCount> kRegions{{
    {BrainRegion::kFrontalCortex, "frontal_cortex", "frontal cortex", kFrontalAliases},
    {BrainRegion::kAmygdala, "amygdala", "amygdala", kAmygdalaAliases},
    {BrainRegion::kAnteriorCingulateCortex, "anterior_cingulate_cortex",
     "anterior cingulate cortex", kAnteriorCingulateAliases},
    {BrainRegion::kCaudateBasalGanglia, "caudate_basal_ganglia", "caudate (basal ganglia)",
     kCaudateAliases},
    {BrainRegion::kCerebellarHemisphere, "cerebellar_hemisphere", "cerebellar hemisphere",
     kCerebellarHemisphereAliases},
    {BrainRegion::kCerebellum, "cerebellum", "cerebellum", kCerebellumAliases},
    {BrainRegion::kNucleusAccumbensBasalGanglia, "nucleus_accumbens_basal_ganglia",
     "nucleus accumbens (basal ganglia)", kNucleusAccumbensAliases},
    {BrainRegion::kPutamenBasalGanglia, "putamen_basal_ganglia", "putamen (basal ganglia)",
     kPutamenAliases},
    {BrainRegion::kCervicalSpinalCord, "cervical_spinal_cord", "cervical spinal cord",
     kSpinalCordAliases},
    {BrainRegion::kCortex, "cortex", "cortex", kCortexAliases},
    {BrainRegion::kHypothalamus, "hypothalamus", "hypothalamus", kHypothalamusAliases},
    {BrainRegion::kHippocampus, "hippocampus", "hippocampus", kHippocampusAliases},
    {BrainRegion::kSubstantiaNigra, "substantia_nigra", "substantia nigra",
     kSubstantiaNigraAliases},
}};

}  // namespace

const std::array<BrainRegion, kBrainRegionCount>& all_regions() {
  static const std::array<BrainRegion, kBrainRegionCount> regions = [] {
    std::array<BrainRegion, kBrainRegionCount> out{};
    for (std::size_t i = 0; i < kBrainRegionCount; ++i) out[i] = kRegions[i].region;
    return out;
  }();
  return regions;
}

const RegionInfo& region_info(BrainRegion region) {
  return kRegions[static_cast<std::size_t>(region)];
}

std::string_view region_id(BrainRegion region) { return region_info(region).id; }
std::string_view region_label(BrainRegion region) { return region_info(region).label; }

std::string normalize_phrase(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(uc)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

std::optional<BrainRegion> parse_region(std::string_view text) {
  const std::string needle = normalize_phrase(text);
  for (const auto& info : kRegions) {
    if (needle == normalize_phrase(info.id) || needle == normalize_phrase(info.label)) {
      return info.region;
    }
    for (auto alias : info.aliases) {
      if (needle == normalize_phrase(alias)) return info.region;
    }
  }
  return std::nullopt;
}

std::string_view qtl_kind_name(QtlKind kind) {
  return kind == QtlKind::kEqtl ? "eQTL" : "sQTL";
}

std::string_view qtl_kind_mechanism(QtlKind kind) {
  return kind == QtlKind::kEqtl ? "expression" : "splicing regulation";
}

std::optional<QtlKind> parse_qtl_kind(std::string_view text) {
  const std::string t = normalize_phrase(text);
  if (t == "eqtl") return QtlKind::kEqtl;
  if (t == "sqtl") return QtlKind::kSqtl;
  return std::nullopt;
}

}  // namespace adgpt
