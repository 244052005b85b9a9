#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "adgpt/knowledge/records.hpp"

namespace adgpt {

inline constexpr int kKbSchemaVersion = 1;
inline constexpr double kDefaultSignificanceAlpha = 0.05;

// Citation labels for the tabular sources. Answers may only cite strings the
// knowledge base knows about.
struct Provenance {
  std::string annotation_source = "gene annotation table";
  // Keyed by (region, kind). Missing entries fall back to a generated label.
  std::map<std::pair<BrainRegion, QtlKind>, std::string> qtl_sources;
};

// Immutable, indexed view over the ingested records.
class KnowledgeBase {
 public:
  // Validates cross references and builds the indices.
  // Throws Error{DuplicateAnnotation, UnknownGeneInQtl, UnknownGeneInOmim, DuplicateQtlRecord}.
  static KnowledgeBase build(std::vector<GeneAnnotation> annotations, std::vector<QtlRecord> qtls,
                             std::vector<MolecularGeneticsRecord> omim_records, SeedGeneList seed,
                             double significance_alpha = kDefaultSignificanceAlpha,
                             Provenance provenance = {});

  double significance_alpha() const noexcept { return alpha_; }
  const SeedGeneList& seed() const noexcept { return seed_; }
  const std::vector<GeneAnnotation>& annotations() const noexcept { return annotations_; }
  const std::vector<MolecularGeneticsRecord>& molecular_genetics() const noexcept { return omim_; }
  std::size_t qtl_count() const noexcept { return qtl_total_; }

  bool has_gene(std::string_view gene) const;
  const GeneAnnotation& annotation(std::string_view gene) const;  // throws UnknownGene
  const MolecularGeneticsRecord* omim(std::string_view gene) const;  // nullptr if absent

  // All records for one (gene, region, kind); empty when there are none.
  std::span<const QtlRecord> qtl_records(std::string_view gene, BrainRegion region,
                                         QtlKind kind) const;
  std::size_t significant_count(std::string_view gene, BrainRegion region, QtlKind kind) const;

  // True iff at least one record has q <= alpha. Throws UnknownGene.
  bool significant_association(std::string_view gene, BrainRegion region, QtlKind kind) const;

  // Rendered attribute value; location_summary is "chr{c}:{start}-{end} ({strand})".
  std::string gene_attribute(std::string_view gene, GeneAttribute attribute) const;

  std::set<BrainRegion> regions_for_gene(std::string_view gene, QtlKind kind) const;

  const std::string& annotation_source() const noexcept { return provenance_.annotation_source; }
  std::string qtl_source(BrainRegion region, QtlKind kind) const;

  // Every citation string an answer may legitimately carry.
  std::set<std::string> all_citations() const;

  // Same records and provenance under a different threshold.
  KnowledgeBase with_alpha(double significance_alpha) const;

  // Deterministic JSON snapshot (sorted keys, records in index order).
  std::string snapshot() const;
  static KnowledgeBase from_snapshot(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static KnowledgeBase load(const std::filesystem::path& path);

  // SHA-256 of snapshot().
  std::string hash() const;

  // Flattened copy of every QTL record, in index order.
  std::vector<QtlRecord> all_qtl_records() const;

 private:
  using QtlKey = std::tuple<std::string, BrainRegion, QtlKind>;

  KnowledgeBase() = default;

  double alpha_ = kDefaultSignificanceAlpha;
  SeedGeneList seed_;
  std::vector<GeneAnnotation> annotations_;
  std::unordered_map<std::string, std::size_t> annotation_index_;
  std::vector<MolecularGeneticsRecord> omim_;
  std::unordered_map<std::string, std::size_t> omim_index_;
  std::map<QtlKey, std::vector<QtlRecord>, std::less<>> qtl_index_;
  std::size_t qtl_total_ = 0;
  Provenance provenance_;
};

}  // namespace adgpt
