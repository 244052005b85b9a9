#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "adgpt/knowledge/records.hpp"

namespace adgpt::ingest {

// A QTL row as it appears on disk, before region/kind labels are resolved.
struct RawQtlRow {
  std::string gene_symbol;
  std::string variant_id;
  double q_value = 1.0;
  std::string region_label;
  std::string qtl_kind_label;
};

bool is_valid_symbol(std::string_view symbol);

// Newline-delimited symbols; `#` lines and blank lines are skipped, duplicates
// dropped keeping first occurrence.
SeedGeneList parse_seed_genes(std::istream& in);

// TSV with header `gene_symbol chromosome start end strand` (any column order).
// A leading "chr" on the chromosome is accepted and stripped.
std::vector<GeneAnnotation> parse_gene_annotations(std::istream& in);

// TSV with header `gene_symbol variant_id q_value`. Region and kind come from
// the manifest, one file per (region, kind).
std::vector<RawQtlRow> parse_raw_qtl_rows(std::istream& in, std::string_view region_label,
                                          std::string_view qtl_kind_label);
QtlRecord resolve_qtl_row(const RawQtlRow& row);
std::vector<QtlRecord> parse_qtl_table(std::istream& in, QtlKind kind, BrainRegion region);

// JSONL, one object per line: gene_symbol, summary_text, curated_reasoning,
// ad_related, citations (optional).
std::vector<MolecularGeneticsRecord> parse_molecular_genetics(std::istream& in);

void write_seed_genes(std::ostream& out, const SeedGeneList& seed);
void write_gene_annotations(std::ostream& out, const std::vector<GeneAnnotation>& rows);
void write_qtl_table(std::ostream& out, const std::vector<QtlRecord>& rows);
void write_molecular_genetics(std::ostream& out,
                              const std::vector<MolecularGeneticsRecord>& records);

}  // namespace adgpt::ingest
