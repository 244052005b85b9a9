#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "adgpt/knowledge/records.hpp"

namespace adgpt::ingest {

struct QtlFileEntry {
  std::filesystem::path file;  // relative paths resolve against the manifest directory
  BrainRegion region;
  QtlKind kind;
  std::string source;  // citation label for answers grounded on this table
};

/**
 * Dataset manifest, a small TOML file:
 *
 *   seed_genes = "seed_genes.txt"
 *   significance_alpha = 0.05            # optional
 *
 *   [annotations]
 *   file = "gene_annotations.tsv"
 *   source = "GTEx gene annotation"      # optional
 *
 *   [molecular_genetics]                 # optional table
 *   file = "molecular_genetics.jsonl"
 *
 *   [qtl]
 *   "qtl/hippocampus.sQTL.tsv" = { region = "hippocampus", kind = "sQTL" }
 */
struct Manifest {
  std::filesystem::path base_dir;
  std::filesystem::path seed_genes;
  std::filesystem::path annotations;
  std::string annotations_source;
  std::optional<std::filesystem::path> molecular_genetics;
  std::vector<QtlFileEntry> qtl_files;
  double significance_alpha = 0.05;
};

Manifest load_manifest(const std::filesystem::path& path);

struct IngestedData {
  SeedGeneList seed;
  std::vector<GeneAnnotation> annotations;
  std::vector<QtlRecord> qtls;
  std::vector<MolecularGeneticsRecord> molecular_genetics;
  std::string annotations_source;
  std::vector<QtlFileEntry> qtl_files;
  std::vector<std::size_t> qtl_rows_per_file;  // parallel to qtl_files
  double significance_alpha = 0.05;
};

// Parses every file named by the manifest. Errors keep their code; the message
// is prefixed with the offending file name.
IngestedData ingest_all(const Manifest& manifest);

}  // namespace adgpt::ingest
