#include "adgpt/ingest/manifest.hpp"

#include <algorithm>
#include <fstream>

#include <toml.hpp>

#include "adgpt/error.hpp"
#include "adgpt/ingest/parsers.hpp"

namespace adgpt::ingest {
namespace fs = std::filesystem;

namespace {

std::string require_string(const toml::table& tbl, std::string_view key, std::string_view where) {
  auto v = tbl[key].value<std::string>();
  if (!v) {
    throw Error(ErrorCode::kManifestError,
                "manifest: missing string '" + std::string(key) + "' in " + std::string(where));
  }
  return *v;
}

fs::path resolve(const fs::path& base, const fs::path& p) {
  return p.is_absolute() ? p : base / p;
}

template <typename Fn>
auto with_file(const fs::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  try {
    return fn(in);
  } catch (const Error& e) {
    throw Error(e.code(), path.filename().string() + ": " + e.what());
  }
}

}  // namespace

Manifest load_manifest(const fs::path& path) {
  toml::table root;
  try {
    root = toml::parse_file(path.string());
  } catch (const toml::parse_error& e) {
    throw Error(ErrorCode::kManifestError,
                "manifest " + path.string() + ": " + std::string(e.description()));
  }

  Manifest m;
  m.base_dir = path.parent_path();
  m.seed_genes = require_string(root, "seed_genes", "top level");
  m.significance_alpha = root["significance_alpha"].value_or(0.05);
  if (!(m.significance_alpha > 0.0 && m.significance_alpha < 1.0)) {
    throw Error(ErrorCode::kManifestError, "manifest: significance_alpha must lie in (0,1)");
  }

  const auto* ann = root["annotations"].as_table();
  if (!ann) throw Error(ErrorCode::kManifestError, "manifest: missing [annotations] table");
  m.annotations = require_string(*ann, "file", "[annotations]");
  m.annotations_source = (*ann)["source"].value_or(std::string("gene annotation table ") +
                                                   m.annotations.filename().string());

  if (const auto* mg = root["molecular_genetics"].as_table()) {
    m.molecular_genetics = fs::path(require_string(*mg, "file", "[molecular_genetics]"));
  }

  if (const auto* qtl = root["qtl"].as_table()) {
    for (const auto& [key, node] : *qtl) {
      const auto* entry = node.as_table();
      const std::string file(key.str());
      if (!entry) throw Error(ErrorCode::kManifestError, "manifest: [qtl] entry '" + file + "' is not a table");
      const auto region_text = require_string(*entry, "region", file);
      const auto kind_text = require_string(*entry, "kind", file);
      const auto region = parse_region(region_text);
      if (!region) {
        throw Error(ErrorCode::kUnknownRegion, "manifest: unknown brain region '" + region_text + "'");
      }
      const auto kind = parse_qtl_kind(kind_text);
      if (!kind) throw Error(ErrorCode::kManifestError, "manifest: unknown QTL kind '" + kind_text + "'");
      std::string source = (*entry)["source"].value_or(
          "GTEx " + std::string(qtl_kind_name(*kind)) + " " + std::string(region_label(*region)) +
          " (" + file + ")");
      m.qtl_files.push_back(QtlFileEntry{file, *region, *kind, std::move(source)});
    }
  }
  std::sort(m.qtl_files.begin(), m.qtl_files.end(),
            [](const auto& a, const auto& b) { return a.file < b.file; });
  return m;
}

IngestedData ingest_all(const Manifest& manifest) {
  IngestedData data;
  data.significance_alpha = manifest.significance_alpha;
  data.annotations_source = manifest.annotations_source;
  data.qtl_files = manifest.qtl_files;

  data.seed = with_file(resolve(manifest.base_dir, manifest.seed_genes),
                        [](std::istream& in) { return parse_seed_genes(in); });
  data.annotations = with_file(resolve(manifest.base_dir, manifest.annotations),
                               [](std::istream& in) { return parse_gene_annotations(in); });
  if (manifest.molecular_genetics) {
    data.molecular_genetics =
        with_file(resolve(manifest.base_dir, *manifest.molecular_genetics),
                  [](std::istream& in) { return parse_molecular_genetics(in); });
  }
  for (const auto& entry : manifest.qtl_files) {
    auto rows = with_file(resolve(manifest.base_dir, entry.file), [&](std::istream& in) {
      return parse_qtl_table(in, entry.kind, entry.region);
    });
    data.qtl_rows_per_file.push_back(rows.size());
    data.qtls.insert(data.qtls.end(), std::make_move_iterator(rows.begin()),
                     std::make_move_iterator(rows.end()));
  }
  return data;
}

}  // namespace adgpt::ingest
