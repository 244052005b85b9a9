#include "adgpt/knowledge/knowledge_base.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "adgpt/error.hpp"
#include "adgpt/hashing.hpp"

namespace adgpt {
namespace {

using json = nlohmann::json;

[[noreturn]] void unknown_gene(std::string_view gene) {
  throw Error(ErrorCode::kUnknownGene, "unknown gene '" + std::string(gene) + "'");
}

std::string default_qtl_source(BrainRegion region, QtlKind kind) {
  return std::string(qtl_kind_name(kind)) + " significance table: " +
         std::string(region_label(region));
}

template <typename T>
T get_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::kSnapshotFormat, std::string("snapshot: missing field '") + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kSnapshotFormat, std::string("snapshot: bad field '") + key + "'");
  }
}

}  // namespace

KnowledgeBase KnowledgeBase::build(std::vector<GeneAnnotation> annotations,
                                   std::vector<QtlRecord> qtls,
                                   std::vector<MolecularGeneticsRecord> omim_records,
                                   SeedGeneList seed, double significance_alpha,
                                   Provenance provenance) {
  if (!(significance_alpha > 0.0 && significance_alpha < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "significance alpha must lie in (0,1)");
  }
  KnowledgeBase kb;
  kb.alpha_ = significance_alpha;
  kb.seed_ = std::move(seed);
  kb.provenance_ = std::move(provenance);

  // Canonical order, so the snapshot does not depend on input order.
  kb.annotations_ = std::move(annotations);
  std::stable_sort(kb.annotations_.begin(), kb.annotations_.end(),
                   [](const auto& a, const auto& b) { return a.symbol < b.symbol; });
  for (std::size_t i = 0; i < kb.annotations_.size(); ++i) {
    const auto& a = kb.annotations_[i];
    if (!kb.annotation_index_.emplace(a.symbol, i).second) {
      throw Error(ErrorCode::kDuplicateAnnotation, "duplicate annotation for gene " + a.symbol);
    }
  }

  for (auto& r : qtls) {
    if (!kb.annotation_index_.contains(r.gene)) {
      throw Error(ErrorCode::kUnknownGeneInQtl, "QTL record references unknown gene " + r.gene);
    }
    if (!std::isfinite(r.q_value) || r.q_value < 0.0 || r.q_value > 1.0) {
      throw Error(ErrorCode::kQValueRange, "q_value outside [0,1] for gene " + r.gene);
    }
    QtlKey key{r.gene, r.region, r.kind};
    auto& bucket = kb.qtl_index_[key];
    for (const auto& existing : bucket) {
      if (existing.variant_id == r.variant_id) {
        throw Error(ErrorCode::kDuplicateQtlRecord,
                    "duplicate QTL record " + r.gene + "/" + r.variant_id + " in " +
                        std::string(region_id(r.region)) + " " + std::string(qtl_kind_name(r.kind)));
      }
    }
    bucket.push_back(std::move(r));
    ++kb.qtl_total_;
  }
  for (auto& [key, bucket] : kb.qtl_index_) {
    std::sort(bucket.begin(), bucket.end(),
              [](const auto& a, const auto& b) { return a.variant_id < b.variant_id; });
  }

  kb.omim_ = std::move(omim_records);
  std::stable_sort(kb.omim_.begin(), kb.omim_.end(),
                   [](const auto& a, const auto& b) { return a.gene < b.gene; });
  for (std::size_t i = 0; i < kb.omim_.size(); ++i) {
    const auto& m = kb.omim_[i];
    if (!kb.annotation_index_.contains(m.gene)) {
      throw Error(ErrorCode::kUnknownGeneInOmim,
                  "molecular genetics record references unknown gene " + m.gene);
    }
    if (m.ad_related && m.curated_reasoning.find_first_not_of(" \t") == std::string::npos) {
      throw Error(ErrorCode::kMissingReasoning, "gene " + m.gene + " lacks curated reasoning");
    }
    if (!kb.omim_index_.emplace(m.gene, i).second) {
      throw Error(ErrorCode::kDuplicateGene, "duplicate molecular genetics record for " + m.gene);
    }
  }
  return kb;
}

bool KnowledgeBase::has_gene(std::string_view gene) const {
  return annotation_index_.contains(std::string(gene));
}

const GeneAnnotation& KnowledgeBase::annotation(std::string_view gene) const {
  auto it = annotation_index_.find(std::string(gene));
  if (it == annotation_index_.end()) unknown_gene(gene);
  return annotations_[it->second];
}

const MolecularGeneticsRecord* KnowledgeBase::omim(std::string_view gene) const {
  auto it = omim_index_.find(std::string(gene));
  return it == omim_index_.end() ? nullptr : &omim_[it->second];
}

std::span<const QtlRecord> KnowledgeBase::qtl_records(std::string_view gene, BrainRegion region,
                                                      QtlKind kind) const {
  auto it = qtl_index_.find(std::make_tuple(gene, region, kind));
  if (it == qtl_index_.end()) return {};
  return it->second;
}

std::size_t KnowledgeBase::significant_count(std::string_view gene, BrainRegion region,
                                             QtlKind kind) const {
  std::size_t n = 0;
  for (const auto& r : qtl_records(gene, region, kind)) {
    if (r.q_value <= alpha_) ++n;
  }
  return n;
}

bool KnowledgeBase::significant_association(std::string_view gene, BrainRegion region,
                                            QtlKind kind) const {
  if (!has_gene(gene)) unknown_gene(gene);
  for (const auto& r : qtl_records(gene, region, kind)) {
    if (r.q_value <= alpha_) return true;
  }
  return false;
}

std::string KnowledgeBase::gene_attribute(std::string_view gene, GeneAttribute attribute) const {
  const auto& a = annotation(gene);
  switch (attribute) {
    case GeneAttribute::kChromosome: return a.chromosome;
    case GeneAttribute::kStart: return std::to_string(a.start);
    case GeneAttribute::kEnd: return std::to_string(a.end);
    case GeneAttribute::kStrand: return std::string(strand_symbol(a.strand));
    case GeneAttribute::kLocationSummary:
      return "chr" + a.chromosome + ":" + std::to_string(a.start) + "-" + std::to_string(a.end) +
             " (" + std::string(strand_symbol(a.strand)) + ")";
  }
  return {};
}

std::set<BrainRegion> KnowledgeBase::regions_for_gene(std::string_view gene, QtlKind kind) const {
  if (!has_gene(gene)) unknown_gene(gene);
  std::set<BrainRegion> out;
  for (auto region : all_regions()) {
    if (significant_association(gene, region, kind)) out.insert(region);
  }
  return out;
}

std::string KnowledgeBase::qtl_source(BrainRegion region, QtlKind kind) const {
  auto it = provenance_.qtl_sources.find({region, kind});
  return it == provenance_.qtl_sources.end() ? default_qtl_source(region, kind) : it->second;
}

std::set<std::string> KnowledgeBase::all_citations() const {
  std::set<std::string> out{provenance_.annotation_source};
  for (auto region : all_regions()) {
    for (auto kind : kAllQtlKinds) out.insert(qtl_source(region, kind));
  }
  for (const auto& m : omim_) out.insert(m.citations.begin(), m.citations.end());
  return out;
}

KnowledgeBase KnowledgeBase::with_alpha(double significance_alpha) const {
  return build(annotations_, all_qtl_records(), omim_, seed_, significance_alpha, provenance_);
}

std::vector<QtlRecord> KnowledgeBase::all_qtl_records() const {
  std::vector<QtlRecord> out;
  out.reserve(qtl_total_);
  for (const auto& [key, bucket] : qtl_index_) out.insert(out.end(), bucket.begin(), bucket.end());
  return out;
}

std::string KnowledgeBase::snapshot() const {
  json root;
  root["kb_schema_version"] = kKbSchemaVersion;
  root["significance_alpha"] = alpha_;
  root["seed"] = seed_.symbols;

  json ann = json::array();
  for (const auto& a : annotations_) {
    ann.push_back({{"symbol", a.symbol},
                   {"chromosome", a.chromosome},
                   {"start", a.start},
                   {"end", a.end},
                   {"strand", strand_symbol(a.strand)}});
  }
  root["annotations"] = std::move(ann);

  json qtl = json::array();
  for (const auto& [key, bucket] : qtl_index_) {
    for (const auto& r : bucket) {
      qtl.push_back({{"gene", r.gene},
                     {"variant_id", r.variant_id},
                     {"region", region_id(r.region)},
                     {"kind", qtl_kind_name(r.kind)},
                     {"q_value", r.q_value}});
    }
  }
  root["qtl"] = std::move(qtl);

  json omim = json::array();
  for (const auto& m : omim_) {
    omim.push_back({{"gene", m.gene},
                    {"summary_text", m.summary_text},
                    {"curated_reasoning", m.curated_reasoning},
                    {"ad_related", m.ad_related},
                    {"citations", m.citations}});
  }
  root["molecular_genetics"] = std::move(omim);

  json sources = json::array();
  for (const auto& [key, label] : provenance_.qtl_sources) {
    sources.push_back(
        {{"region", region_id(key.first)}, {"kind", qtl_kind_name(key.second)}, {"source", label}});
  }
  root["provenance"] = {{"annotation_source", provenance_.annotation_source},
                        {"qtl_sources", std::move(sources)}};
  return root.dump();
}

KnowledgeBase KnowledgeBase::from_snapshot(std::string_view text) {
  const json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded() || !root.is_object()) {
    throw Error(ErrorCode::kSnapshotFormat, "snapshot: not a JSON object");
  }
  const int version = get_field<int>(root, "kb_schema_version");
  if (version != kKbSchemaVersion) {
    throw Error(ErrorCode::kSnapshotVersion,
                "snapshot: kb_schema_version " + std::to_string(version) + " != expected " +
                    std::to_string(kKbSchemaVersion));
  }

  auto region_of = [](const std::string& id) {
    auto r = parse_region(id);
    if (!r) throw Error(ErrorCode::kSnapshotFormat, "snapshot: unknown region '" + id + "'");
    return *r;
  };
  auto kind_of = [](const std::string& name) {
    auto k = parse_qtl_kind(name);
    if (!k) throw Error(ErrorCode::kSnapshotFormat, "snapshot: unknown kind '" + name + "'");
    return *k;
  };

  std::vector<GeneAnnotation> annotations;
  for (const auto& a : get_field<json>(root, "annotations")) {
    const auto strand = get_field<std::string>(a, "strand");
    annotations.push_back(GeneAnnotation{get_field<std::string>(a, "symbol"),
                                         get_field<std::string>(a, "chromosome"),
                                         get_field<std::int64_t>(a, "start"),
                                         get_field<std::int64_t>(a, "end"),
                                         strand == "+" ? Strand::kPlus : Strand::kMinus});
  }
  std::vector<QtlRecord> qtls;
  for (const auto& r : get_field<json>(root, "qtl")) {
    qtls.push_back(QtlRecord{get_field<std::string>(r, "gene"),
                             get_field<std::string>(r, "variant_id"),
                             region_of(get_field<std::string>(r, "region")),
                             kind_of(get_field<std::string>(r, "kind")),
                             get_field<double>(r, "q_value")});
  }
  std::vector<MolecularGeneticsRecord> omim;
  for (const auto& m : get_field<json>(root, "molecular_genetics")) {
    omim.push_back(MolecularGeneticsRecord{get_field<std::string>(m, "gene"),
                                           get_field<std::string>(m, "summary_text"),
                                           get_field<std::string>(m, "curated_reasoning"),
                                           get_field<bool>(m, "ad_related"),
                                           get_field<std::vector<std::string>>(m, "citations")});
  }
  Provenance provenance;
  const auto prov = get_field<json>(root, "provenance");
  provenance.annotation_source = get_field<std::string>(prov, "annotation_source");
  for (const auto& s : get_field<json>(prov, "qtl_sources")) {
    provenance.qtl_sources[{region_of(get_field<std::string>(s, "region")),
                            kind_of(get_field<std::string>(s, "kind"))}] =
        get_field<std::string>(s, "source");
  }
  return build(std::move(annotations), std::move(qtls), std::move(omim),
               SeedGeneList{get_field<std::vector<std::string>>(root, "seed")},
               get_field<double>(root, "significance_alpha"), std::move(provenance));
}

void KnowledgeBase::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << snapshot();
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

KnowledgeBase KnowledgeBase::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_snapshot(buf.str());
}

std::string KnowledgeBase::hash() const { return sha256_hex(snapshot()); }

}  // namespace adgpt
