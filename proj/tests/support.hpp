#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "adgpt/corpora/corpus.hpp"
#include "adgpt/error.hpp"
#include "adgpt/ingest/manifest.hpp"
#include "adgpt/knowledge/assemble.hpp"
#include "adgpt/knowledge/knowledge_base.hpp"
#include "adgpt/pipeline.hpp"
#include "adgpt/router/router.hpp"

namespace testing {

inline std::filesystem::path fixture_dir() { return ADGPT_FIXTURE_DIR; }

inline const adgpt::ingest::IngestedData& fixture_data() {
  static const auto data =
      adgpt::ingest::ingest_all(adgpt::ingest::load_manifest(fixture_dir() / "manifest.toml"));
  return data;
}

inline const adgpt::KnowledgeBase& fixture_kb() {
  static const auto kb = adgpt::assemble_knowledge_base(fixture_data());
  return kb;
}

inline const std::vector<adgpt::corpora::Corpus>& fixture_corpora() {
  static const auto all = adgpt::generate_all(fixture_kb(), adgpt::corpora::TemplateSet::defaults());
  return all;
}

// Router trained on every default-template instruction of the fixture.
inline const adgpt::router::RouterModel& fixture_router() {
  static const auto model = adgpt::router::RouterModel::train(adgpt::labeled_queries(fixture_corpora()));
  return model;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("adgpt-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::filesystem::path operator/(const std::string& name) const { return path / name; }
};

// Rebuilds the fixture KB with one gene's start coordinate replaced.
inline adgpt::KnowledgeBase with_start(const adgpt::KnowledgeBase& kb, const std::string& gene,
                                       std::int64_t start) {
  auto annotations = kb.annotations();
  for (auto& a : annotations) {
    if (a.symbol == gene) a.start = start;
  }
  return adgpt::KnowledgeBase::build(annotations, kb.all_qtl_records(), kb.molecular_genetics(), kb.seed(),
                                     kb.significance_alpha());
}

template <class F>
adgpt::ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const adgpt::Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected an adgpt::Error");
}

}  // namespace testing
