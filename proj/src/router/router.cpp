#include "adgpt/router/router.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "adgpt/error.hpp"
#include "adgpt/hashing.hpp"

namespace adgpt::router {
namespace {

using json = nlohmann::json;

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc)) {
      cur.push_back(static_cast<char>(std::tolower(uc)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

}  // namespace

FeatureCounts featurize(std::string_view query) {
  FeatureCounts counts;
  const auto tokens = tokenize(query);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    ++counts[tokens[i]];
    if (i + 1 < tokens.size()) ++counts[tokens[i] + "_" + tokens[i + 1]];
  }
  return counts;
}

RouterModel RouterModel::train(std::span<const LabeledQuery> examples, double smoothing_alpha) {
  if (!(smoothing_alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "smoothing alpha must be positive");
  }
  std::vector<FeatureCounts> features;
  features.reserve(examples.size());
  std::set<std::string> terms;
  std::array<std::size_t, kNumClasses> docs{};
  for (const auto& ex : examples) {
    features.push_back(featurize(ex.text));
    for (const auto& [term, n] : features.back()) terms.insert(term);
    ++docs[static_cast<std::size_t>(ex.label)];
  }
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (docs[c] == 0) {
      throw Error(ErrorCode::kMissingClass,
                  "no training example for " + std::string(task_name(static_cast<TaskLabel>(c))));
    }
  }

  RouterModel m;
  m.alpha_ = smoothing_alpha;
  m.vocab_.reserve(terms.size() + 1);
  m.vocab_.emplace_back(kOovToken);
  m.vocab_.insert(m.vocab_.end(), terms.begin(), terms.end());
  for (std::size_t i = 0; i < m.vocab_.size(); ++i) m.index_.emplace(m.vocab_[i], i);

  const std::size_t v = m.vocab_.size();
  std::array<std::vector<double>, kNumClasses> counts;
  std::array<double, kNumClasses> totals{};
  for (auto& row : counts) row.assign(v, 0.0);
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto c = static_cast<std::size_t>(examples[i].label);
    for (const auto& [term, n] : features[i]) {
      counts[c][m.index_.find(term)->second] += n;
      totals[c] += n;
    }
  }

  const double n_docs = static_cast<double>(examples.size());
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    m.log_priors_[c] = std::log(static_cast<double>(docs[c]) / n_docs);
    const double denom = totals[c] + smoothing_alpha * static_cast<double>(v);
    auto& row = m.log_likelihoods_[c];
    row.resize(v);
    for (std::size_t j = 0; j < v; ++j) row[j] = std::log((counts[c][j] + smoothing_alpha) / denom);
  }
  return m;
}

std::size_t RouterModel::index_of(std::string_view term) const {
  auto it = index_.find(term);
  return it == index_.end() ? 0 : it->second;
}

RouterModel::Classification RouterModel::classify(std::string_view query) const {
  Classification out{TaskLabel::kTask1, log_priors_};
  for (const auto& [term, n] : featurize(query)) {
    const auto j = index_of(term);
    for (std::size_t c = 0; c < kNumClasses; ++c) out.log_posteriors[c] += n * log_likelihoods_[c][j];
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < kNumClasses; ++c) {
    if (out.log_posteriors[c] > out.log_posteriors[best]) best = c;
  }
  out.label = static_cast<TaskLabel>(best);
  return out;
}

std::vector<TaskLabel> RouterModel::classify_all_serial(std::span<const std::string> queries) const {
  std::vector<TaskLabel> out(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) out[i] = classify(queries[i]).label;
  return out;
}

std::vector<TaskLabel> RouterModel::classify_all(std::span<const std::string> queries) const {
  std::vector<TaskLabel> out(queries.size());
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = classify(queries[i]).label;
  return out;
}

std::string RouterModel::snapshot() const {
  json root;
  root["router_schema_version"] = kRouterSchemaVersion;
  root["model"] = "multinomial_naive_bayes";
  root["smoothing_alpha"] = alpha_;
  root["vocabulary"] = vocab_;
  root["log_priors"] = log_priors_;
  json rows = json::array();
  for (const auto& row : log_likelihoods_) rows.push_back(row);
  root["log_likelihoods"] = std::move(rows);
  return root.dump();
}

RouterModel RouterModel::from_snapshot(std::string_view text) {
  const json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded() || !root.is_object()) {
    throw Error(ErrorCode::kSnapshotFormat, "router snapshot: not a JSON object");
  }
  const auto version = root.value("router_schema_version", -1);
  if (version != kRouterSchemaVersion) {
    throw Error(ErrorCode::kSnapshotVersion, "router snapshot: schema version " +
                                                 std::to_string(version) + " != expected " +
                                                 std::to_string(kRouterSchemaVersion));
  }
  RouterModel m;
  try {
    m.alpha_ = root.at("smoothing_alpha").get<double>();
    m.vocab_ = root.at("vocabulary").get<std::vector<std::string>>();
    m.log_priors_ = root.at("log_priors").get<std::array<double, kNumClasses>>();
    const auto& rows = root.at("log_likelihoods");
    if (!rows.is_array() || rows.size() != kNumClasses) {
      throw Error(ErrorCode::kSnapshotFormat, "router snapshot: expected 4 likelihood rows");
    }
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      m.log_likelihoods_[c] = rows[c].get<std::vector<double>>();
      if (m.log_likelihoods_[c].size() != m.vocab_.size()) {
        throw Error(ErrorCode::kSnapshotFormat, "router snapshot: row width != vocabulary size");
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSnapshotFormat, std::string("router snapshot: ") + e.what());
  }
  if (m.vocab_.empty() || m.vocab_.front() != kOovToken) {
    throw Error(ErrorCode::kSnapshotFormat, "router snapshot: vocabulary must start with <oov>");
  }
  for (std::size_t i = 0; i < m.vocab_.size(); ++i) {
    if (!m.index_.emplace(m.vocab_[i], i).second) {
      throw Error(ErrorCode::kSnapshotFormat, "router snapshot: duplicate term " + m.vocab_[i]);
    }
  }
  return m;
}

void RouterModel::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << snapshot();
}

RouterModel RouterModel::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_snapshot(buf.str());
}

std::string RouterModel::hash() const { return sha256_hex(snapshot()); }

}  // namespace adgpt::router
