#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adgpt/knowledge/records.hpp"

namespace adgpt::router {

inline constexpr int kRouterSchemaVersion = 1;
inline constexpr std::size_t kNumClasses = 4;
inline constexpr std::string_view kOovToken = "<oov>";

// Sparse term counts: unigrams plus bigrams joined with '_'.
using FeatureCounts = std::map<std::string, int, std::less<>>;

// Lowercase, split on non-alphanumerics, emit unigram and bigram counts.
FeatureCounts featurize(std::string_view query);

struct LabeledQuery {
  std::string text;
  TaskLabel label;
};

// Multinomial naive Bayes over FeatureCounts with additive smoothing.
// Vocabulary index 0 is the out-of-vocabulary bucket; the remaining terms are
// sorted so identical training data always yields identical indices.
class RouterModel {
 public:
  struct Classification {
    TaskLabel label;
    std::array<double, kNumClasses> log_posteriors;  // unnormalized: log prior + log likelihood
  };

  // Throws MissingClass if some label has no example.
  static RouterModel train(std::span<const LabeledQuery> examples, double smoothing_alpha = 1.0);

  // Argmax over classes; ties go to the lower task index.
  Classification classify(std::string_view query) const;

  // Batch classification. The OpenMP path and the serial reference return
  // identical results.
  std::vector<TaskLabel> classify_all(std::span<const std::string> queries) const;
  std::vector<TaskLabel> classify_all_serial(std::span<const std::string> queries) const;

  double smoothing_alpha() const noexcept { return alpha_; }
  const std::vector<std::string>& vocabulary() const noexcept { return vocab_; }
  const std::array<double, kNumClasses>& log_priors() const noexcept { return log_priors_; }
  // Row per class, column per vocabulary index.
  const std::array<std::vector<double>, kNumClasses>& log_likelihoods() const noexcept {
    return log_likelihoods_;
  }
  std::size_t index_of(std::string_view term) const;  // 0 for OOV

  std::string snapshot() const;
  static RouterModel from_snapshot(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static RouterModel load(const std::filesystem::path& path);
  std::string hash() const;

  friend bool operator==(const RouterModel&, const RouterModel&) = default;

 private:
  double alpha_ = 1.0;
  std::vector<std::string> vocab_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::array<double, kNumClasses> log_priors_{};
  std::array<std::vector<double>, kNumClasses> log_likelihoods_;
};

}  // namespace adgpt::router
