#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adgpt/corpora/corpus.hpp"
#include "adgpt/router/router.hpp"

// Glue shared by the CLI, the service and the tests.
namespace adgpt {

std::vector<corpora::Corpus> generate_all(const KnowledgeBase& kb, const corpora::TemplateSet& templates,
                                          std::uint64_t seed = 0);

std::vector<router::LabeledQuery> labeled_queries(std::span<const corpora::Corpus> corpora);

struct RouterHoldout {
  router::RouterModel model;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::size_t correct = 0;
  double accuracy = 0;
};

// Splits every corpus (same fraction and seed), trains on the union of the
// training halves and scores the union of the test halves.
RouterHoldout train_with_holdout(std::span<const corpora::Corpus> corpora, double test_fraction,
                                 std::uint64_t seed, double smoothing_alpha = 1.0);

}  // namespace adgpt
