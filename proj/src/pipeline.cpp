#include "adgpt/pipeline.hpp"

namespace adgpt {

std::vector<corpora::Corpus> generate_all(const KnowledgeBase& kb, const corpora::TemplateSet& templates,
                                          std::uint64_t seed) {
  std::vector<corpora::Corpus> out;
  for (auto t : kAllTasks) out.push_back(corpora::generate(kb, templates, t, seed));
  return out;
}

std::vector<router::LabeledQuery> labeled_queries(std::span<const corpora::Corpus> corpora) {
  std::vector<router::LabeledQuery> out;
  for (const auto& c : corpora) {
    for (const auto& ex : c.examples) out.push_back({ex.instruction, ex.task});
  }
  return out;
}

RouterHoldout train_with_holdout(std::span<const corpora::Corpus> corpora, double test_fraction,
                                 std::uint64_t seed, double smoothing_alpha) {
  std::vector<corpora::Corpus> train, test;
  for (const auto& c : corpora) {
    auto [tr, te] = corpora::split_corpus(c, test_fraction, seed);
    train.push_back(std::move(tr));
    test.push_back(std::move(te));
  }
  const auto train_q = labeled_queries(train);
  const auto test_q = labeled_queries(test);
  RouterHoldout r{router::RouterModel::train(train_q, smoothing_alpha), train_q.size(), test_q.size(), 0, 0};
  std::vector<std::string> texts;
  for (const auto& q : test_q) texts.push_back(q.text);
  const auto labels = r.model.classify_all(texts);
  for (std::size_t i = 0; i < labels.size(); ++i) r.correct += labels[i] == test_q[i].label;
  r.accuracy = test_q.empty() ? 0.0 : static_cast<double>(r.correct) / static_cast<double>(test_q.size());
  return r;
}

}  // namespace adgpt
