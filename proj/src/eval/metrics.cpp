#include "adgpt/eval/metrics.hpp"

#include "adgpt/error.hpp"

namespace adgpt::eval {

void ConfusionCounts::add(bool pred, bool gold) noexcept {
  if (pred && gold) ++tp;
  else if (pred) ++fp;
  else if (gold) ++fn;
  else ++tn;
}

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) noexcept {
  tp += o.tp;
  fp += o.fp;
  fn += o.fn;
  tn += o.tn;
  return *this;
}

ConfusionCounts confusion(std::span<const bool> preds, std::span<const bool> golds) {
  if (preds.size() != golds.size()) {
    throw Error(ErrorCode::kLengthMismatch, "predictions and gold labels differ in length (" +
                                                std::to_string(preds.size()) + " vs " +
                                                std::to_string(golds.size()) + ")");
  }
  if (preds.empty()) throw Error(ErrorCode::kEmpty, "no predictions to score");
  ConfusionCounts c;
  for (std::size_t i = 0; i < preds.size(); ++i) c.add(preds[i], golds[i]);
  return c;
}

namespace {
double ratio(double num, double den) { return den == 0 ? 0.0 : num / den; }
}  // namespace

Metrics metrics(const ConfusionCounts& c) {
  if (c.total() == 0) throw Error(ErrorCode::kEmpty, "empty confusion table");
  Metrics m;
  m.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  m.f1 = ratio(2 * m.precision * m.recall, m.precision + m.recall);
  return m;
}

}  // namespace adgpt::eval
