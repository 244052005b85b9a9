#pragma once

#include <cstddef>
#include <span>

namespace adgpt::eval {

struct ConfusionCounts {
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::size_t total() const noexcept { return tp + fp + fn + tn; }
  void add(bool pred, bool gold) noexcept;
  ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept;
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

struct Metrics {
  double accuracy = 0, precision = 0, recall = 0, f1 = 0;
  friend bool operator==(const Metrics&, const Metrics&) = default;
};

// Throws LengthMismatch or Empty.
ConfusionCounts confusion(std::span<const bool> preds, std::span<const bool> golds);

// precision, recall and f1 are 0 when their denominators are 0. Throws Empty
// for an all-zero table.
Metrics metrics(const ConfusionCounts& c);

}  // namespace adgpt::eval
