#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace adgpt::eval {

struct LoraMatrix {
  std::string name;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::uint64_t count = 1;  // how many copies, e.g. one per layer
};

struct LoraLayerSpec {
  std::vector<LoraMatrix> matrices;
  std::uint64_t rank = 0;
  std::uint64_t base_param_total = 0;
};

struct LoraCount {
  std::uint64_t added_params = 0;
  double fraction_of_base = 0;
};

// added = sum of count * r * (rows + cols). Throws InvalidArgument for a zero
// dimension, rank, count or base total.
LoraCount lora_param_count(const LoraLayerSpec& spec);

// Concatenates matrix lists; rank and base must agree (InvalidArgument).
LoraLayerSpec concat(const LoraLayerSpec& a, const LoraLayerSpec& b);

inline constexpr std::uint64_t kReportedLoraParams = 134'000'000;
inline constexpr std::uint64_t kNominalBaseParams = 8'000'000'000;
inline constexpr double kReportedLoraPercent = 1.675;

// 32-layer, 8B-class decoder (hidden 4096, 8 KV heads of 128, MLP 14336)
// with every attention and feed-forward projection adapted at r = 64.
LoraLayerSpec llama_8b_full_spec(std::uint64_t rank = 64);

struct SubsetMatch {
  std::vector<std::string> modules;
  std::uint64_t added_params = 0;
  std::int64_t delta = 0;  // added - target
};

// Exhaustive search over the non-empty subsets of the spec's matrix types,
// ordered by |delta| then by subset size then by module names.
std::vector<SubsetMatch> search_module_subsets(const LoraLayerSpec& spec, std::uint64_t target);

// Accounting block for the evaluation report.
nlohmann::json lora_report();

}  // namespace adgpt::eval
