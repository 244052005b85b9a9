#include "adgpt/eval/lora.hpp"

#include <algorithm>
#include <cstdlib>

#include "adgpt/error.hpp"

namespace adgpt::eval {

LoraCount lora_param_count(const LoraLayerSpec& spec) {
  if (spec.rank == 0) throw Error(ErrorCode::kInvalidArgument, "LoRA rank must be positive");
  if (spec.base_param_total == 0) throw Error(ErrorCode::kInvalidArgument, "base parameter total must be positive");
  LoraCount c;
  for (const auto& m : spec.matrices) {
    if (m.rows == 0 || m.cols == 0 || m.count == 0) {
      throw Error(ErrorCode::kInvalidArgument, "LoRA matrix '" + m.name + "' has a zero dimension");
    }
    c.added_params += m.count * spec.rank * (m.rows + m.cols);
  }
  c.fraction_of_base = static_cast<double>(c.added_params) / static_cast<double>(spec.base_param_total);
  return c;
}

LoraLayerSpec concat(const LoraLayerSpec& a, const LoraLayerSpec& b) {
  if (a.rank != b.rank || a.base_param_total != b.base_param_total) {
    throw Error(ErrorCode::kInvalidArgument, "cannot concatenate LoRA specs with different rank or base");
  }
  LoraLayerSpec out = a;
  out.matrices.insert(out.matrices.end(), b.matrices.begin(), b.matrices.end());
  return out;
}

LoraLayerSpec llama_8b_full_spec(std::uint64_t rank) {
  constexpr std::uint64_t hidden = 4096, kv = 1024, mlp = 14336, layers = 32;
  return LoraLayerSpec{{{"q_proj", hidden, hidden, layers},
                        {"k_proj", hidden, kv, layers},
                        {"v_proj", hidden, kv, layers},
                        {"o_proj", hidden, hidden, layers},
                        {"gate_proj", hidden, mlp, layers},
                        {"up_proj", hidden, mlp, layers},
                        {"down_proj", mlp, hidden, layers}},
                       rank,
                       kNominalBaseParams};
}

std::vector<SubsetMatch> search_module_subsets(const LoraLayerSpec& spec, std::uint64_t target) {
  const auto k = spec.matrices.size();
  if (k == 0 || k > 20) throw Error(ErrorCode::kInvalidArgument, "subset search needs 1..20 matrix types");
  std::vector<SubsetMatch> out;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    LoraLayerSpec sub{{}, spec.rank, spec.base_param_total};
    SubsetMatch m;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (1u << i)) {
        sub.matrices.push_back(spec.matrices[i]);
        m.modules.push_back(spec.matrices[i].name);
      }
    }
    m.added_params = lora_param_count(sub).added_params;
    m.delta = static_cast<std::int64_t>(m.added_params) - static_cast<std::int64_t>(target);
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(), [](const SubsetMatch& a, const SubsetMatch& b) {
    const auto da = std::llabs(a.delta), db = std::llabs(b.delta);
    if (da != db) return da < db;
    if (a.modules.size() != b.modules.size()) return a.modules.size() < b.modules.size();
    return a.modules < b.modules;
  });
  return out;
}

nlohmann::json lora_report() {
  const auto spec = llama_8b_full_spec();
  const auto full = lora_param_count(spec);
  const double reported_fraction =
      static_cast<double>(kReportedLoraParams) / static_cast<double>(kNominalBaseParams);
  const auto subsets = search_module_subsets(spec, kReportedLoraParams);
  nlohmann::json closest = nlohmann::json::array();
  for (std::size_t i = 0; i < std::min<std::size_t>(3, subsets.size()); ++i) {
    closest.push_back({{"modules", subsets[i].modules},
                       {"added_params", subsets[i].added_params},
                       {"delta_vs_reported", subsets[i].delta}});
  }
  return {{"rank", spec.rank},
          {"layers", spec.matrices.front().count},
          {"base_param_total", spec.base_param_total},
          {"reported_added_params", kReportedLoraParams},
          {"reported_fraction_percent", 100 * reported_fraction},
          {"reported_fraction_claim_percent", kReportedLoraPercent},
          {"full_enumeration_added_params", full.added_params},
          {"full_enumeration_fraction_percent", 100 * full.fraction_of_base},
          {"full_enumeration_delta_vs_reported",
           static_cast<std::int64_t>(full.added_params) - static_cast<std::int64_t>(kReportedLoraParams)},
          {"closest_module_subsets", closest}};
}

}  // namespace adgpt::eval
