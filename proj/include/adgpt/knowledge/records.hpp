#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adgpt/knowledge/regions.hpp"

namespace adgpt {

enum class Strand : std::uint8_t { kPlus, kMinus };

std::string_view strand_symbol(Strand strand);  // "+" / "-"

struct GeneAnnotation {
  std::string symbol;
  std::string chromosome;  // 1..22, X, Y, MT
  std::int64_t start = 0;  // 1-based, inclusive
  std::int64_t end = 0;    // 1-based, inclusive
  Strand strand = Strand::kPlus;

  friend bool operator==(const GeneAnnotation&, const GeneAnnotation&) = default;
};

struct QtlRecord {
  std::string gene;
  std::string variant_id;
  BrainRegion region = BrainRegion::kFrontalCortex;
  QtlKind kind = QtlKind::kEqtl;
  double q_value = 1.0;

  friend bool operator==(const QtlRecord&, const QtlRecord&) = default;
};

struct MolecularGeneticsRecord {
  std::string gene;
  std::string summary_text;
  std::string curated_reasoning;
  bool ad_related = false;
  std::vector<std::string> citations;

  friend bool operator==(const MolecularGeneticsRecord&,
                         const MolecularGeneticsRecord&) = default;
};

struct SeedGeneList {
  std::vector<std::string> symbols;

  friend bool operator==(const SeedGeneList&, const SeedGeneList&) = default;
};

// Queryable per-gene attributes, in the order the Task 1 corpus enumerates them.
enum class GeneAttribute : std::uint8_t {
  kChromosome,
  kStart,
  kEnd,
  kStrand,
  kLocationSummary,
};

inline constexpr GeneAttribute kAllGeneAttributes[] = {
    GeneAttribute::kChromosome, GeneAttribute::kStart, GeneAttribute::kEnd,
    GeneAttribute::kStrand, GeneAttribute::kLocationSummary};

std::string_view attribute_name(GeneAttribute attribute);  // "start", "location_summary", ...
std::optional<GeneAttribute> parse_attribute(std::string_view name);

enum class TaskLabel : std::uint8_t { kTask1, kTask2, kTask3, kTask4 };

inline constexpr TaskLabel kAllTasks[] = {TaskLabel::kTask1, TaskLabel::kTask2,
                                          TaskLabel::kTask3, TaskLabel::kTask4};

std::string_view task_name(TaskLabel task);  // "Task1"..."Task4"
int task_number(TaskLabel task);             // 1..4
std::optional<TaskLabel> parse_task(std::string_view text);  // "Task3", "3"
std::optional<TaskLabel> task_from_number(int n);

}  // namespace adgpt
