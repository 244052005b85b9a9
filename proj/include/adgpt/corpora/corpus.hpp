#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "adgpt/corpora/templates.hpp"
#include "adgpt/knowledge/knowledge_base.hpp"

namespace adgpt::corpora {

inline constexpr std::string_view kSystemPrompt =
    "You are a bioinformatics expert. Based on the following instruction, provide an accurate "
    "and professional response.";

struct InstructionExample {
  std::string system{kSystemPrompt};
  std::string instruction;
  std::string output;
  TaskLabel task = TaskLabel::kTask1;
  // Provenance: gene, region, kind, attribute, template_id (whichever apply).
  std::map<std::string, std::string> meta;

  friend bool operator==(const InstructionExample&, const InstructionExample&) = default;
};

struct Corpus {
  TaskLabel task = TaskLabel::kTask1;
  std::vector<InstructionExample> examples;
  std::uint64_t generation_seed = 0;

  std::size_t size() const noexcept { return examples.size(); }

  // The seed is carried in the corpus descriptor, not in the JSONL lines, so
  // equality covers task and examples.
  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.task == b.task && a.examples == b.examples;
  }
};

// One example per gene x template (each Task 1 template is bound to one
// attribute). Throws MissingAnnotation for a seed gene without annotation.
Corpus generate_task1(const KnowledgeBase& kb, const TemplateSet& templates, std::uint64_t seed = 0);

// One example per gene x region x kind x template; "Yes."/"No." from
// significant_association.
Corpus generate_task2(const KnowledgeBase& kb, const TemplateSet& templates, std::uint64_t seed = 0);

// One example per seed gene with a molecular genetics record x template.
Corpus generate_task3(const KnowledgeBase& kb, const TemplateSet& templates, std::uint64_t seed = 0);

// One example per gene x region x template; output is the three-step chain.
Corpus generate_task4(const KnowledgeBase& kb, const TemplateSet& templates, std::uint64_t seed = 0);

Corpus generate(const KnowledgeBase& kb, const TemplateSet& templates, TaskLabel task,
                std::uint64_t seed = 0);

// Deterministic given seed. |test| = round(test_fraction * |corpus|); both
// halves keep the corpus order. Throws BadFraction unless 0 < f < 1.
std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, double test_fraction,
                                       std::uint64_t seed);

nlohmann::json example_to_json(const InstructionExample& example);
// Throws SchemaError naming `line_no`.
InstructionExample example_from_json(const nlohmann::json& obj, std::size_t line_no);

void write_jsonl(std::ostream& out, const Corpus& corpus);
// Throws SchemaError(line) for malformed lines or mixed tasks. An empty stream
// yields an empty corpus of `expected_task` (Task1 if unset).
Corpus read_jsonl(std::istream& in, std::optional<TaskLabel> expected_task = std::nullopt);

void export_jsonl(const Corpus& corpus, const std::filesystem::path& path);
Corpus import_jsonl(const std::filesystem::path& path,
                    std::optional<TaskLabel> expected_task = std::nullopt);

// Corpus-level metadata: task, size, seed and the count decomposition.
nlohmann::json describe(const Corpus& corpus, const KnowledgeBase& kb,
                        const TemplateSet& templates);

}  // namespace adgpt::corpora
