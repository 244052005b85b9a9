#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "adgpt/corpora/corpus.hpp"
#include "adgpt/engines/engines.hpp"
#include "adgpt/eval/metrics.hpp"
#include "adgpt/eval/ratings.hpp"
#include "adgpt/eval/stats.hpp"

namespace adgpt::eval {

// Task 1 answers are sentences; comparison uses the value they carry. Drops
// the gene symbol, lowercases, and keeps the tokens that look like values
// (anything with a digit, strand signs, X/Y/MT).
std::string task1_payload(std::string_view text, std::string_view gene);

// Gold verdict read off a corpus output ("Yes." / "Yes, ..." / "Answer: Yes.").
std::optional<engines::Verdict> gold_verdict(TaskLabel task, std::string_view output);

struct TaskScore {
  std::size_t n = 0;
  std::size_t errors = 0;        // error answers (counted as wrong)
  std::size_t routed_correctly = 0;
  ConfusionCounts counts;        // Task1: gold always positive, pred = payload match

  TaskScore& operator+=(const TaskScore& o) noexcept;
  friend bool operator==(const TaskScore&, const TaskScore&) = default;
};

struct EvaluationResult {
  std::array<TaskScore, 4> tasks{};

  std::size_t total() const noexcept;
  std::size_t routed_correctly() const noexcept;
  const TaskScore& at(TaskLabel t) const { return tasks[task_number(t) - 1]; }
  EvaluationResult& operator+=(const EvaluationResult& o) noexcept;
  friend bool operator==(const EvaluationResult&, const EvaluationResult&) = default;
};

// Scores one dispatched answer against its gold example.
TaskScore score_example(const engines::Answer& answer, const corpora::InstructionExample& gold);

// Dispatches every instruction and merges the per-example scores. The
// OpenMP fan-out and the serial reference give identical results.
EvaluationResult evaluate_engine(const engines::Dispatcher& dispatcher,
                                 std::span<const corpora::InstructionExample> test);
EvaluationResult evaluate_engine_serial(const engines::Dispatcher& dispatcher,
                                        std::span<const corpora::InstructionExample> test);

struct ReportContext {
  std::string kb_hash;
  std::string router_hash;
  std::string backend;
  nlohmann::json config = nlohmann::json::object();  // split fraction, seeds, file names
};

inline constexpr int kReportSchemaVersion = 1;

nlohmann::json stats_to_json(const PairedStats& s);
nlohmann::json ratings_to_json(const RatingSummary& s);

// Per-task metric blocks, routing accuracy, LoRA accounting, hashes and a
// SHA-256 fingerprint of the config block. When ratings are given, each
// system gets an aggregate and, for exactly two systems, both paired tests
// (precision and relevance) are added under "statistics".
nlohmann::json build_report(const EvaluationResult& result, const ReportContext& ctx,
                            const RatingSet* ratings = nullptr);

}  // namespace adgpt::eval
