#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "adgpt/corpora/compose.hpp"
#include "adgpt/engines/backend.hpp"
#include "adgpt/engines/entities.hpp"
#include "adgpt/error.hpp"
#include "adgpt/knowledge/knowledge_base.hpp"
#include "adgpt/router/router.hpp"

namespace adgpt::engines {

using corpora::ReasoningStep;
using corpora::Verdict;

struct AnswerError {
  std::string code;     // ErrorCode name, e.g. "UnknownGene"
  std::string message;

  friend bool operator==(const AnswerError&, const AnswerError&) = default;
};

struct Answer {
  TaskLabel task = TaskLabel::kTask1;
  std::optional<Verdict> verdict;  // always set for Task2-4
  std::string text;
  std::vector<ReasoningStep> reasoning_steps;  // exactly three for Task4
  std::vector<std::string> sources;            // subset of KnowledgeBase::all_citations()
  std::optional<AnswerError> error;

  bool ok() const noexcept { return !error.has_value(); }
  friend bool operator==(const Answer&, const Answer&) = default;
};

nlohmann::json to_json(const Answer& answer);

// Structured error answer with guidance text; Task2-4 error answers carry
// verdict "unknown".
Answer error_answer(TaskLabel task, const Error& error);

// Engines throw UnknownGene / MissingEntity when the query is incomplete.
Answer answer_task1(const KnowledgeBase& kb, const ParsedQuery& pq);
Answer answer_task2(const KnowledgeBase& kb, const ParsedQuery& pq);
Answer answer_task3(const KnowledgeBase& kb, const ParsedQuery& pq, const GenerativeBackend& backend);
Answer answer_task4(const KnowledgeBase& kb, const ParsedQuery& pq, const GenerativeBackend& backend);

// Router -> entity extraction -> task engine. Holds references only; the
// caller keeps the knowledge base, model and backend alive.
class Dispatcher {
 public:
  Dispatcher(const KnowledgeBase& kb, const router::RouterModel& router,
             const GenerativeBackend& backend);

  // Never throws for domain failures: they come back as error answers.
  Answer dispatch(std::string_view query) const;

  // Skips routing; used when the task is already known.
  Answer answer_as(TaskLabel task, std::string_view query) const;

  const KnowledgeBase& kb() const noexcept { return kb_; }

 private:
  const KnowledgeBase& kb_;
  const router::RouterModel& router_;
  const GenerativeBackend& backend_;
  EntityLexicon lexicon_;
};

Answer dispatch(const KnowledgeBase& kb, const router::RouterModel& router,
                const GenerativeBackend& backend, std::string_view query);

}  // namespace adgpt::engines
