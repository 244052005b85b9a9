#include "adgpt/knowledge/records.hpp"

namespace adgpt {

std::string_view strand_symbol(Strand strand) { return strand == Strand::kPlus ? "+" : "-"; }

std::string_view attribute_name(GeneAttribute attribute) {
  switch (attribute) {
    case GeneAttribute::kChromosome: return "chromosome";
    case GeneAttribute::kStart: return "start";
    case GeneAttribute::kEnd: return "end";
    case GeneAttribute::kStrand: return "strand";
    case GeneAttribute::kLocationSummary: return "location_summary";
  }
  return "";
}

std::optional<GeneAttribute> parse_attribute(std::string_view name) {
  for (auto a : kAllGeneAttributes) {
    if (attribute_name(a) == name) return a;
  }
  return std::nullopt;
}

std::string_view task_name(TaskLabel task) {
  switch (task) {
    case TaskLabel::kTask1: return "Task1";
    case TaskLabel::kTask2: return "Task2";
    case TaskLabel::kTask3: return "Task3";
    case TaskLabel::kTask4: return "Task4";
  }
  return "";
}

int task_number(TaskLabel task) { return static_cast<int>(task) + 1; }

std::optional<TaskLabel> task_from_number(int n) {
  if (n < 1 || n > 4) return std::nullopt;
  return static_cast<TaskLabel>(n - 1);
}

std::optional<TaskLabel> parse_task(std::string_view text) {
  if (text.size() == 1 && text[0] >= '1' && text[0] <= '4') return task_from_number(text[0] - '0');
  for (auto t : kAllTasks) {
    if (task_name(t) == text) return t;
  }
  return std::nullopt;
}

}  // namespace adgpt
