#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adgpt/knowledge/records.hpp"

namespace adgpt::corpora {

// One phrasing of one query type. Placeholders are written `{name}`.
//
//   Task1  instruction: {gene}            output: {gene} {value} {attribute}
//   Task2  instruction: {gene} {region} {kind}   outputs: same
//   Task3  instruction: {gene}            output: {gene} {reasoning}; output_negative: {gene}
//   Task4  instruction: {gene} {region}   outputs: conclusion sentence, {gene} {region}
//
// `output` is the affirmative (or only) answer, `output_negative` the negative
// one. Task 1 templates are bound to a single attribute.
struct Template {
  std::string id;
  TaskLabel task = TaskLabel::kTask1;
  std::optional<GeneAttribute> attribute;
  std::string instruction;
  std::string output;
  std::string output_negative;

  friend bool operator==(const Template&, const Template&) = default;
};

class TemplateSet {
 public:
  TemplateSet() = default;
  // Validates ids, required placeholders and per-task fillability.
  explicit TemplateSet(std::vector<Template> templates);

  // Five attributes x three phrasings for Task 1, three phrasings per query
  // type for Tasks 2-4.
  static const TemplateSet& defaults();

  // TOML file of [[template]] tables with keys id, task, attribute (Task 1),
  // instruction, output, output_negative.
  static TemplateSet load(const std::filesystem::path& path);

  const std::vector<Template>& all() const noexcept { return templates_; }
  std::vector<const Template*> for_task(TaskLabel task) const;
  std::size_t size() const noexcept { return templates_.size(); }

  friend bool operator==(const TemplateSet&, const TemplateSet&) = default;

 private:
  std::vector<Template> templates_;
};

using Bindings = std::map<std::string, std::string, std::less<>>;

// Substitutes every `{name}`. Throws TemplateError for an unbound placeholder.
std::string fill(std::string_view pattern, const Bindings& bindings);

// Names of the placeholders in a pattern, in order of appearance.
std::vector<std::string> placeholders(std::string_view pattern);

// Wording used for an attribute inside sentences ("start position").
std::string_view attribute_phrase(GeneAttribute attribute);

}  // namespace adgpt::corpora
