#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adgpt/knowledge/knowledge_base.hpp"

namespace adgpt::engines {

// Everything the engines need from a query, once its task is known.
struct ParsedQuery {
  TaskLabel task = TaskLabel::kTask1;
  std::optional<std::string> gene;
  std::optional<BrainRegion> region;
  std::optional<GeneAttribute> attribute;
  std::optional<QtlKind> kind;
  std::string query;  // original text, when known
};

struct EntityMatches {
  std::vector<std::string> genes;  // distinct KB symbols, in order of first appearance
  std::optional<BrainRegion> region;
  std::optional<GeneAttribute> attribute;
  std::optional<QtlKind> kind;
  bool conflicting_kinds = false;             // both expression and splicing mentioned
  std::optional<std::string> unknown_symbol;  // symbol-like token absent from the KB
};

// Longest-match lexicon over the KB's gene symbols and the region aliases.
// Matching is case-insensitive and runs over normalized word tokens, so
// "caudate (basal ganglia)" and "Caudate basal-ganglia" both hit.
class EntityLexicon {
 public:
  explicit EntityLexicon(const KnowledgeBase& kb);

  EntityMatches extract(std::string_view query) const;

 private:
  std::unordered_map<std::string, std::string> genes_;  // normalized phrase -> symbol
  std::unordered_map<std::string, BrainRegion> regions_;
  std::size_t max_gene_tokens_ = 1;
  std::size_t max_region_tokens_ = 1;
};

EntityMatches extract_entities(const KnowledgeBase& kb, std::string_view query);

// Checks the fields the task requires (Task1: gene+attribute; Task2:
// gene+region+kind; Task3: gene; Task4: gene+region).
// Throws UnknownGene, AmbiguousGene or MissingEntity.
ParsedQuery complete_for_task(const EntityMatches& matches, TaskLabel task);

}  // namespace adgpt::engines
