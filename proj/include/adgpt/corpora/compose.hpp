#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adgpt/corpora/templates.hpp"
#include "adgpt/knowledge/knowledge_base.hpp"

// Grounded answer composition shared by the corpus generators and the answer
// engines. Every sentence is assembled from knowledge-base fields only.
namespace adgpt::corpora {

enum class Verdict : std::uint8_t { kYes, kNo, kUnknown };

std::string_view verdict_name(Verdict v);  // "yes" / "no" / "unknown"
std::optional<Verdict> parse_verdict(std::string_view text);

struct ReasoningStep {
  std::string text;
  Verdict verdict = Verdict::kUnknown;

  friend bool operator==(const ReasoningStep&, const ReasoningStep&) = default;
};

Bindings task1_bindings(const KnowledgeBase& kb, std::string_view gene, GeneAttribute attribute);
Bindings task2_bindings(std::string_view gene, BrainRegion region, QtlKind kind);
Bindings task4_bindings(std::string_view gene, BrainRegion region);

// Gene-AD verdict from the molecular genetics record: yes/no, or unknown when
// the gene has no record.
Verdict gene_ad_verdict(const KnowledgeBase& kb, std::string_view gene);

std::string task3_unknown_text(std::string_view gene);

// Three-step chain for "is region related to AD with regard to gene":
//   1. gene-AD relation (molecular genetics record)
//   2. region-gene relation (eQTL or sQTL significance in the region)
//   3. conclusion = step 1 AND step 2
struct RegionAdChain {
  std::vector<ReasoningStep> steps;  // exactly three
  Verdict conclusion = Verdict::kNo;
  std::string text;                  // "Step 1: ...\nStep 2: ...\nStep 3: ...\nAnswer: Yes."
};

RegionAdChain compose_region_ad_chain(const KnowledgeBase& kb, std::string_view gene,
                                      BrainRegion region, const Template& phrasing);

// Formats alpha the same way everywhere (shortest round-trip decimal).
std::string format_alpha(double alpha);

}  // namespace adgpt::corpora
