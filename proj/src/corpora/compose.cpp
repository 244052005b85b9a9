#include "adgpt/corpora/compose.hpp"

#include <array>
#include <charconv>

namespace adgpt::corpora {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kYes: return "yes";
    case Verdict::kNo: return "no";
    case Verdict::kUnknown: return "unknown";
  }
  return "unknown";
}

std::optional<Verdict> parse_verdict(std::string_view text) {
  if (text == "yes") return Verdict::kYes;
  if (text == "no") return Verdict::kNo;
  if (text == "unknown") return Verdict::kUnknown;
  return std::nullopt;
}

std::string format_alpha(double alpha) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), alpha);
  return std::string(buf.data(), ptr);
}

Bindings task1_bindings(const KnowledgeBase& kb, std::string_view gene, GeneAttribute attribute) {
  return Bindings{{"gene", std::string(gene)},
                  {"attribute", std::string(attribute_phrase(attribute))},
                  {"value", kb.gene_attribute(gene, attribute)}};
}

Bindings task2_bindings(std::string_view gene, BrainRegion region, QtlKind kind) {
  return Bindings{{"gene", std::string(gene)},
                  {"region", std::string(region_label(region))},
                  {"kind", std::string(qtl_kind_mechanism(kind))}};
}

Bindings task4_bindings(std::string_view gene, BrainRegion region) {
  return Bindings{{"gene", std::string(gene)}, {"region", std::string(region_label(region))}};
}

Verdict gene_ad_verdict(const KnowledgeBase& kb, std::string_view gene) {
  const auto* rec = kb.omim(gene);
  if (!rec) return Verdict::kUnknown;
  return rec->ad_related ? Verdict::kYes : Verdict::kNo;
}

std::string task3_unknown_text(std::string_view gene) {
  return "No curated molecular genetics evidence is available for " + std::string(gene) + ".";
}

RegionAdChain compose_region_ad_chain(const KnowledgeBase& kb, std::string_view gene,
                                      BrainRegion region, const Template& phrasing) {
  const std::string g(gene);
  const std::string r(region_label(region));
  RegionAdChain chain;

  const Verdict step1 = gene_ad_verdict(kb, gene);
  switch (step1) {
    case Verdict::kYes:
      chain.steps.push_back({g + " has a potential relation to Alzheimer's disease based on the " +
                                 kb.omim(gene)->curated_reasoning + ".",
                             step1});
      break;
    case Verdict::kNo:
      chain.steps.push_back({"The molecular genetics summary of " + g +
                                 " does not support a relation to Alzheimer's disease.",
                             step1});
      break;
    case Verdict::kUnknown:
      chain.steps.push_back({"No curated evidence relates " + g + " to Alzheimer's disease.", step1});
      break;
  }

  const bool eqtl = kb.significant_association(gene, region, QtlKind::kEqtl);
  const bool sqtl = kb.significant_association(gene, region, QtlKind::kSqtl);
  const Verdict step2 = (eqtl || sqtl) ? Verdict::kYes : Verdict::kNo;
  if (step2 == Verdict::kYes) {
    std::string mechanisms = eqtl && sqtl ? "expression and splicing regulation"
                                          : std::string(qtl_kind_mechanism(eqtl ? QtlKind::kEqtl
                                                                                : QtlKind::kSqtl));
    chain.steps.push_back({g + " harbors significant variants (q <= " +
                               format_alpha(kb.significance_alpha()) + ") influencing " +
                               mechanisms + " in the " + r + ".",
                           step2});
  } else {
    chain.steps.push_back({g + " harbors no significant variants influencing expression or "
                               "splicing regulation in the " + r + ".",
                           step2});
  }

  chain.conclusion =
      (step1 == Verdict::kYes && step2 == Verdict::kYes) ? Verdict::kYes : Verdict::kNo;
  std::string conclusion_text;
  if (step1 == Verdict::kUnknown) {
    conclusion_text = "There is insufficient evidence relating " + g +
                      " to Alzheimer's disease, so the " + r +
                      " is not shown to be related to AD with regard to gene " + g + ".";
  } else {
    const auto bindings = task4_bindings(gene, region);
    conclusion_text = fill(chain.conclusion == Verdict::kYes ? phrasing.output
                                                             : phrasing.output_negative,
                           bindings);
  }
  chain.steps.push_back({std::move(conclusion_text), chain.conclusion});

  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    chain.text += "Step " + std::to_string(i + 1) + ": " + chain.steps[i].text + "\n";
  }
  chain.text += chain.conclusion == Verdict::kYes ? "Answer: Yes." : "Answer: No.";
  return chain;
}

}  // namespace adgpt::corpora
