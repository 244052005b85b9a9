#include "adgpt/engines/entities.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "adgpt/error.hpp"

namespace adgpt::engines {
namespace {

std::vector<std::string> words(std::string_view normalized) {
  std::vector<std::string> out;
  std::istringstream in{std::string(normalized)};
  std::string w;
  while (in >> w) out.push_back(std::move(w));
  return out;
}

std::size_t token_count(std::string_view normalized) {
  return normalized.empty() ? 0 : 1 + static_cast<std::size_t>(std::count(normalized.begin(), normalized.end(), ' '));
}

std::string join(const std::vector<std::string>& toks, std::size_t from, std::size_t len) {
  std::string out;
  for (std::size_t k = 0; k < len; ++k) {
    if (k) out.push_back(' ');
    out += toks[from + k];
  }
  return out;
}

template <typename Map, typename OnHit>
void longest_match(const std::vector<std::string>& toks, const Map& lexicon, std::size_t max_len,
                   OnHit&& on_hit) {
  std::size_t i = 0;
  while (i < toks.size()) {
    bool hit = false;
    for (std::size_t len = std::min(max_len, toks.size() - i); len >= 1; --len) {
      auto it = lexicon.find(join(toks, i, len));
      if (it != lexicon.end()) {
        on_hit(it->second);
        i += len;
        hit = true;
        break;
      }
    }
    if (!hit) ++i;
  }
}

// Keyword -> attribute, checked in priority order so "start position" is a
// start query and "chromosome location" a chromosome query.
const std::vector<std::pair<GeneAttribute, std::vector<std::string_view>>>& attribute_keywords() {
  static const std::vector<std::pair<GeneAttribute, std::vector<std::string_view>>> kKeywords{
      {GeneAttribute::kStart, {"start", "starts", "begin", "begins"}},
      {GeneAttribute::kEnd, {"end", "ends", "stop", "stops"}},
      {GeneAttribute::kStrand, {"strand", "orientation"}},
      {GeneAttribute::kChromosome, {"chromosome", "chromosomal", "chr"}},
      {GeneAttribute::kLocationSummary, {"location", "located", "coordinates", "locus", "position"}},
  };
  return kKeywords;
}

// Upper-case tokens that look like gene symbols but are ordinary vocabulary.
const std::set<std::string, std::less<>>& symbol_stoplist() {
  static const std::set<std::string, std::less<>> kStop{"AD", "QTL", "EQTL", "SQTL", "DNA",
                                                        "RNA", "OMIM", "GTEX", "CNS", "BA9",
                                                        "BA24", "YES", "NO", "SNP", "GENE"};
  return kStop;
}

std::vector<std::string> symbol_like_tokens(std::string_view query) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    while (!cur.empty() && cur.back() == '-') cur.pop_back();
    bool has_alpha = false;
    bool all_upper = !cur.empty();
    for (char c : cur) {
      const auto uc = static_cast<unsigned char>(c);
      if (std::isalpha(uc)) has_alpha = true;
      if (std::islower(uc)) all_upper = false;
    }
    if (cur.size() >= 3 && has_alpha && all_upper && !symbol_stoplist().contains(cur)) {
      out.push_back(cur);
    }
    cur.clear();
  };
  for (char c : query) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isalnum(uc) || (c == '-' && !cur.empty())) {
      cur.push_back(c);
    } else {
      flush();
    }
  }
  flush();
  return out;
}

}  // namespace

EntityLexicon::EntityLexicon(const KnowledgeBase& kb) {
  for (const auto& a : kb.annotations()) {
    const auto key = normalize_phrase(a.symbol);
    max_gene_tokens_ = std::max(max_gene_tokens_, token_count(key));
    genes_.emplace(key, a.symbol);
  }
  for (auto region : all_regions()) {
    const auto& info = region_info(region);
    auto add = [&](std::string_view phrase) {
      const auto key = normalize_phrase(phrase);
      max_region_tokens_ = std::max(max_region_tokens_, token_count(key));
      regions_.emplace(key, region);
    };
    add(info.id);
    add(info.label);
    for (auto alias : info.aliases) add(alias);
  }
}

EntityMatches EntityLexicon::extract(std::string_view query) const {
  EntityMatches m;
  const auto toks = words(normalize_phrase(query));

  longest_match(toks, genes_, max_gene_tokens_, [&](const std::string& symbol) {
    if (std::find(m.genes.begin(), m.genes.end(), symbol) == m.genes.end()) m.genes.push_back(symbol);
  });
  longest_match(toks, regions_, max_region_tokens_, [&](BrainRegion r) {
    if (!m.region) m.region = r;
  });

  const std::set<std::string_view> present(toks.begin(), toks.end());
  for (const auto& [attribute, keys] : attribute_keywords()) {
    if (std::any_of(keys.begin(), keys.end(), [&](auto k) { return present.contains(k); })) {
      m.attribute = attribute;
      break;
    }
  }

  const bool expression = present.contains("expression") || present.contains("expressed") ||
                          present.contains("eqtl") || present.contains("eqtls");
  const bool splicing = present.contains("splicing") || present.contains("spliced") ||
                        present.contains("sqtl") || present.contains("sqtls");
  if (expression && splicing) {
    m.conflicting_kinds = true;
  } else if (expression) {
    m.kind = QtlKind::kEqtl;
  } else if (splicing) {
    m.kind = QtlKind::kSqtl;
  }

  if (m.genes.empty()) {
    const auto candidates = symbol_like_tokens(query);
    if (!candidates.empty()) m.unknown_symbol = candidates.front();
  }
  return m;
}

EntityMatches extract_entities(const KnowledgeBase& kb, std::string_view query) {
  return EntityLexicon(kb).extract(query);
}

ParsedQuery complete_for_task(const EntityMatches& matches, TaskLabel task) {
  ParsedQuery pq;
  pq.task = task;
  if (matches.genes.size() > 1) {
    std::string names;
    for (const auto& g : matches.genes) names += (names.empty() ? "" : ", ") + g;
    throw Error(ErrorCode::kAmbiguousGene, "query names several genes (" + names + ")");
  }
  if (matches.genes.empty()) {
    if (matches.unknown_symbol) {
      throw Error(ErrorCode::kUnknownGene, "unknown gene '" + *matches.unknown_symbol + "'");
    }
    throw Error(ErrorCode::kMissingEntity, "gene");
  }
  pq.gene = matches.genes.front();

  auto need_region = [&] {
    if (!matches.region) throw Error(ErrorCode::kMissingEntity, "region");
    pq.region = matches.region;
  };
  switch (task) {
    case TaskLabel::kTask1:
      if (!matches.attribute) throw Error(ErrorCode::kMissingEntity, "attribute");
      pq.attribute = matches.attribute;
      break;
    case TaskLabel::kTask2:
      need_region();
      if (!matches.kind) throw Error(ErrorCode::kMissingEntity, "kind");
      pq.kind = matches.kind;
      break;
    case TaskLabel::kTask3:
      break;
    case TaskLabel::kTask4:
      need_region();
      break;
  }
  return pq;
}

}  // namespace adgpt::engines
