#include "adgpt/knowledge/assemble.hpp"

namespace adgpt {

KnowledgeBase assemble_knowledge_base(const ingest::IngestedData& data,
                                      std::optional<double> alpha_override) {
  Provenance provenance;
  provenance.annotation_source = data.annotations_source;
  for (const auto& entry : data.qtl_files) {
    provenance.qtl_sources[{entry.region, entry.kind}] = entry.source;
  }
  return KnowledgeBase::build(data.annotations, data.qtls, data.molecular_genetics, data.seed,
                              alpha_override.value_or(data.significance_alpha),
                              std::move(provenance));
}

}  // namespace adgpt
