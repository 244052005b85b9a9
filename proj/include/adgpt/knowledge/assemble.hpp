#pragma once

#include <optional>

#include "adgpt/ingest/manifest.hpp"
#include "adgpt/knowledge/knowledge_base.hpp"

namespace adgpt {

// Builds the knowledge base from a parsed manifest, carrying each table's
// source label into the provenance. `alpha_override` replaces the manifest's
// significance_alpha when set.
KnowledgeBase assemble_knowledge_base(const ingest::IngestedData& data,
                                      std::optional<double> alpha_override = std::nullopt);

}  // namespace adgpt
