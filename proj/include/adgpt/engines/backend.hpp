#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "adgpt/knowledge/records.hpp"

namespace adgpt::engines {

inline constexpr std::string_view kDefaultBackendName = "grounded-template";

// What an engine hands to a text generator: the user's instruction, a draft
// answer assembled purely from knowledge-base fields, and the facts that must
// survive verbatim in whatever the generator returns.
struct GenerationRequest {
  TaskLabel task = TaskLabel::kTask3;
  std::string instruction;
  std::string grounded_draft;
  std::vector<std::string> required_facts;

  // Flat text prompt for generators that take one.
  std::string render_prompt() const;
};

// Port for the generative stage. Implementations must be safe to call
// concurrently.
class GenerativeBackend {
 public:
  virtual ~GenerativeBackend() = default;
  virtual std::string_view name() const = 0;
  virtual std::string generate(const GenerationRequest& request) const = 0;
};

// Returns the grounded draft unchanged.
class GroundedTemplateBackend final : public GenerativeBackend {
 public:
  std::string_view name() const override { return kDefaultBackendName; }
  std::string generate(const GenerationRequest& request) const override {
    return request.grounded_draft;
  }
};

using BackendFactory = std::function<std::shared_ptr<const GenerativeBackend>()>;

// Name-keyed registry; "grounded-template" is always present.
void register_backend(std::string name, BackendFactory factory);
std::shared_ptr<const GenerativeBackend> make_backend(std::string_view name);  // throws UnknownBackend
std::vector<std::string> backend_names();

}  // namespace adgpt::engines
