#include "adgpt/engines/backend.hpp"

#include <map>
#include <mutex>

#include "adgpt/corpora/corpus.hpp"
#include "adgpt/error.hpp"

namespace adgpt::engines {
namespace {

struct Registry {
  std::mutex mu;
  std::map<std::string, BackendFactory, std::less<>> factories{
      {std::string(kDefaultBackendName),
       [] { return std::make_shared<const GroundedTemplateBackend>(); }}};
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

std::string GenerationRequest::render_prompt() const {
  std::string prompt(corpora::kSystemPrompt);
  prompt += "\n\nInstruction: " + instruction;
  prompt += "\n\nEvidence (reproduce these facts verbatim):";
  for (const auto& f : required_facts) prompt += "\n- " + f;
  prompt += "\n\nDraft answer:\n" + grounded_draft + "\n";
  return prompt;
}

void register_backend(std::string name, BackendFactory factory) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  r.factories[std::move(name)] = std::move(factory);
}

std::shared_ptr<const GenerativeBackend> make_backend(std::string_view name) {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  auto it = r.factories.find(name);
  if (it == r.factories.end()) {
    throw Error(ErrorCode::kUnknownBackend, "unknown backend '" + std::string(name) + "'");
  }
  return it->second();
}

std::vector<std::string> backend_names() {
  auto& r = registry();
  std::lock_guard lock(r.mu);
  std::vector<std::string> out;
  for (const auto& [name, f] : r.factories) out.push_back(name);
  return out;
}

}  // namespace adgpt::engines
