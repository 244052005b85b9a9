#include "adgpt/engines/engines.hpp"

#include "adgpt/corpora/templates.hpp"

namespace adgpt::engines {
namespace {

using corpora::Template;
using corpora::TemplateSet;

const Template& default_template(TaskLabel task) {
  return *TemplateSet::defaults().for_task(task).front();
}

const Template& default_task1_template(GeneAttribute attribute) {
  for (const auto* t : TemplateSet::defaults().for_task(TaskLabel::kTask1)) {
    if (t->attribute == attribute) return *t;
  }
  return default_template(TaskLabel::kTask1);
}

const std::string& require_gene(const KnowledgeBase& kb, const ParsedQuery& pq) {
  if (!pq.gene) throw Error(ErrorCode::kMissingEntity, "gene");
  if (!kb.has_gene(*pq.gene)) throw Error(ErrorCode::kUnknownGene, "unknown gene '" + *pq.gene + "'");
  return *pq.gene;
}

BrainRegion require_region(const ParsedQuery& pq) {
  if (!pq.region) throw Error(ErrorCode::kMissingEntity, "region");
  return *pq.region;
}

std::string run_backend(const GenerativeBackend& backend, GenerationRequest request) {
  auto text = backend.generate(request);
  for (const auto& fact : request.required_facts) {
    if (text.find(fact) == std::string::npos) {
      throw Error(ErrorCode::kUngroundedOutput,
                  "backend '" + std::string(backend.name()) + "' dropped a grounded fact: " + fact);
    }
  }
  return text;
}

std::string guidance(const Error& e) {
  const std::string msg = e.what();
  switch (e.code()) {
    case ErrorCode::kUnknownGene:
      return "The knowledge base has no record of this gene (" + msg +
             "). Browse the available gene symbols (GET /genes) and ask again.";
    case ErrorCode::kMissingEntity:
      if (msg == "gene") return "Please name a gene symbol from the knowledge base.";
      if (msg == "region") return "Please name one of the 13 brain regions (GET /regions).";
      if (msg == "attribute") {
        return "Please ask for the chromosome, start position, end position, strand or genomic "
               "location of the gene.";
      }
      if (msg == "kind") {
        return "Please say whether you mean expression (eQTL) or splicing regulation (sQTL), "
               "but not both.";
      }
      return "The query is missing a required " + msg + ".";
    case ErrorCode::kAmbiguousGene:
      return "Please ask about one gene at a time; " + msg + ".";
    default:
      return msg;
  }
}

}  // namespace

nlohmann::json to_json(const Answer& a) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : a.reasoning_steps) {
    steps.push_back({{"text", s.text}, {"verdict", corpora::verdict_name(s.verdict)}});
  }
  nlohmann::json out{{"task", task_name(a.task)},
                     {"verdict", a.verdict ? nlohmann::json(corpora::verdict_name(*a.verdict))
                                           : nlohmann::json(nullptr)},
                     {"text", a.text},
                     {"reasoning_steps", std::move(steps)},
                     {"sources", a.sources},
                     {"error", nullptr}};
  if (a.error) out["error"] = {{"code", a.error->code}, {"message", a.error->message}};
  return out;
}

Answer error_answer(TaskLabel task, const Error& error) {
  Answer a;
  a.task = task;
  if (task != TaskLabel::kTask1) a.verdict = Verdict::kUnknown;
  a.text = guidance(error);
  a.error = AnswerError{std::string(error.code_name()), error.what()};
  return a;
}

Answer answer_task1(const KnowledgeBase& kb, const ParsedQuery& pq) {
  const auto& gene = require_gene(kb, pq);
  if (!pq.attribute) throw Error(ErrorCode::kMissingEntity, "attribute");
  Answer a;
  a.task = TaskLabel::kTask1;
  a.text = corpora::fill(default_task1_template(*pq.attribute).output,
                         corpora::task1_bindings(kb, gene, *pq.attribute));
  a.sources = {kb.annotation_source()};
  return a;
}

Answer answer_task2(const KnowledgeBase& kb, const ParsedQuery& pq) {
  const auto& gene = require_gene(kb, pq);
  const auto region = require_region(pq);
  if (!pq.kind) throw Error(ErrorCode::kMissingEntity, "kind");
  const auto kind = *pq.kind;

  const bool significant = kb.significant_association(gene, region, kind);
  const auto n_sig = kb.significant_count(gene, region, kind);
  const auto n_all = kb.qtl_records(gene, region, kind).size();
  const std::string where = " in the " + std::string(region_label(region));
  const std::string tail = " influencing " + std::string(qtl_kind_mechanism(kind)) + where +
                           " (" + std::to_string(n_sig) + " of " + std::to_string(n_all) +
                           " tested variants with q <= " +
                           corpora::format_alpha(kb.significance_alpha()) + ").";
  Answer a;
  a.task = TaskLabel::kTask2;
  a.verdict = significant ? Verdict::kYes : Verdict::kNo;
  a.text = significant ? "Yes. " + gene + " harbors significant " +
                             std::string(qtl_kind_name(kind)) + " variants" + tail
                       : "No. " + gene + " harbors no significant " +
                             std::string(qtl_kind_name(kind)) + " variants" + tail;
  a.sources = {kb.qtl_source(region, kind)};
  return a;
}

Answer answer_task3(const KnowledgeBase& kb, const ParsedQuery& pq,
                    const GenerativeBackend& backend) {
  const auto& gene = require_gene(kb, pq);
  Answer a;
  a.task = TaskLabel::kTask3;
  const auto* rec = kb.omim(gene);
  if (!rec) {
    a.verdict = Verdict::kUnknown;
    a.text = corpora::task3_unknown_text(gene);
    return a;
  }
  const auto& phrasing = default_template(TaskLabel::kTask3);
  const corpora::Bindings bindings{{"gene", gene}, {"reasoning", rec->curated_reasoning}};
  GenerationRequest req;
  req.task = TaskLabel::kTask3;
  req.instruction = pq.query;
  req.grounded_draft =
      corpora::fill(rec->ad_related ? phrasing.output : phrasing.output_negative, bindings);
  if (rec->ad_related) req.required_facts.push_back(rec->curated_reasoning);

  a.verdict = rec->ad_related ? Verdict::kYes : Verdict::kNo;
  a.text = run_backend(backend, std::move(req));
  a.sources = rec->citations;
  return a;
}

Answer answer_task4(const KnowledgeBase& kb, const ParsedQuery& pq,
                    const GenerativeBackend& backend) {
  const auto& gene = require_gene(kb, pq);
  const auto region = require_region(pq);
  auto chain = corpora::compose_region_ad_chain(kb, gene, region, default_template(TaskLabel::kTask4));

  GenerationRequest req;
  req.task = TaskLabel::kTask4;
  req.instruction = pq.query;
  req.grounded_draft = chain.text;
  if (const auto* rec = kb.omim(gene); rec && rec->ad_related) {
    req.required_facts.push_back(rec->curated_reasoning);
  }

  Answer a;
  a.task = TaskLabel::kTask4;
  a.verdict = chain.conclusion;
  a.text = run_backend(backend, std::move(req));
  a.reasoning_steps = std::move(chain.steps);
  if (const auto* rec = kb.omim(gene)) a.sources = rec->citations;
  for (auto kind : kAllQtlKinds) a.sources.push_back(kb.qtl_source(region, kind));
  return a;
}

Dispatcher::Dispatcher(const KnowledgeBase& kb, const router::RouterModel& router,
                       const GenerativeBackend& backend)
    : kb_(kb), router_(router), backend_(backend), lexicon_(kb) {}

Answer Dispatcher::answer_as(TaskLabel task, std::string_view query) const {
  try {
    auto pq = complete_for_task(lexicon_.extract(query), task);
    pq.query = std::string(query);
    switch (task) {
      case TaskLabel::kTask1: return answer_task1(kb_, pq);
      case TaskLabel::kTask2: return answer_task2(kb_, pq);
      case TaskLabel::kTask3: return answer_task3(kb_, pq, backend_);
      case TaskLabel::kTask4: return answer_task4(kb_, pq, backend_);
    }
  } catch (const Error& e) {
    return error_answer(task, e);
  }
  return error_answer(task, Error(ErrorCode::kInvalidArgument, "unknown task"));
}

Answer Dispatcher::dispatch(std::string_view query) const {
  return answer_as(router_.classify(query).label, query);
}

Answer dispatch(const KnowledgeBase& kb, const router::RouterModel& router,
                const GenerativeBackend& backend, std::string_view query) {
  return Dispatcher(kb, router, backend).dispatch(query);
}

}  // namespace adgpt::engines
