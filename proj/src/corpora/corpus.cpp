#include "adgpt/corpora/corpus.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "adgpt/corpora/compose.hpp"
#include "adgpt/error.hpp"

namespace adgpt::corpora {
namespace {

using json = nlohmann::json;

// Emits examples while enforcing the corpus invariants.
class CorpusBuilder {
 public:
  CorpusBuilder(TaskLabel task, std::uint64_t seed) {
    corpus_.task = task;
    corpus_.generation_seed = seed;
  }

  void add(std::string instruction, std::string output, std::map<std::string, std::string> meta) {
    if (!seen_.emplace(instruction, output).second) {
      throw Error(ErrorCode::kTemplateError,
                  "templates produce a duplicate example: '" + instruction + "'");
    }
    corpus_.examples.push_back(InstructionExample{std::string(kSystemPrompt), std::move(instruction),
                                                  std::move(output), corpus_.task, std::move(meta)});
  }

  Corpus finish() && { return std::move(corpus_); }

 private:
  Corpus corpus_;
  std::set<std::pair<std::string, std::string>> seen_;
};

void require_annotations(const KnowledgeBase& kb) {
  for (const auto& gene : kb.seed().symbols) {
    if (!kb.has_gene(gene)) {
      throw Error(ErrorCode::kMissingAnnotation, "seed gene " + gene + " has no annotation");
    }
  }
}

}  // namespace

Corpus generate_task1(const KnowledgeBase& kb, const TemplateSet& templates, std::uint64_t seed) {
  CorpusBuilder out(TaskLabel::kTask1, seed);
  const auto tpls = templates.for_task(TaskLabel::kTask1);
  if (tpls.empty()) return std::move(out).finish();
  require_annotations(kb);
  for (const auto& gene : kb.seed().symbols) {
    for (const auto* t : tpls) {
      const auto bindings = task1_bindings(kb, gene, *t->attribute);
      out.add(fill(t->instruction, bindings), fill(t->output, bindings),
              {{"gene", gene},
               {"attribute", std::string(attribute_name(*t->attribute))},
               {"template_id", t->id}});
    }
  }
  return std::move(out).finish();
}

Corpus generate_task2(const KnowledgeBase& kb, const TemplateSet& templates, std::uint64_t seed) {
  CorpusBuilder out(TaskLabel::kTask2, seed);
  const auto tpls = templates.for_task(TaskLabel::kTask2);
  if (tpls.empty()) return std::move(out).finish();
  require_annotations(kb);
  for (const auto& gene : kb.seed().symbols) {
    for (auto region : all_regions()) {
      for (auto kind : kAllQtlKinds) {
        const bool significant = kb.significant_association(gene, region, kind);
        const auto bindings = task2_bindings(gene, region, kind);
        for (const auto* t : tpls) {
          out.add(fill(t->instruction, bindings),
                  fill(significant ? t->output : t->output_negative, bindings),
                  {{"gene", gene},
                   {"region", std::string(region_id(region))},
                   {"kind", std::string(qtl_kind_name(kind))},
                   {"template_id", t->id}});
        }
      }
    }
  }
  return std::move(out).finish();
}

Corpus generate_task3(const KnowledgeBase& kb, const TemplateSet& templates, std::uint64_t seed) {
  CorpusBuilder out(TaskLabel::kTask3, seed);
  const auto tpls = templates.for_task(TaskLabel::kTask3);
  for (const auto& gene : kb.seed().symbols) {
    const auto* rec = kb.omim(gene);
    if (!rec) continue;
    if (rec->ad_related && rec->curated_reasoning.empty()) {
      throw Error(ErrorCode::kMissingReasoning, "gene " + gene + " lacks curated reasoning");
    }
    const Bindings bindings{{"gene", gene}, {"reasoning", rec->curated_reasoning}};
    for (const auto* t : tpls) {
      out.add(fill(t->instruction, bindings),
              fill(rec->ad_related ? t->output : t->output_negative, bindings),
              {{"gene", gene}, {"template_id", t->id}});
    }
  }
  return std::move(out).finish();
}

Corpus generate_task4(const KnowledgeBase& kb, const TemplateSet& templates, std::uint64_t seed) {
  CorpusBuilder out(TaskLabel::kTask4, seed);
  const auto tpls = templates.for_task(TaskLabel::kTask4);
  if (tpls.empty()) return std::move(out).finish();
  require_annotations(kb);
  for (const auto& gene : kb.seed().symbols) {
    for (auto region : all_regions()) {
      const auto bindings = task4_bindings(gene, region);
      for (const auto* t : tpls) {
        auto chain = compose_region_ad_chain(kb, gene, region, *t);
        out.add(fill(t->instruction, bindings), std::move(chain.text),
                {{"gene", gene}, {"region", std::string(region_id(region))}, {"template_id", t->id}});
      }
    }
  }
  return std::move(out).finish();
}

Corpus generate(const KnowledgeBase& kb, const TemplateSet& templates, TaskLabel task,
                std::uint64_t seed) {
  switch (task) {
    case TaskLabel::kTask1: return generate_task1(kb, templates, seed);
    case TaskLabel::kTask2: return generate_task2(kb, templates, seed);
    case TaskLabel::kTask3: return generate_task3(kb, templates, seed);
    case TaskLabel::kTask4: return generate_task4(kb, templates, seed);
  }
  return {};
}

std::pair<Corpus, Corpus> split_corpus(const Corpus& corpus, double test_fraction,
                                       std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw Error(ErrorCode::kBadFraction, "test fraction must lie strictly between 0 and 1");
  }
  const std::size_t n = corpus.size();
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * static_cast<double>(n)));

  // Fisher-Yates over indices with a raw mt19937_64 stream so the split does
  // not depend on the standard library's distribution implementations.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  std::vector<bool> in_test(n, false);
  for (std::size_t i = 0; i < n_test; ++i) in_test[order[i]] = true;

  Corpus train{corpus.task, {}, corpus.generation_seed};
  Corpus test{corpus.task, {}, corpus.generation_seed};
  train.examples.reserve(n - n_test);
  test.examples.reserve(n_test);
  for (std::size_t i = 0; i < n; ++i) {
    (in_test[i] ? test : train).examples.push_back(corpus.examples[i]);
  }
  return {std::move(train), std::move(test)};
}

json example_to_json(const InstructionExample& example) {
  return json{{"system", example.system},
              {"instruction", example.instruction},
              {"output", example.output},
              {"task", task_name(example.task)},
              {"meta", example.meta}};
}

InstructionExample example_from_json(const json& obj, std::size_t line_no) {
  auto fail = [&](const std::string& what) -> Error {
    return Error(ErrorCode::kSchemaError, what + " at line " + std::to_string(line_no));
  };
  if (!obj.is_object()) throw fail("line is not a JSON object");
  InstructionExample ex;
  for (auto [key, dest] : {std::pair{"system", &ex.system}, std::pair{"instruction", &ex.instruction},
                           std::pair{"output", &ex.output}}) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) throw fail(std::string("missing or non-string '") + key + "'");
    *dest = it->get<std::string>();
  }
  auto task = obj.find("task");
  if (task == obj.end() || !task->is_string()) throw fail("missing or non-string 'task'");
  const auto label = parse_task(task->get<std::string>());
  if (!label) throw fail("unknown task '" + task->get<std::string>() + "'");
  ex.task = *label;
  auto meta = obj.find("meta");
  if (meta == obj.end() || !meta->is_object()) throw fail("missing or non-object 'meta'");
  for (const auto& [k, v] : meta->items()) {
    if (!v.is_string()) throw fail("meta value for '" + k + "' is not a string");
    ex.meta[k] = v.get<std::string>();
  }
  return ex;
}

void write_jsonl(std::ostream& out, const Corpus& corpus) {
  for (const auto& ex : corpus.examples) out << example_to_json(ex).dump() << '\n';
}

Corpus read_jsonl(std::istream& in, std::optional<TaskLabel> expected_task) {
  Corpus corpus;
  corpus.task = expected_task.value_or(TaskLabel::kTask1);
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded()) {
      throw Error(ErrorCode::kSchemaError, "invalid JSON at line " + std::to_string(line_no));
    }
    auto ex = example_from_json(obj, line_no);
    if (first && !expected_task) corpus.task = ex.task;
    first = false;
    if (ex.task != corpus.task) {
      throw Error(ErrorCode::kSchemaError, "mixed tasks in corpus at line " + std::to_string(line_no));
    }
    corpus.examples.push_back(std::move(ex));
  }
  return corpus;
}

void export_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_jsonl(out, corpus);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

Corpus import_jsonl(const std::filesystem::path& path, std::optional<TaskLabel> expected_task) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  return read_jsonl(in, expected_task);
}

json describe(const Corpus& corpus, const KnowledgeBase& kb, const TemplateSet& templates) {
  const auto n_templates = templates.for_task(corpus.task).size();
  const auto n_genes = kb.seed().symbols.size();
  json d{{"task", task_name(corpus.task)},
         {"examples", corpus.size()},
         {"generation_seed", corpus.generation_seed},
         {"templates", n_templates},
         {"kb_hash", kb.hash()}};
  switch (corpus.task) {
    case TaskLabel::kTask1:
      d["genes"] = n_genes;
      d["count_formula"] = "genes x templates (each template bound to one attribute)";
      break;
    case TaskLabel::kTask2:
      d["genes"] = n_genes;
      d["regions"] = kBrainRegionCount;
      d["kinds"] = kAllQtlKinds.size();
      d["count_formula"] = "genes x regions x kinds x templates";
      break;
    case TaskLabel::kTask3: {
      std::size_t with_record = 0;
      for (const auto& g : kb.seed().symbols) with_record += kb.omim(g) ? 1 : 0;
      d["genes_with_record"] = with_record;
      d["count_formula"] = "genes_with_record x templates";
      break;
    }
    case TaskLabel::kTask4:
      d["genes"] = n_genes;
      d["regions"] = kBrainRegionCount;
      d["count_formula"] = "genes x regions x templates";
      break;
  }
  return d;
}

}  // namespace adgpt::corpora
