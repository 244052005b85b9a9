#include <doctest.h>

#include <regex>
#include <atomic>
#include <set>
#include <thread>

#include "adgpt/corpora/compose.hpp"
#include "adgpt/engines/backend.hpp"
#include "adgpt/engines/engines.hpp"
#include "adgpt/engines/entities.hpp"
#include "support.hpp"

using namespace adgpt;
using namespace adgpt::engines;
using testing::code_of;

namespace {

const GroundedTemplateBackend kGrounded;

// Paraphrases, never passes the draft through.
class ParaphraseBackend final : public GenerativeBackend {
 public:
  std::string_view name() const override { return "paraphrase"; }
  std::string generate(const GenerationRequest&) const override { return "Probably, for reasons."; }
};

const Dispatcher& dispatcher() {
  static const Dispatcher d(testing::fixture_kb(), testing::fixture_router(), kGrounded);
  return d;
}

ParsedQuery pq(TaskLabel task, std::string gene, std::optional<BrainRegion> region = {},
               std::optional<GeneAttribute> attr = {}, std::optional<QtlKind> kind = {}) {
  ParsedQuery q;
  q.task = task;
  q.gene = std::move(gene);
  q.region = region;
  q.attribute = attr;
  q.kind = kind;
  return q;
}

std::vector<std::string> numbers_in(const std::string& text) {
  std::vector<std::string> out;
  static const std::regex num(R"(\d+(\.\d+)?)");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), num); it != std::sregex_iterator(); ++it) {
    out.push_back(it->str());
  }
  return out;
}

}  // namespace

TEST_CASE("entity extraction") {
  const auto& kb = testing::fixture_kb();
  const EntityLexicon lex(kb);

  auto m = lex.extract("Does the gene GENEA contain variants in the hippocampus that significantly influence "
                       "splicing regulation?");
  CHECK(m.genes == std::vector<std::string>{"GENEA"});
  CHECK(m.region == BrainRegion::kHippocampus);
  CHECK(m.kind == QtlKind::kSqtl);

  CHECK(lex.extract("is the caudate (basal ganglia) involved").region == BrainRegion::kCaudateBasalGanglia);
  CHECK(lex.extract("Caudate basal-ganglia").region == BrainRegion::kCaudateBasalGanglia);
  CHECK(lex.extract("anything in the cortex").region == BrainRegion::kCortex);
  CHECK(lex.extract("anything in the frontal cortex").region == BrainRegion::kFrontalCortex);
  CHECK(lex.extract("expression of genea").kind == QtlKind::kEqtl);
  CHECK(lex.extract("expression or splicing").conflicting_kinds);
  CHECK(lex.extract("What is the start position of GENEA?").attribute == GeneAttribute::kStart);
  CHECK(lex.extract("Which strand holds GENEA?").attribute == GeneAttribute::kStrand);
  CHECK(lex.extract("GENEA and GENEB").genes == std::vector<std::string>{"GENEA", "GENEB"});
  CHECK(lex.extract("GENEAB").genes == std::vector<std::string>{"GENEAB"});

  const auto unknown = lex.extract("What is the start of NOTAGENE1?");
  CHECK(unknown.genes.empty());
  CHECK(unknown.unknown_symbol == "NOTAGENE1");

  CHECK(code_of([&] { complete_for_task(unknown, TaskLabel::kTask1); }) == ErrorCode::kUnknownGene);
  CHECK(code_of([&] { complete_for_task(lex.extract("GENEA and GENEB start"), TaskLabel::kTask1); }) ==
        ErrorCode::kAmbiguousGene);
  CHECK(code_of([&] { complete_for_task(lex.extract("GENEA in the hippocampus"), TaskLabel::kTask2); }) ==
        ErrorCode::kMissingEntity);
  CHECK(code_of([&] { complete_for_task(lex.extract("GENEA"), TaskLabel::kTask4); }) ==
        ErrorCode::kMissingEntity);
  CHECK(complete_for_task(lex.extract("Is GENEA related to AD?"), TaskLabel::kTask3).gene == "GENEA");
}

TEST_CASE("task 1 answers") {
  const auto& kb = testing::fixture_kb();
  auto a = answer_task1(kb, pq(TaskLabel::kTask1, "GENEA", {}, GeneAttribute::kStart));
  CHECK(a.text.find("1000") != std::string::npos);
  CHECK_FALSE(a.verdict.has_value());
  CHECK(a.sources == std::vector<std::string>{kb.annotation_source()});

  a = answer_task1(kb, pq(TaskLabel::kTask1, "GENEA", {}, GeneAttribute::kStrand));
  CHECK(a.text.find('+') != std::string::npos);

  CHECK(code_of([&] { answer_task1(kb, pq(TaskLabel::kTask1, "NOPE", {}, GeneAttribute::kStart)); }) ==
        ErrorCode::kUnknownGene);
  CHECK(code_of([&] { answer_task1(kb, pq(TaskLabel::kTask1, "GENEA")); }) == ErrorCode::kMissingEntity);

  const auto routed = dispatcher().dispatch("What is the start position of GENEA?");
  CHECK(routed.ok());
  CHECK(routed.task == TaskLabel::kTask1);
  CHECK(routed.text.find("1000") != std::string::npos);

  const auto err = dispatcher().dispatch("What is the start position of NOTAGENE1?");
  REQUIRE(err.error.has_value());
  CHECK(err.error->code == "UnknownGene");
  CHECK(err.text.find("/genes") != std::string::npos);
}

TEST_CASE("task 2 answers agree with the brute-force oracle on every triple") {
  const auto& kb = testing::fixture_kb();
  const auto raw = testing::fixture_data().qtls;
  std::map<std::tuple<std::string, BrainRegion, QtlKind>, std::pair<std::size_t, std::size_t>> oracle;
  for (const auto& q : raw) {
    auto& [sig, all] = oracle[{q.gene, q.region, q.kind}];
    ++all;
    sig += q.q_value <= 0.05;
  }
  std::size_t yes = 0;
  for (const auto& gene : kb.seed().symbols) {
    for (auto region : all_regions()) {
      for (auto kind : {QtlKind::kEqtl, QtlKind::kSqtl}) {
        const auto a = answer_task2(kb, pq(TaskLabel::kTask2, gene, region, {}, kind));
        const auto it = oracle.find(std::tuple{gene, region, kind});
        const auto [sig, all] = it == oracle.end() ? std::pair<std::size_t, std::size_t>{0, 0} : it->second;
        REQUIRE(a.verdict.has_value());
        CHECK(*a.verdict == (sig > 0 ? Verdict::kYes : Verdict::kNo));
        CHECK(a.text.find("(" + std::to_string(sig) + " of " + std::to_string(all) + " tested") !=
              std::string::npos);
        CHECK(a.text.rfind(sig > 0 ? "Yes. " : "No. ", 0) == 0);
        CHECK(a.sources == std::vector<std::string>(1, kb.qtl_source(region, kind)));
        yes += sig > 0;
      }
    }
  }
  CHECK(yes > 0);

  const auto routed = dispatcher().dispatch(
      "Does the gene GENEA contain variants in the hippocampus that significantly influence splicing regulation?");
  CHECK(routed.task == TaskLabel::kTask2);
  CHECK(routed.verdict == (kb.significant_association("GENEA", BrainRegion::kHippocampus, QtlKind::kSqtl)
                               ? Verdict::kYes
                               : Verdict::kNo));
}

TEST_CASE("task 3 answers equal the corpus output and keep reasoning verbatim") {
  const auto& kb = testing::fixture_kb();
  std::map<std::string, std::string> corpus_output;
  for (const auto& ex : testing::fixture_corpora()[2].examples) {
    if (ex.meta.at("template_id") == "t3_1") corpus_output[ex.meta.at("gene")] = ex.output;
  }
  REQUIRE(corpus_output.size() == kb.molecular_genetics().size());
  for (const auto& rec : kb.molecular_genetics()) {
    const auto a = answer_task3(kb, pq(TaskLabel::kTask3, rec.gene), kGrounded);
    CHECK(a.text == corpus_output.at(rec.gene));
    CHECK(a.verdict == (rec.ad_related ? Verdict::kYes : Verdict::kNo));
    if (rec.ad_related) {
      CHECK(a.text == "Yes, there is a potential relation based on the " + rec.curated_reasoning + ".");
    }
    CHECK(a.sources == rec.citations);
  }

  std::string without;
  for (const auto& g : kb.seed().symbols) {
    if (!kb.omim(g)) {
      without = g;
      break;
    }
  }
  REQUIRE_FALSE(without.empty());
  const auto a = answer_task3(kb, pq(TaskLabel::kTask3, without), kGrounded);
  CHECK(a.verdict == Verdict::kUnknown);
  CHECK(a.text == corpora::task3_unknown_text(without));
  CHECK(a.sources.empty());
}

TEST_CASE("task 4 truth table over every gene x region pair") {
  const auto& kb = testing::fixture_kb();
  std::size_t disagreements = 0, yes = 0;
  for (const auto& gene : kb.seed().symbols) {
    const auto* rec = kb.omim(gene);
    const bool step1 = rec && rec->ad_related;
    for (auto region : all_regions()) {
      const bool step2 = kb.significant_association(gene, region, QtlKind::kEqtl) ||
                         kb.significant_association(gene, region, QtlKind::kSqtl);
      const auto a = answer_task4(kb, pq(TaskLabel::kTask4, gene, region), kGrounded);
      REQUIRE(a.reasoning_steps.size() == 3);
      const auto expect = step1 && step2 ? Verdict::kYes : Verdict::kNo;
      disagreements += a.verdict != expect;
      disagreements += a.reasoning_steps[1].verdict != (step2 ? Verdict::kYes : Verdict::kNo);
      disagreements += a.reasoning_steps[2].verdict != expect;
      disagreements += a.reasoning_steps[0].verdict !=
                       (rec ? (rec->ad_related ? Verdict::kYes : Verdict::kNo) : Verdict::kUnknown);
      for (const auto& s : a.reasoning_steps) CHECK(a.text.find(s.text) != std::string::npos);
      yes += expect == Verdict::kYes;
    }
  }
  CHECK(disagreements == 0);
  CHECK(yes > 0);

  const auto routed = dispatcher().dispatch("Is the hippocampus related to AD with regard to gene GENEA?");
  CHECK(routed.task == TaskLabel::kTask4);
  CHECK(routed.reasoning_steps.size() == 3);
}

TEST_CASE("gibberish and partial queries degrade to error answers") {
  const auto a = dispatcher().dispatch("xyzzy");
  REQUIRE(a.error.has_value());
  CHECK(a.error->code == "MissingEntity");
  CHECK_FALSE(a.text.empty());
  for (const char* q : {"", "   ", "Is the hippocampus related to AD?", "GENEA GENEB start position",
                        "Does GENEA affect expression or splicing in the cortex?"}) {
    const auto r = dispatcher().dispatch(q);
    CHECK_FALSE(r.ok());
    if (r.task != TaskLabel::kTask1) CHECK(r.verdict == Verdict::kUnknown);
  }
  const auto j = to_json(a);
  CHECK(j["error"]["code"] == "MissingEntity");
  CHECK(j.contains("task"));
}

TEST_CASE("every corpus instruction dispatches to a grounded, sourced answer") {
  const auto& kb = testing::fixture_kb();
  const auto cites = kb.all_citations();
  for (const auto& c : testing::fixture_corpora()) {
    for (std::size_t i = 0; i < c.examples.size(); i += 7) {
      const auto& ex = c.examples[i];
      const auto a = dispatcher().dispatch(ex.instruction);
      REQUIRE(a.ok());
      CHECK(a.task == c.task);
      for (const auto& s : a.sources) CHECK(cites.count(s) == 1);
      if (c.task == TaskLabel::kTask2 || c.task == TaskLabel::kTask3 || c.task == TaskLabel::kTask4) {
        CHECK(a.verdict.has_value());
      }
      const auto& gene = ex.meta.at("gene");
      if (c.task == TaskLabel::kTask1) {
        const auto attr = *parse_attribute(ex.meta.at("attribute"));
        const auto value = kb.gene_attribute(gene, attr);
        CHECK(a.text.find(value) != std::string::npos);
        const auto location = kb.gene_attribute(gene, GeneAttribute::kLocationSummary);
        for (const auto& n : numbers_in(a.text)) CHECK(location.find(n) != std::string::npos);
      }
      if (c.task == TaskLabel::kTask3 && kb.omim(gene)->ad_related) {
        CHECK(a.text.find(kb.omim(gene)->curated_reasoning) != std::string::npos);
      }
      CHECK(a == dispatcher().dispatch(ex.instruction));
    }
  }
}

TEST_CASE("concurrent dispatch is deterministic") {
  const std::vector<std::string> queries{"What is the start position of GENEA?",
                                         "Is the hippocampus related to AD with regard to gene GENEA?",
                                         "xyzzy"};
  std::vector<Answer> expect;
  for (const auto& q : queries) expect.push_back(dispatcher().dispatch(q));
  std::vector<std::thread> threads;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 50; ++i) {
        for (std::size_t k = 0; k < queries.size(); ++k) mismatches += !(dispatcher().dispatch(queries[k]) == expect[k]);
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(mismatches == 0);
}

TEST_CASE("backends: registry and grounding enforcement") {
  CHECK(make_backend(kDefaultBackendName)->name() == kDefaultBackendName);
  CHECK(code_of([] { make_backend("no-such-backend"); }) == ErrorCode::kUnknownBackend);
  register_backend("paraphrase", [] { return std::make_shared<ParaphraseBackend>(); });
  const auto names = backend_names();
  CHECK(std::find(names.begin(), names.end(), "paraphrase") != names.end());

  const auto& kb = testing::fixture_kb();
  const auto para = make_backend("paraphrase");
  const MolecularGeneticsRecord* ad = nullptr;
  for (const auto& r : kb.molecular_genetics()) {
    if (r.ad_related) ad = &r;
  }
  REQUIRE(ad != nullptr);
  CHECK(code_of([&] { answer_task3(kb, pq(TaskLabel::kTask3, ad->gene), *para); }) ==
        ErrorCode::kUngroundedOutput);

  const Dispatcher d(kb, testing::fixture_router(), *para);
  const auto& t3 = *std::find_if(testing::fixture_corpora()[2].examples.begin(),
                                 testing::fixture_corpora()[2].examples.end(),
                                 [&](const auto& ex) { return ex.meta.at("gene") == ad->gene; });
  const auto a = d.dispatch(t3.instruction);
  REQUIRE(a.error.has_value());
  CHECK(a.error->code == "UngroundedOutput");
  CHECK(a.verdict == Verdict::kUnknown);

  GenerationRequest req{TaskLabel::kTask3, "instr", "draft", {"fact"}};
  CHECK(kGrounded.generate(req) == "draft");
  const auto prompt = req.render_prompt();
  CHECK(prompt.find("instr") != std::string::npos);
  CHECK(prompt.find("draft") != std::string::npos);
}
