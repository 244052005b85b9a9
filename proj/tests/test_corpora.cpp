#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "adgpt/corpora/compose.hpp"
#include "adgpt/corpora/corpus.hpp"
#include "adgpt/corpora/templates.hpp"
#include "support.hpp"

using namespace adgpt;
using namespace adgpt::corpora;
using testing::code_of;

namespace {

const TemplateSet& defaults() { return TemplateSet::defaults(); }

TemplateSet only(std::initializer_list<std::string> ids) {
  std::vector<Template> out;
  for (const auto& t : defaults().all()) {
    if (std::find(ids.begin(), ids.end(), t.id) != ids.end()) out.push_back(t);
  }
  return TemplateSet(out);
}

// GENEA: AD yes; GENEB: AD no; GENEC: no record. Hippocampus significant for
// A and B (A via sQTL only), cortex for nobody.
KnowledgeBase truth_table_kb() {
  std::vector<GeneAnnotation> ann{{"GENEA", "19", 1000, 2000, Strand::kPlus},
                                  {"GENEB", "1", 10, 20, Strand::kMinus},
                                  {"GENEC", "2", 30, 40, Strand::kPlus}};
  std::vector<QtlRecord> q{{"GENEA", "a1", BrainRegion::kHippocampus, QtlKind::kSqtl, 0.01},
                           {"GENEA", "a2", BrainRegion::kCortex, QtlKind::kEqtl, 0.5},
                           {"GENEB", "b1", BrainRegion::kHippocampus, QtlKind::kEqtl, 0.05},
                           {"GENEC", "c1", BrainRegion::kHippocampus, QtlKind::kEqtl, 0.001}};
  std::vector<MolecularGeneticsRecord> mg{
      {"GENEA", "summary A", "variant increases amyloid burden", true, {"cite A"}},
      {"GENEB", "summary B", "", false, {"cite B"}}};
  return KnowledgeBase::build(ann, q, mg, SeedGeneList{{"GENEA", "GENEB", "GENEC"}});
}

std::string final_line(const std::string& text) { return text.substr(text.rfind('\n') + 1); }

}  // namespace

TEST_CASE("system prompt is byte-exact on every example") {
  CHECK(std::string(kSystemPrompt) ==
        "You are a bioinformatics expert. Based on the following instruction, provide an accurate and "
        "professional response.");
  for (const auto& c : testing::fixture_corpora()) {
    for (const auto& ex : c.examples) {
      REQUIRE(ex.system == kSystemPrompt);
      REQUIRE(ex.meta.count("template_id") == 1);
      REQUIRE(ex.task == c.task);
    }
  }
}

TEST_CASE("default templates: shape and TOML mirror") {
  CHECK(defaults().for_task(TaskLabel::kTask1).size() == 15);
  for (auto t : {TaskLabel::kTask2, TaskLabel::kTask3, TaskLabel::kTask4}) {
    CHECK(defaults().for_task(t).size() == 3);
  }
  std::map<GeneAttribute, int> per_attr;
  for (const auto* t : defaults().for_task(TaskLabel::kTask1)) ++per_attr[*t->attribute];
  CHECK(per_attr.size() == 5);
  for (const auto& [a, n] : per_attr) CHECK(n == 3);

  const auto loaded = TemplateSet::load(std::filesystem::path(ADGPT_FIXTURE_DIR) / ".." / "templates" / "default.toml");
  CHECK(loaded == defaults());

  const auto* start_t1 = defaults().for_task(TaskLabel::kTask1)[3];
  CHECK(start_t1->instruction == "What is the start position of {gene}?");
  CHECK(defaults().for_task(TaskLabel::kTask3).front()->output ==
        "Yes, there is a potential relation based on the {reasoning}.");
}

TEST_CASE("template validation") {
  Template t{"x", TaskLabel::kTask2, std::nullopt, "Does {gene} matter in the {region}?", "Yes.", "No."};
  CHECK(code_of([&] { TemplateSet({t}); }) == ErrorCode::kTemplateError);  // {kind} missing
  Template t1{"y", TaskLabel::kTask1, std::nullopt, "Where is {gene}?", "{value}", ""};
  CHECK(code_of([&] { TemplateSet({t1}); }) == ErrorCode::kTemplateError);  // no attribute
  Template dup = defaults().all().front();
  CHECK(code_of([&] { TemplateSet({dup, dup}); }) == ErrorCode::kTemplateError);
  Template bad = dup;
  bad.output = "{gene} has {nonsense}.";
  CHECK(code_of([&] { TemplateSet({bad}); }) == ErrorCode::kTemplateError);

  CHECK(fill("{gene} at {value}", {{"gene", "G"}, {"value", "1"}}) == "G at 1");
  CHECK(code_of([] { fill("{gene}", {}); }) == ErrorCode::kTemplateError);
  CHECK(placeholders("a {x} b {y} {x}") == std::vector<std::string>{"x", "y", "x"});
}

TEST_CASE("task 1: single example, fixture count, value consistency") {
  const auto& kb = testing::fixture_kb();
  const auto one_gene = KnowledgeBase::build({kb.annotation("GENEA")}, {}, {}, SeedGeneList{{"GENEA"}});
  const auto c = generate_task1(one_gene, only({"t1_start_1"}));
  REQUIRE(c.size() == 1);
  CHECK(c.examples[0].instruction == "What is the start position of GENEA?");
  CHECK(c.examples[0].output.find("1000") != std::string::npos);

  CHECK(generate_task1(kb, TemplateSet{}).size() == 0);
  CHECK(testing::fixture_corpora()[0].size() == 2160);
  CHECK(testing::fixture_corpora()[0].size() == kb.seed().symbols.size() * 5 * 3);

  // Different phrasings of one (gene, attribute) embed the same value.
  std::map<std::pair<std::string, std::string>, std::set<std::string>> outputs;
  for (const auto& ex : testing::fixture_corpora()[0].examples) {
    outputs[{ex.meta.at("gene"), ex.meta.at("attribute")}].insert(ex.output);
  }
  CHECK(outputs.size() == 144 * 5);
  for (const auto& [key, outs] : outputs) {
    CHECK(outs.size() == 1);
    const auto attr = parse_attribute(key.second);
    CHECK(outs.begin()->find(kb.gene_attribute(key.first, *attr)) != std::string::npos);
  }

  auto missing = KnowledgeBase::build({kb.annotation("GENEA")}, {}, {}, SeedGeneList{{"GENEA", "GENEB"}});
  CHECK(code_of([&] { generate_task1(missing, defaults()); }) == ErrorCode::kMissingAnnotation);
}

TEST_CASE("task 2: verdicts equal a brute-force scan") {
  const auto& kb = testing::fixture_kb();
  const auto& c = testing::fixture_corpora()[1];
  CHECK(c.size() == kb.seed().symbols.size() * 13 * 2 * 3);
  CHECK(c.size() == 11232);

  std::size_t yes = 0, oracle_yes = 0;
  const auto& all = testing::fixture_data().qtls;
  for (const auto& ex : c.examples) {
    const auto gene = ex.meta.at("gene");
    const auto region = *parse_region(ex.meta.at("region"));
    const auto kind = *parse_qtl_kind(ex.meta.at("kind"));
    bool expect = false;
    for (const auto& q : all) {
      expect |= q.gene == gene && q.region == region && q.kind == kind && q.q_value <= 0.05;
    }
    CHECK(ex.output == (expect ? "Yes." : "No."));
    yes += ex.output == "Yes.";
    oracle_yes += expect;
  }
  CHECK(yes == oracle_yes);

  const auto tt = truth_table_kb();
  const auto none = KnowledgeBase::build({tt.annotation("GENEA")}, {}, {}, SeedGeneList{{"GENEA"}});
  const auto c2 = generate_task2(none, only({"t2_1"}));
  CHECK(c2.size() == 26);
  for (const auto& ex : c2.examples) CHECK(ex.output == "No.");

  const auto c3 = generate_task2(tt, only({"t2_1"}));
  const auto it = std::find_if(c3.examples.begin(), c3.examples.end(), [](const auto& ex) {
    return ex.meta.at("gene") == "GENEA" && ex.meta.at("region") == "hippocampus" && ex.meta.at("kind") == "sQTL";
  });
  REQUIRE(it != c3.examples.end());
  CHECK(it->output == "Yes.");
  CHECK(it->instruction ==
        "Does the gene GENEA contain variants in the hippocampus that significantly influence splicing regulation?");
}

TEST_CASE("task 3: reasoning verbatim, negatives, counts") {
  const auto tt = truth_table_kb();
  const auto c = generate_task3(tt, only({"t3_1", "t3_2"}));
  CHECK(c.size() == 4);  // 2 genes with a record x 2 templates
  for (const auto& ex : c.examples) {
    if (ex.meta.at("gene") == "GENEA") {
      CHECK(ex.output == "Yes, there is a potential relation based on the variant increases amyloid burden.");
    } else {
      CHECK(ex.output.rfind("No,", 0) == 0);
    }
  }

  std::vector<GeneAnnotation> ann;
  std::vector<MolecularGeneticsRecord> mg;
  SeedGeneList seed;
  for (int i = 0; i < 10; ++i) {
    const std::string g = "G" + std::to_string(i);
    ann.push_back({g, "1", 1, 2, Strand::kPlus});
    mg.push_back({g, "s", i < 7 ? "r" + std::to_string(i) : "", i < 7, {}});
    seed.symbols.push_back(g);
  }
  CHECK(generate_task3(KnowledgeBase::build(ann, {}, mg, seed), only({"t3_1", "t3_2"})).size() == 20);

  const auto& kb = testing::fixture_kb();
  CHECK(testing::fixture_corpora()[2].size() == kb.molecular_genetics().size() * 3);
}

TEST_CASE("task 4: exhaustive truth table") {
  const auto tt = truth_table_kb();
  const auto c = generate_task4(tt, only({"t4_1"}));
  CHECK(c.size() == 3 * 13);
  std::set<std::pair<Verdict, bool>> seen;
  for (const auto& ex : c.examples) {
    const auto gene = ex.meta.at("gene");
    const auto region = *parse_region(ex.meta.at("region"));
    const Verdict step1 = gene_ad_verdict(tt, gene);
    const bool step2 = tt.significant_association(gene, region, QtlKind::kEqtl) ||
                       tt.significant_association(gene, region, QtlKind::kSqtl);
    const bool expect = step1 == Verdict::kYes && step2;
    seen.insert({step1, step2});

    const auto chain = compose_region_ad_chain(tt, gene, region, *only({"t4_1"}).all().data());
    REQUIRE(chain.steps.size() == 3);
    CHECK(chain.steps[0].verdict == step1);
    CHECK(chain.steps[1].verdict == (step2 ? Verdict::kYes : Verdict::kNo));
    CHECK(chain.conclusion == (expect ? Verdict::kYes : Verdict::kNo));
    CHECK(chain.steps[2].verdict == chain.conclusion);
    CHECK(ex.output == chain.text);
    CHECK(final_line(ex.output) == (expect ? "Answer: Yes." : "Answer: No."));
    CHECK(ex.output.rfind("Step 1: ", 0) == 0);
    CHECK(ex.output.find("\nStep 2: ") != std::string::npos);
    CHECK(ex.output.find("\nStep 3: ") != std::string::npos);
    if (step1 == Verdict::kUnknown) CHECK(ex.output.find("No curated evidence") != std::string::npos);
  }
  // (yes,yes) (yes,no) (no,yes) (no,no) plus the unknown branch.
  CHECK(seen.count({Verdict::kYes, true}) == 1);
  CHECK(seen.count({Verdict::kYes, false}) == 1);
  CHECK(seen.count({Verdict::kNo, true}) == 1);
  CHECK(seen.count({Verdict::kNo, false}) == 1);
  CHECK(seen.count({Verdict::kUnknown, true}) == 1);

  CHECK(testing::fixture_corpora()[3].size() == 144 * 13 * 3);
}

TEST_CASE("split: sizes, disjointness, determinism") {
  const auto& c1 = testing::fixture_corpora()[0];
  const auto [train, test] = split_corpus(c1, 0.10, 42);
  CHECK(test.size() == 216);
  CHECK(train.size() == 2160 - 216);
  const auto [train2, test2] = split_corpus(c1, 0.10, 42);
  CHECK(test == test2);
  CHECK(train == train2);
  const auto [train3, test3] = split_corpus(c1, 0.10, 43);
  CHECK_FALSE(test == test3);

  std::set<std::pair<std::string, std::string>> a, b;
  for (const auto& ex : train.examples) a.insert({ex.instruction, ex.output});
  for (const auto& ex : test.examples) b.insert({ex.instruction, ex.output});
  for (const auto& k : b) CHECK(a.count(k) == 0);
  CHECK(a.size() + b.size() == c1.size());

  CHECK(split_corpus(testing::fixture_corpora()[1], 0.10, 1).second.size() == 1123);
  CHECK(code_of([&] { split_corpus(c1, 0.0, 1); }) == ErrorCode::kBadFraction);
  CHECK(code_of([&] { split_corpus(c1, 1.0, 1); }) == ErrorCode::kBadFraction);
}

TEST_CASE("jsonl: round trip, line counts, schema errors") {
  testing::TempDir dir("jsonl");
  for (const auto& c : testing::fixture_corpora()) {
    const auto path = dir / (std::string(task_name(c.task)) + ".jsonl");
    export_jsonl(c, path);
    CHECK(import_jsonl(path) == c);
    std::ifstream in(path);
    CHECK(static_cast<std::size_t>(std::count(std::istreambuf_iterator<char>(in), {}, '\n')) == c.size());
  }

  auto line = example_to_json(testing::fixture_corpora()[1].examples.front());
  for (const auto& key : {"system", "instruction", "output", "task", "meta"}) CHECK(line.contains(key));
  line.erase("output");
  std::istringstream bad(line.dump() + "\n");
  CHECK(code_of([&] { read_jsonl(bad); }) == ErrorCode::kSchemaError);

  std::ostringstream mixed;
  write_jsonl(mixed, testing::fixture_corpora()[0]);
  write_jsonl(mixed, testing::fixture_corpora()[2]);
  std::istringstream mixed_in(mixed.str());
  CHECK(code_of([&] { read_jsonl(mixed_in); }) == ErrorCode::kSchemaError);

  CHECK(code_of([&] { import_jsonl(dir / "missing.jsonl"); }) == ErrorCode::kIoError);
}

TEST_CASE("generation is deterministic and described") {
  const auto& kb = testing::fixture_kb();
  for (auto t : kAllTasks) {
    CHECK(generate(kb, defaults(), t, 5) == generate(kb, defaults(), t, 5));
  }
  const auto d = describe(testing::fixture_corpora()[1], kb, defaults());
  CHECK(d["examples"] == 11232);
  CHECK(d["genes"] == 144);
  CHECK(d["regions"] == 13);
  CHECK(d["kinds"] == 2);
  CHECK(d["templates"] == 3);
  CHECK(d["kb_hash"] == kb.hash());
}
