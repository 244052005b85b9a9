// adgpt: command-line driver for the whole pipeline.
//   exit 0 success, 1 domain error ("error: <Code>: message" on stderr), 2 usage error.

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "adgpt/corpora/corpus.hpp"
#include "adgpt/corpora/templates.hpp"
#include "adgpt/engines/engines.hpp"
#include "adgpt/error.hpp"
#include "adgpt/eval/evaluate.hpp"
#include "adgpt/ingest/manifest.hpp"
#include "adgpt/knowledge/assemble.hpp"
#include "adgpt/pipeline.hpp"
#include "adgpt/service/service.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace adgpt;

namespace {

corpora::TemplateSet templates_from(const std::string& path) {
  return path.empty() ? corpora::TemplateSet::defaults() : corpora::TemplateSet::load(path);
}

KnowledgeBase load_kb(const std::string& path, std::optional<double> alpha) {
  auto kb = KnowledgeBase::load(path);
  return alpha ? kb.with_alpha(*alpha) : kb;
}

void write_json(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

service::Service* g_service = nullptr;

void on_signal(int) {
  if (g_service) g_service->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adgpt: Alzheimer's disease gene knowledge base, corpora, router and answer engines"};
  app.require_subcommand(1);

  // ingest
  std::string manifest;
  auto* ingest = app.add_subcommand("ingest", "Parse and validate every file named by a manifest");
  ingest->add_option("--manifest", manifest, "manifest TOML")->required()->check(CLI::ExistingFile);

  // build-kb
  std::string kb_out;
  std::optional<double> alpha;
  auto* build_kb = app.add_subcommand("build-kb", "Build and save the knowledge base snapshot");
  build_kb->add_option("--manifest", manifest, "manifest TOML")->required()->check(CLI::ExistingFile);
  build_kb->add_option("--out", kb_out, "snapshot path")->required();
  build_kb->add_option("--alpha", alpha, "significance threshold (q <= alpha)");

  // gen-corpus
  std::string kb_path, out_path, templates_path;
  int task_no = 0;
  std::uint64_t seed = 0;
  auto* gen = app.add_subcommand("gen-corpus", "Generate one task's instruction corpus as JSONL");
  gen->add_option("--kb", kb_path, "knowledge base snapshot")->required()->check(CLI::ExistingFile);
  gen->add_option("--task", task_no, "task number")->required()->check(CLI::Range(1, 4));
  gen->add_option("--out", out_path, "output JSONL")->required();
  gen->add_option("--templates", templates_path, "template set TOML")->check(CLI::ExistingFile);
  gen->add_option("--seed", seed, "recorded in the metadata sidecar");

  // split
  std::string in_path, train_out, test_out;
  double test_fraction = 0.1;
  auto* split = app.add_subcommand("split", "Deterministic train/test split of a corpus");
  split->add_option("--in", in_path, "input JSONL")->required()->check(CLI::ExistingFile);
  split->add_option("--test-fraction", test_fraction, "fraction held out");
  split->add_option("--seed", seed, "shuffle seed");
  split->add_option("--train-out", train_out, "training JSONL")->required();
  split->add_option("--test-out", test_out, "test JSONL")->required();

  // train-router
  std::vector<std::string> corpus_files;
  double smoothing = 1.0;
  std::optional<double> holdout;
  auto* train = app.add_subcommand("train-router", "Train the task router");
  train->add_option("--kb", kb_path, "knowledge base snapshot (corpora generated from it)")->check(CLI::ExistingFile);
  train->add_option("--corpus", corpus_files, "training JSONL files instead of generated corpora")
      ->check(CLI::ExistingFile);
  train->add_option("--templates", templates_path, "template set TOML")->check(CLI::ExistingFile);
  train->add_option("--smoothing", smoothing, "additive smoothing");
  train->add_option("--holdout", holdout, "score a held-out fraction and train on the rest");
  train->add_option("--seed", seed, "holdout split seed");
  train->add_option("--out", out_path, "model path")->required();

  // evaluate
  std::string router_path, backend_name{engines::kDefaultBackendName}, ratings_path;
  std::vector<std::string> test_files;
  bool serial = false;
  auto* evaluate = app.add_subcommand("evaluate", "Score the answer stack on test corpora");
  evaluate->add_option("--kb", kb_path, "knowledge base snapshot")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--router", router_path, "router model")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--test", test_files, "test JSONL files")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--backend", backend_name, "generative backend");
  evaluate->add_option("--ratings", ratings_path, "expert ratings TSV")->check(CLI::ExistingFile);
  evaluate->add_option("--alpha", alpha, "significance threshold override");
  evaluate->add_flag("--serial", serial, "use the serial reference loop");
  evaluate->add_option("--out", out_path, "report JSON")->required();

  // serve
  std::string config_path, bind;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", config_path, "service TOML")->check(CLI::ExistingFile);
  serve->add_option("--bind", bind, "host:port");
  serve->add_option("--kb", kb_path, "knowledge base snapshot");
  serve->add_option("--router", router_path, "router model");

  // query
  std::string text;
  std::optional<int> force_task;
  auto* query = app.add_subcommand("query", "Answer one query and print the answer as JSON");
  query->add_option("--kb", kb_path, "knowledge base snapshot")->required()->check(CLI::ExistingFile);
  query->add_option("--router", router_path, "router model")->required()->check(CLI::ExistingFile);
  query->add_option("--text", text, "query text")->required();
  query->add_option("--task", force_task, "skip routing")->check(CLI::Range(1, 4));
  query->add_option("--backend", backend_name, "generative backend");
  query->add_option("--alpha", alpha, "significance threshold override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*ingest) {
      const auto data = ingest::ingest_all(ingest::load_manifest(manifest));
      json files = json::object();
      for (std::size_t i = 0; i < data.qtl_files.size(); ++i) {
        files[data.qtl_files[i].file] = data.qtl_rows_per_file[i];
      }
      std::cout << json{{"seed_genes", data.seed.symbols.size()},
                        {"annotations", data.annotations.size()},
                        {"qtl_records", data.qtls.size()},
                        {"molecular_genetics", data.molecular_genetics.size()},
                        {"qtl_rows_per_file", files},
                        {"significance_alpha", data.significance_alpha}}
                       .dump(2)
                << '\n';
    } else if (*build_kb) {
      const auto kb = assemble_knowledge_base(ingest::ingest_all(ingest::load_manifest(manifest)), alpha);
      if (fs::path(kb_out).has_parent_path()) fs::create_directories(fs::path(kb_out).parent_path());
      kb.save(kb_out);
      std::cout << json{{"path", kb_out}, {"kb_hash", kb.hash()}, {"genes", kb.seed().symbols.size()},
                        {"qtl_records", kb.qtl_count()}}
                       .dump(2)
                << '\n';
    } else if (*gen) {
      const auto kb = KnowledgeBase::load(kb_path);
      const auto templates = templates_from(templates_path);
      const auto corpus = corpora::generate(kb, templates, *task_from_number(task_no), seed);
      corpora::export_jsonl(corpus, out_path);
      auto meta = corpora::describe(corpus, kb, templates);
      meta["path"] = out_path;
      write_json(out_path + ".meta.json", meta);
      std::cout << meta.dump(2) << '\n';
    } else if (*split) {
      const auto corpus = corpora::import_jsonl(in_path);
      const auto [tr, te] = corpora::split_corpus(corpus, test_fraction, seed);
      corpora::export_jsonl(tr, train_out);
      corpora::export_jsonl(te, test_out);
      std::cout << json{{"task", task_name(corpus.task)}, {"total", corpus.size()}, {"train", tr.size()},
                        {"test", te.size()}, {"seed", seed}, {"test_fraction", test_fraction}}
                       .dump(2)
                << '\n';
    } else if (*train) {
      std::vector<corpora::Corpus> corpora_in;
      if (!corpus_files.empty()) {
        for (const auto& f : corpus_files) corpora_in.push_back(corpora::import_jsonl(f));
      } else if (!kb_path.empty()) {
        corpora_in = generate_all(KnowledgeBase::load(kb_path), templates_from(templates_path));
      } else {
        std::cerr << "train-router: give --kb or --corpus\n";
        return 2;
      }
      json summary;
      std::optional<router::RouterModel> model;
      if (holdout) {
        auto h = train_with_holdout(corpora_in, *holdout, seed, smoothing);
        summary = {{"train", h.n_train}, {"heldout", h.n_test}, {"heldout_accuracy", h.accuracy}};
        model = std::move(h.model);
      } else {
        const auto examples = labeled_queries(corpora_in);
        model = router::RouterModel::train(examples, smoothing);
        summary = {{"train", examples.size()}};
      }
      if (fs::path(out_path).has_parent_path()) fs::create_directories(fs::path(out_path).parent_path());
      model->save(out_path);
      summary["path"] = out_path;
      summary["router_hash"] = model->hash();
      summary["vocabulary"] = model->vocabulary().size();
      std::cout << summary.dump(2) << '\n';
    } else if (*evaluate) {
      const auto kb = load_kb(kb_path, alpha);
      const auto model = router::RouterModel::load(router_path);
      const auto backend = engines::make_backend(backend_name);
      const engines::Dispatcher dispatcher(kb, model, *backend);
      std::vector<corpora::InstructionExample> test;
      json files = json::array();
      for (const auto& f : test_files) {
        const auto c = corpora::import_jsonl(f);
        test.insert(test.end(), c.examples.begin(), c.examples.end());
        files.push_back({{"path", f}, {"task", task_name(c.task)}, {"examples", c.size()}});
      }
      const auto result = serial ? eval::evaluate_engine_serial(dispatcher, test)
                                 : eval::evaluate_engine(dispatcher, test);
      eval::ReportContext ctx{kb.hash(), model.hash(), backend_name,
                              {{"test_files", files}, {"significance_alpha", kb.significance_alpha()},
                               {"backend", backend_name}}};
      std::optional<eval::RatingSet> ratings;
      if (!ratings_path.empty()) {
        std::ifstream in(ratings_path);
        ratings = eval::parse_ratings(in);
      }
      const auto report = eval::build_report(result, ctx, ratings ? &*ratings : nullptr);
      write_json(out_path, report);
      std::cout << report.dump(2) << '\n';
    } else if (*serve) {
      service::ServiceConfig cfg;
      if (!config_path.empty()) cfg = service::load_service_config(config_path);
      service::apply_env_overrides(cfg);
      if (!bind.empty()) service::parse_bind(bind, cfg);
      if (!kb_path.empty()) cfg.kb_path = kb_path;
      if (!router_path.empty()) cfg.router_path = router_path;
      service::Service svc(cfg);
      g_service = &svc;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << cfg.host << ':' << cfg.port << " kb_hash=" << svc.current()->kb_hash << '\n';
      if (!svc.listen()) throw Error(ErrorCode::kConfigError, "cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
      g_service = nullptr;
    } else if (*query) {
      const auto kb = load_kb(kb_path, alpha);
      const auto model = router::RouterModel::load(router_path);
      const auto backend = engines::make_backend(backend_name);
      const engines::Dispatcher dispatcher(kb, model, *backend);
      const auto answer =
          force_task ? dispatcher.answer_as(*task_from_number(*force_task), text) : dispatcher.dispatch(text);
      auto out = engines::to_json(answer);
      out["kb_hash"] = kb.hash();
      std::cout << out.dump(2) << '\n';
      if (answer.error) {
        std::cerr << "error: " << answer.error->code << ": " << answer.error->message << '\n';
        return 1;
      }
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.code_name() << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
