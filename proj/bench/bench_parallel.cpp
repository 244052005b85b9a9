// Serial reference vs OpenMP fan-out for evaluation and batch routing.
#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "adgpt/eval/evaluate.hpp"
#include "adgpt/ingest/manifest.hpp"
#include "adgpt/knowledge/assemble.hpp"
#include "adgpt/pipeline.hpp"

using namespace adgpt;
using Clock = std::chrono::steady_clock;

template <typename F>
double best_ms(int reps, F&& f) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    f();
    best = std::min(best, std::chrono::duration<double, std::milli>(Clock::now() - t0).count());
  }
  return best;
}

int main(int argc, char** argv) {
  const std::filesystem::path manifest = argc > 1 ? argv[1] : ADGPT_FIXTURE_DIR "/manifest.toml";
  const int reps = argc > 2 ? std::atoi(argv[2]) : 5;

  const auto kb = assemble_knowledge_base(ingest::ingest_all(ingest::load_manifest(manifest)));
  const auto corpora = generate_all(kb, corpora::TemplateSet::defaults());
  const auto router = router::RouterModel::train(labeled_queries(corpora));
  const engines::GroundedTemplateBackend backend;
  const engines::Dispatcher disp(kb, router, backend);

  std::vector<corpora::InstructionExample> all;
  std::vector<std::string> texts;
  for (const auto& c : corpora) {
    all.insert(all.end(), c.examples.begin(), c.examples.end());
    for (const auto& ex : c.examples) texts.push_back(ex.instruction);
  }

#ifdef _OPENMP
  const int threads = omp_get_max_threads();
#else
  const int threads = 1;
#endif
  std::printf("examples=%zu threads=%d reps=%d (best of)\n", all.size(), threads, reps);

  eval::EvaluationResult rs, rp;
  const double es = best_ms(reps, [&] { rs = eval::evaluate_engine_serial(disp, all); });
  const double ep = best_ms(reps, [&] { rp = eval::evaluate_engine(disp, all); });
  std::printf("evaluate        serial %9.2f ms  parallel %9.2f ms  speedup %.2fx  %s\n", es, ep, es / ep,
              rs == rp ? "identical" : "MISMATCH");

  std::vector<TaskLabel> cs, cp;
  const double ks = best_ms(reps, [&] { cs = router.classify_all_serial(texts); });
  const double kp = best_ms(reps, [&] { cp = router.classify_all(texts); });
  std::printf("classify_all    serial %9.2f ms  parallel %9.2f ms  speedup %.2fx  %s\n", ks, kp, ks / kp,
              cs == cp ? "identical" : "MISMATCH");
  return rs == rp && cs == cp ? 0 : 1;
}
