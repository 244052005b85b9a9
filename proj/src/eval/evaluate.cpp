#include "adgpt/eval/evaluate.hpp"

#include <algorithm>
#include <cctype>
#include <iterator>
#include <sstream>
#include <vector>

#include "adgpt/error.hpp"
#include "adgpt/eval/lora.hpp"
#include "adgpt/hashing.hpp"

namespace adgpt::eval {

std::string task1_payload(std::string_view text, std::string_view gene) {
  std::string g;
  for (char c : gene) g += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::istringstream ss{std::string(text)};
  std::string token, out;
  while (ss >> token) {
    for (auto& c : token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    while (!token.empty() && (token.back() == '.' || token.back() == ',' || token.back() == ';')) {
      token.pop_back();
    }
    if (token.empty() || token == g) continue;
    const bool has_digit =
        std::any_of(token.begin(), token.end(), [](unsigned char c) { return std::isdigit(c); });
    const bool symbolic = token == "+" || token == "-" || token == "(+)" || token == "(-)" ||
                          token == "x" || token == "y" || token == "mt";
    if (has_digit || symbolic) {
      if (!out.empty()) out += ' ';
      out += token;
    }
  }
  return out;
}

std::optional<engines::Verdict> gold_verdict(TaskLabel task, std::string_view output) {
  using engines::Verdict;
  auto starts = [](std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; };
  if (task == TaskLabel::kTask4) {
    const auto pos = output.rfind("Answer: ");
    if (pos == std::string_view::npos) return std::nullopt;
    output = output.substr(pos + 8);
  }
  if (starts(output, "Yes")) return Verdict::kYes;
  if (starts(output, "No curated")) return Verdict::kUnknown;
  if (starts(output, "No")) return Verdict::kNo;
  return std::nullopt;
}

TaskScore& TaskScore::operator+=(const TaskScore& o) noexcept {
  n += o.n;
  errors += o.errors;
  routed_correctly += o.routed_correctly;
  counts += o.counts;
  return *this;
}

std::size_t EvaluationResult::total() const noexcept {
  std::size_t n = 0;
  for (const auto& t : tasks) n += t.n;
  return n;
}

std::size_t EvaluationResult::routed_correctly() const noexcept {
  std::size_t n = 0;
  for (const auto& t : tasks) n += t.routed_correctly;
  return n;
}

EvaluationResult& EvaluationResult::operator+=(const EvaluationResult& o) noexcept {
  for (std::size_t i = 0; i < tasks.size(); ++i) tasks[i] += o.tasks[i];
  return *this;
}

TaskScore score_example(const engines::Answer& answer, const corpora::InstructionExample& gold) {
  TaskScore s;
  s.n = 1;
  s.routed_correctly = answer.task == gold.task ? 1 : 0;
  if (!answer.ok()) ++s.errors;
  const bool usable = answer.ok() && answer.task == gold.task;

  if (gold.task == TaskLabel::kTask1) {
    auto it = gold.meta.find("gene");
    const std::string gene = it == gold.meta.end() ? "" : it->second;
    const auto want = task1_payload(gold.output, gene);
    const bool match = usable && !want.empty() && task1_payload(answer.text, gene) == want;
    s.counts.add(match, true);
    return s;
  }
  const auto want = gold_verdict(gold.task, gold.output);
  const bool gold_pos = want == engines::Verdict::kYes;
  bool pred_pos = !gold_pos;  // failures count against the gold label
  if (usable && answer.verdict && want && *answer.verdict == *want) pred_pos = gold_pos;
  s.counts.add(pred_pos, gold_pos);
  return s;
}

EvaluationResult evaluate_engine_serial(const engines::Dispatcher& dispatcher,
                                        std::span<const corpora::InstructionExample> test) {
  EvaluationResult r;
  for (const auto& ex : test) {
    r.tasks[task_number(ex.task) - 1] += score_example(dispatcher.dispatch(ex.instruction), ex);
  }
  return r;
}

EvaluationResult evaluate_engine(const engines::Dispatcher& dispatcher,
                                 std::span<const corpora::InstructionExample> test) {
  EvaluationResult total;
  const auto n = static_cast<std::ptrdiff_t>(test.size());
#pragma omp parallel
  {
    EvaluationResult local;
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const auto& ex = test[static_cast<std::size_t>(i)];
      local.tasks[task_number(ex.task) - 1] += score_example(dispatcher.dispatch(ex.instruction), ex);
    }
#pragma omp critical(adgpt_eval_merge)
    total += local;
  }
  return total;
}

nlohmann::json stats_to_json(const PairedStats& s) {
  return {{"t", s.t},
          {"df", s.df},
          {"p_two_sided", s.p_two_sided},
          {"mean_diff", s.mean_diff},
          {"cohen_d", s.cohen_d},
          {"cohen_d_variant", s.cohen_variant == CohenVariant::kDiffSd ? "diff_sd" : "pooled_sd"},
          {"ci_low", s.ci_low},
          {"ci_high", s.ci_high},
          {"ci_level", s.ci_level}};
}

nlohmann::json ratings_to_json(const RatingSummary& s) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& q : s.per_query) {
    per.push_back({{"query", q.query}, {"precision", q.precision}, {"relevance", q.relevance}});
  }
  return {{"experts", s.experts},
          {"queries", s.per_query.size()},
          {"precision", s.precision},
          {"relevance", s.relevance},
          {"per_query", per}};
}

namespace {

nlohmann::json task_block(const TaskScore& t) {
  nlohmann::json b{{"n", t.n},
                   {"errors", t.errors},
                   {"routing_accuracy", t.n ? static_cast<double>(t.routed_correctly) / t.n : 0.0},
                   {"confusion", {{"tp", t.counts.tp}, {"fp", t.counts.fp}, {"fn", t.counts.fn}, {"tn", t.counts.tn}}}};
  if (t.n) {
    const auto m = metrics(t.counts);
    b["metrics"] = {{"accuracy", m.accuracy}, {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
  } else {
    b["metrics"] = nullptr;
  }
  return b;
}

nlohmann::json paired_block(const RatingSummary& a, const RatingSummary& b, bool precision) {
  std::vector<double> va, vb;
  for (std::size_t i = 0; i < a.per_query.size() && i < b.per_query.size(); ++i) {
    if (a.per_query[i].query != b.per_query[i].query) {
      throw Error(ErrorCode::kInvalidArgument, "ratings: systems were rated on different queries");
    }
    va.push_back(precision ? a.per_query[i].precision : a.per_query[i].relevance);
    vb.push_back(precision ? b.per_query[i].precision : b.per_query[i].relevance);
  }
  if (a.per_query.size() != b.per_query.size()) {
    throw Error(ErrorCode::kLengthMismatch, "ratings: systems were rated on different query counts");
  }
  return {{"diff_sd", stats_to_json(paired_t_test(va, vb, 0.95, CohenVariant::kDiffSd))},
          {"pooled_sd", stats_to_json(paired_t_test(va, vb, 0.95, CohenVariant::kPooledSd))}};
}

}  // namespace

nlohmann::json build_report(const EvaluationResult& result, const ReportContext& ctx,
                            const RatingSet* ratings) {
  nlohmann::json tasks = nlohmann::json::object();
  for (auto t : kAllTasks) tasks[std::string(task_name(t))] = task_block(result.at(t));

  nlohmann::json statistics = nlohmann::json::object();
  if (ratings) {
    const auto by_system = aggregate_by_system(*ratings);
    nlohmann::json systems = nlohmann::json::object();
    for (const auto& [name, summary] : by_system) systems[name] = ratings_to_json(summary);
    statistics["ratings"] = systems;
    if (by_system.size() == 2) {
      const auto& [name_a, sum_a] = *by_system.begin();
      const auto& [name_b, sum_b] = *std::next(by_system.begin());
      statistics["paired"] = {{"a", name_a},
                              {"b", name_b},
                              {"precision", paired_block(sum_a, sum_b, true)},
                              {"relevance", paired_block(sum_a, sum_b, false)}};
    }
  }

  const std::size_t n = result.total();
  return {{"report_schema_version", kReportSchemaVersion},
          {"n_examples", n},
          {"routing_accuracy", n ? static_cast<double>(result.routed_correctly()) / n : 0.0},
          {"tasks", tasks},
          {"statistics", statistics},
          {"lora", lora_report()},
          {"kb_hash", ctx.kb_hash},
          {"router_hash", ctx.router_hash},
          {"backend", ctx.backend},
          {"config", ctx.config},
          {"config_fingerprint", sha256_hex(ctx.config.dump())}};
}

}  // namespace adgpt::eval
