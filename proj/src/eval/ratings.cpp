#include "adgpt/eval/ratings.hpp"

#include <charconv>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "adgpt/error.hpp"

namespace adgpt::eval {
namespace {

std::vector<std::string> split_tsv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, '\t')) {
    const auto b = field.find_first_not_of(' ');
    const auto e = field.find_last_not_of(' ');
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == '\t') out.emplace_back();
  return out;
}

std::optional<double> to_double(const std::string& s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

RatingSet parse_ratings(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    header = split_tsv(line);
    break;
  }
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };
  auto require = [&](const std::string& name) {
    auto c = column(name);
    if (!c) throw Error(ErrorCode::kMissingColumn, "ratings: missing column '" + name + "'");
    return *c;
  };
  const auto q_col = require("query"), e_col = require("expert");
  const auto p_col = require("precision"), r_col = require("relevance");
  const auto s_col = column("system");

  RatingSet set;
  std::set<std::tuple<std::string, std::string, std::string>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto f = split_tsv(line);
    const std::string where = " at line " + std::to_string(line_no);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::kMalformedRow, "ratings: expected " + std::to_string(header.size()) +
                                                " fields, found " + std::to_string(f.size()) + where);
    }
    Rating r;
    r.system = s_col ? f[*s_col] : "";
    r.query = f[q_col];
    r.expert = f[e_col];
    if (r.query.empty() || r.expert.empty()) {
      throw Error(ErrorCode::kMalformedRow, "ratings: empty query or expert id" + where);
    }
    const auto p = to_double(f[p_col]), rel = to_double(f[r_col]);
    if (!p || !rel) throw Error(ErrorCode::kMalformedRow, "ratings: non-numeric score" + where);
    if (!(*p >= 0 && *p <= 5) || !(*rel >= 0 && *rel <= 5)) {
      throw Error(ErrorCode::kInvalidArgument, "ratings: score outside [0,5]" + where);
    }
    r.precision = *p;
    r.relevance = *rel;
    if (!seen.emplace(r.system, r.query, r.expert).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ratings: expert '" + r.expert + "' rated query '" + r.query + "' twice" + where);
    }
    set.ratings.push_back(std::move(r));
  }
  return set;
}

RatingSummary aggregate_ratings(const RatingSet& ratings) {
  if (ratings.ratings.empty()) throw Error(ErrorCode::kEmptyRatings, "no ratings to aggregate");
  std::map<std::string, std::set<std::string>> queries_by_expert;
  struct Acc {
    double p = 0, r = 0;
    std::size_t n = 0;
  };
  std::map<std::string, Acc> by_query;
  for (const auto& x : ratings.ratings) {
    queries_by_expert[x.expert].insert(x.query);
    auto& a = by_query[x.query];
    a.p += x.precision;
    a.r += x.relevance;
    ++a.n;
  }
  const auto& reference = queries_by_expert.begin()->second;
  for (const auto& [expert, qs] : queries_by_expert) {
    if (qs != reference) {
      throw Error(ErrorCode::kInvalidArgument,
                  "ratings: expert '" + expert + "' did not rate the same query set as '" +
                      queries_by_expert.begin()->first + "'");
    }
  }
  RatingSummary s;
  s.experts = queries_by_expert.size();
  for (const auto& [query, a] : by_query) {
    const double n = static_cast<double>(a.n);
    s.per_query.push_back({query, a.p / n, a.r / n});
    s.precision += a.p / n;
    s.relevance += a.r / n;
  }
  s.precision /= static_cast<double>(s.per_query.size());
  s.relevance /= static_cast<double>(s.per_query.size());
  return s;
}

std::map<std::string, RatingSummary> aggregate_by_system(const RatingSet& ratings) {
  if (ratings.ratings.empty()) throw Error(ErrorCode::kEmptyRatings, "no ratings to aggregate");
  std::map<std::string, RatingSet> groups;
  for (const auto& r : ratings.ratings) groups[r.system].ratings.push_back(r);
  std::map<std::string, RatingSummary> out;
  for (const auto& [system, set] : groups) out.emplace(system, aggregate_ratings(set));
  return out;
}

}  // namespace adgpt::eval
