#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

namespace adgpt::eval {

struct Rating {
  std::string system;  // "" when the file has no system column
  std::string query;
  std::string expert;
  double precision = 0;  // each in [0, 5]
  double relevance = 0;

  friend bool operator==(const Rating&, const Rating&) = default;
};

struct RatingSet {
  std::vector<Rating> ratings;
};

// TSV with header columns query, expert, precision, relevance and an optional
// system column, in any order. Throws MissingColumn, MalformedRow,
// InvalidArgument (score outside [0,5], repeated query/expert pair).
RatingSet parse_ratings(std::istream& in);

struct QueryMeans {
  std::string query;
  double precision = 0;
  double relevance = 0;
};

struct RatingSummary {
  std::vector<QueryMeans> per_query;  // sorted by query id
  double precision = 0;               // mean over queries of per-query means
  double relevance = 0;
  std::size_t experts = 0;
};

// One system's ratings. Every expert must rate the same query set, otherwise
// InvalidArgument; EmptyRatings when there is nothing to aggregate.
RatingSummary aggregate_ratings(const RatingSet& ratings);

// Groups by the system column and aggregates each group.
std::map<std::string, RatingSummary> aggregate_by_system(const RatingSet& ratings);

}  // namespace adgpt::eval
