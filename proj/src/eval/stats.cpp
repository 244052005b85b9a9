#include "adgpt/eval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>
#include <vector>
#include <string>

#include "adgpt/error.hpp"

namespace adgpt::eval {
namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_cf(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double qab = a + b, qap = a + 1, qam = a - 1;
  double c = 1, d = 1 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1 / d;
  double h = d;
  for (int m = 1; m <= 100000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1) < kEps) break;
  }
  return h;
}

struct Moments {
  std::size_t n;
  double mean;
  double sd;  // n - 1 denominator
};

Moments moments(std::span<const double> v) {
  double mean = 0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {v.size(), mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

void check_pair(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch, "paired samples differ in length (" +
                                                std::to_string(a.size()) + " vs " +
                                                std::to_string(b.size()) + ")");
  }
  if (a.size() < 2) throw Error(ErrorCode::kInvalidArgument, "paired test needs n >= 2");
}

Moments diff_moments(std::span<const double> a, std::span<const double> b) {
  check_pair(a, b);
  std::vector<double> d(a.size());
  double scale = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d[i] = b[i] - a[i];
    scale = std::max({scale, std::fabs(a[i]), std::fabs(b[i])});
  }
  auto m = moments(d);
  if (!(m.sd > 1e-12 * std::max(scale, 1.0))) {
    throw Error(ErrorCode::kZeroVariance, "paired differences have zero variance");
  }
  return m;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0)) throw Error(ErrorCode::kInvalidArgument, "incomplete beta needs a, b > 0");
  if (!(x >= 0 && x <= 1)) throw Error(ErrorCode::kInvalidArgument, "incomplete beta needs x in [0,1]");
  if (x == 0 || x == 1) return x;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1) / (a + b + 2)) return front * beta_cf(a, b, x) / a;
  return 1 - front * beta_cf(b, a, 1 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0)) throw Error(ErrorCode::kInvalidArgument, "degrees of freedom must be positive");
  if (std::isinf(t)) return 0;
  return incomplete_beta(df / 2, 0.5, df / (df + t * t));
}

double student_t_cdf(double t, double df) {
  const double tail = student_t_two_sided_p(t, df) / 2;
  return t < 0 ? tail : 1 - tail;
}

double student_t_quantile(double p, double df) {
  if (!(p > 0 && p < 1)) throw Error(ErrorCode::kInvalidArgument, "quantile needs p in (0,1)");
  if (p == 0.5) return 0;
  if (p < 0.5) return -student_t_quantile(1 - p, df);
  double lo = 0, hi = 1;
  while (student_t_cdf(hi, df) < p) {
    lo = hi;
    hi *= 2;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = lo + (hi - lo) / 2;
    (student_t_cdf(mid, df) < p ? lo : hi) = mid;
  }
  return lo + (hi - lo) / 2;
}

double cohens_d_paired(std::span<const double> a, std::span<const double> b, CohenVariant variant) {
  const auto d = diff_moments(a, b);
  if (variant == CohenVariant::kDiffSd) return d.mean / d.sd;
  const auto ma = moments(a), mb = moments(b);
  const double pooled = std::sqrt((ma.sd * ma.sd + mb.sd * mb.sd) / 2);
  if (!(pooled > 0)) throw Error(ErrorCode::kZeroVariance, "both samples have zero variance");
  return d.mean / pooled;
}

std::pair<double, double> ci_mean_diff(std::span<const double> a, std::span<const double> b,
                                       double level) {
  if (!(level > 0 && level < 1)) throw Error(ErrorCode::kInvalidArgument, "CI level must be in (0,1)");
  const auto d = diff_moments(a, b);
  const double half =
      student_t_quantile((1 + level) / 2, static_cast<double>(d.n - 1)) * d.sd /
      std::sqrt(static_cast<double>(d.n));
  return {d.mean - half, d.mean + half};
}

PairedStats paired_t_test(std::span<const double> a, std::span<const double> b, double ci_level,
                          CohenVariant variant) {
  const auto d = diff_moments(a, b);
  PairedStats s;
  s.df = static_cast<int>(d.n - 1);
  s.mean_diff = d.mean;
  s.t = d.mean / (d.sd / std::sqrt(static_cast<double>(d.n)));
  s.p_two_sided = student_t_two_sided_p(s.t, s.df);
  s.cohen_d = cohens_d_paired(a, b, variant);
  s.cohen_variant = variant;
  std::tie(s.ci_low, s.ci_high) = ci_mean_diff(a, b, ci_level);
  s.ci_level = ci_level;
  return s;
}

}  // namespace adgpt::eval
