#pragma once

#include <span>
#include <utility>

namespace adgpt::eval {

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

double student_t_cdf(double t, double df);
double student_t_two_sided_p(double t, double df);
// Inverse CDF for p in (0, 1).
double student_t_quantile(double p, double df);

enum class CohenVariant { kDiffSd, kPooledSd };

struct PairedStats {
  double t = 0;
  int df = 0;
  double p_two_sided = 1;
  double mean_diff = 0;
  double cohen_d = 0;
  CohenVariant cohen_variant = CohenVariant::kDiffSd;
  double ci_low = 0, ci_high = 0;
  double ci_level = 0.95;
};

// Differences are d_i = b_i - a_i. Throws LengthMismatch, InvalidArgument
// (n < 2 or level outside (0,1)) or ZeroVariance.
PairedStats paired_t_test(std::span<const double> a, std::span<const double> b,
                          double ci_level = 0.95, CohenVariant variant = CohenVariant::kDiffSd);
double cohens_d_paired(std::span<const double> a, std::span<const double> b, CohenVariant variant);
std::pair<double, double> ci_mean_diff(std::span<const double> a, std::span<const double> b,
                                       double level);

}  // namespace adgpt::eval
