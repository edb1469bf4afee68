#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rcf::stats {

// Empirical distribution of a sample, with a continuous quantile operator
// (linear interpolation of order statistics at h = (n-1)p) and its inverse.
// The two operators are exact inverses of each other away from tied values,
// which keeps certainty lookups and uplift lookups consistent.
class Ecdf {
 public:
  // Sorts the input. Throws std::domain_error on an empty sample.
  explicit Ecdf(std::vector<double> values);

  // Fraction of the distribution at or below x: 0 below the minimum,
  // 1 at and above the maximum, linearly interpolated in between as the
  // inverse of quantile(). Ties map to the upper edge of their plateau.
  double evaluate(double x) const;

  // Order-statistic quantile with linear interpolation:
  // h = (n-1)p, result = v[floor(h)] + frac(h) * (v[floor(h)+1] - v[floor(h)]).
  // Throws std::domain_error for p outside [0,1].
  double quantile(double p) const;

  std::size_t size() const { return values_.size(); }
  double min() const { return values_.front(); }
  double max() const { return values_.back(); }
  const std::vector<double>& sorted_values() const { return values_; }

 private:
  std::vector<double> values_;  // nondecreasing
};

double median(std::span<const double> values);

enum class RankTestMethod { Exact, NormalApprox };

struct RankTestResult {
  double statistic_u = 0.0;  // U of the first sample
  double p_value = 1.0;      // two-sided
  RankTestMethod method = RankTestMethod::Exact;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool degenerate = false;  // all pooled values identical
};

// Two-sided Mann-Whitney rank-sum test with midranks for ties. Uses full
// enumeration of group assignments when n1 + n2 <= 18, otherwise the normal
// approximation with tie-corrected variance and continuity correction.
RankTestResult rank_sum_test(std::span<const double> a, std::span<const double> b);

// Independent oracle: exact two-sided p by enumerating all C(n1+n2, n1)
// group assignments of the pooled values and comparing rank sums.
// Throws std::domain_error when n1 + n2 > 14.
double permutation_oracle(std::span<const double> a, std::span<const double> b);

struct CorrelationResult {
  double r = 0.0;
  double p_value = 1.0;  // two-sided, Student-t
  std::size_t n = 0;
};

CorrelationResult pearson_correlation(std::span<const double> x,
                                      std::span<const double> y);

enum class FitMethod { Ols, IrlsHuber };

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_ci_low = 0.0;   // 95% band
  double slope_ci_high = 0.0;
  FitMethod method = FitMethod::Ols;
  std::size_t n = 0;
  bool converged = false;
  int iterations = 0;
};

// Ordinary least squares; 95% slope CI from the classical standard error.
RegressionFit ols_fit(std::span<const double> x, std::span<const double> y);

// Huber-weighted iteratively reweighted least squares. Residuals are scaled
// by MAD * 1.4826 with tuning constant 1.345; iterates until the slope moves
// by < 1e-8 or 50 iterations. The 95% slope CI comes from a seeded
// pair-resampling percentile bootstrap (bootstrap_reps replicates; 0 skips
// the bootstrap and reports a zero-width band at the point estimate).
RegressionFit irls_fit(std::span<const double> x, std::span<const double> y,
                       std::uint64_t seed, int bootstrap_reps = 2000);

// OLS of overrun on decision year, for the "has risk decreased over time"
// check: no decrease unless the slope CI is entirely below zero.
RegressionFit trend_fit(std::span<const double> decision_years,
                        std::span<const double> overruns);

namespace detail {

// Regularized incomplete beta function I_x(a, b), continued-fraction
// evaluation, absolute tolerance ~1e-10.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided tail probability of Student's t with nu degrees of freedom.
double student_t_two_sided(double t, double nu);

// Upper quantile t such that P(T <= t) = p, by bisection.
double student_t_quantile(double p, double nu);

double normal_cdf(double z);

// Deterministic substream derivation for seeded bootstrap replicates.
std::uint64_t splitmix64(std::uint64_t x);

// Midranks of the pooled vector (average rank across ties, 1-based).
std::vector<double> midranks(std::vector<double> pooled);

}  // namespace detail

}  // namespace rcf::stats
