#include "rcf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

namespace rcf::stats {

namespace detail {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

namespace {

double log_gamma(double x) { return std::lgamma(x); }

// Continued fraction for the incomplete beta function (Lentz's method).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = log_gamma(a + b) - log_gamma(a) - log_gamma(b) +
                    a * std::log(x) + b * std::log1p(-x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double nu) {
  if (!std::isfinite(t)) return std::numeric_limits<double>::min();
  double x = nu / (nu + t * t);
  double p = regularized_incomplete_beta(nu / 2.0, 0.5, x);
  return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

double student_t_quantile(double p, double nu) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("t quantile needs p in (0,1)");
  if (p == 0.5) return 0.0;
  bool upper = p > 0.5;
  double target = upper ? p : 1.0 - p;
  auto cdf = [nu](double t) {
    // one-sided CDF for t >= 0
    return 1.0 - 0.5 * regularized_incomplete_beta(nu / 2.0, 0.5, nu / (nu + t * t));
  };
  double lo = 0.0, hi = 1.0;
  while (cdf(hi) < target) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (cdf(mid) < target ? lo : hi) = mid;
  }
  double t = 0.5 * (lo + hi);
  return upper ? t : -t;
}

std::vector<double> midranks(std::vector<double> pooled) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&pooled](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based midrank
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace detail

Ecdf::Ecdf(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::domain_error("empirical CDF of an empty sample");
  std::sort(values_.begin(), values_.end());
}

double Ecdf::evaluate(double x) const {
  if (x < values_.front()) return 0.0;
  if (x >= values_.back()) return 1.0;
  const std::size_t n = values_.size();
  // Last order statistic <= x; ties collapse to the top of their plateau.
  auto it = std::upper_bound(values_.begin(), values_.end(), x);
  std::size_t j = static_cast<std::size_t>(it - values_.begin()) - 1;
  double h = static_cast<double>(j);
  if (values_[j] < x) h += (x - values_[j]) / (values_[j + 1] - values_[j]);
  return h / static_cast<double>(n - 1);
}

double Ecdf::quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("quantile needs p in [0,1]");
  const std::size_t n = values_.size();
  double h = p * static_cast<double>(n - 1);
  auto i = static_cast<std::size_t>(h);
  if (i + 1 >= n) return values_.back();
  double frac = h - static_cast<double>(i);
  return values_[i] + frac * (values_[i + 1] - values_[i]);
}

double median(std::span<const double> values) {
  return Ecdf(std::vector<double>(values.begin(), values.end())).quantile(0.5);
}

namespace {

constexpr std::size_t kExactEnumerationLimit = 18;

// Counts assignments whose U statistic is at least as far from the null
// mean as the observed one, over all C(N, n1) choices of group membership.
double exact_two_sided_p(const std::vector<double>& ranks, std::size_t n1,
                         double observed_u) {
  const std::size_t n = ranks.size();
  const std::size_t n2 = n - n1;
  const double mean_u = 0.5 * static_cast<double>(n1 * n2);
  const double d_obs = std::fabs(observed_u - mean_u);
  const double min_rank_sum = 0.5 * static_cast<double>(n1 * (n1 + 1));

  std::vector<std::size_t> idx(n1);
  std::iota(idx.begin(), idx.end(), 0);
  std::uint64_t extreme = 0, total = 0;
  while (true) {
    double r1 = 0.0;
    for (std::size_t i : idx) r1 += ranks[i];
    double u = r1 - min_rank_sum;
    if (std::fabs(u - mean_u) >= d_obs - 1e-9) ++extreme;
    ++total;
    // next combination
    std::size_t k = n1;
    while (k > 0 && idx[k - 1] == n - n1 + k - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < n1; ++j) idx[j] = idx[j - 1] + 1;
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

}  // namespace

RankTestResult rank_sum_test(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw std::domain_error("rank-sum test needs nonempty samples");
  const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<double> ranks = detail::midranks(pooled);

  double r1 = std::accumulate(ranks.begin(), ranks.begin() + n1, 0.0);
  double u1 = r1 - 0.5 * static_cast<double>(n1 * (n1 + 1));

  RankTestResult res;
  res.statistic_u = u1;
  res.n1 = n1;
  res.n2 = n2;

  bool all_equal = std::all_of(pooled.begin(), pooled.end(),
                               [&pooled](double v) { return v == pooled.front(); });
  if (all_equal) {
    res.degenerate = true;
    res.p_value = 1.0;
    res.method = n <= kExactEnumerationLimit ? RankTestMethod::Exact
                                             : RankTestMethod::NormalApprox;
    return res;
  }

  if (n <= kExactEnumerationLimit) {
    res.method = RankTestMethod::Exact;
    res.p_value = exact_two_sided_p(ranks, n1, u1);
    return res;
  }

  res.method = RankTestMethod::NormalApprox;
  double mean_u = 0.5 * static_cast<double>(n1) * static_cast<double>(n2);
  // tie correction over pooled value multiplicities
  std::sort(pooled.begin(), pooled.end());
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && pooled[j + 1] == pooled[i]) ++j;
    double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  double nn = static_cast<double>(n);
  double var_u = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                 ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
  if (var_u <= 0.0) {
    res.degenerate = true;
    res.p_value = 1.0;
    return res;
  }
  double z = (std::fabs(u1 - mean_u) - 0.5) / std::sqrt(var_u);
  if (z < 0.0) z = 0.0;
  double p = std::erfc(z / std::sqrt(2.0));
  res.p_value = std::clamp(p, std::numeric_limits<double>::min(), 1.0);
  return res;
}

double permutation_oracle(std::span<const double> a, std::span<const double> b) {
  const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;
  if (n1 == 0 || n2 == 0)
    throw std::domain_error("permutation oracle needs nonempty samples");
  if (n > 14)
    throw std::domain_error("permutation oracle refuses n1+n2 > 14");

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());

  // Ranks by direct counting, independent of the sort-based midranks above.
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (pooled[j] < pooled[i]) ++less;
      if (pooled[j] == pooled[i]) ++equal;
    }
    ranks[i] = static_cast<double>(less) + 0.5 * static_cast<double>(equal + 1);
  }

  double observed = 0.0;
  for (std::size_t i = 0; i < n1; ++i) observed += ranks[i];
  const double expected = 0.5 * static_cast<double>(n1) * static_cast<double>(n + 1);
  const double d_obs = std::fabs(observed - expected);

  std::uint64_t extreme = 0, total = 0;
  std::vector<std::size_t> idx(n1);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    double rsum = 0.0;
    for (std::size_t i : idx) rsum += ranks[i];
    if (std::fabs(rsum - expected) >= d_obs - 1e-9) ++extreme;
    ++total;
    std::size_t k = n1;
    while (k > 0 && idx[k - 1] == n - n1 + k - 1) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < n1; ++j) idx[j] = idx[j - 1] + 1;
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

CorrelationResult pearson_correlation(std::span<const double> x,
                                      std::span<const double> y) {
  if (x.size() != y.size()) throw std::domain_error("length mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw std::domain_error("correlation needs n >= 3");
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw std::domain_error("correlation needs nonzero variance");
  CorrelationResult res;
  res.n = n;
  res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  double nu = static_cast<double>(n - 2);
  double denom = 1.0 - res.r * res.r;
  double t = denom <= 0.0 ? std::numeric_limits<double>::infinity()
                          : res.r * std::sqrt(nu / denom);
  res.p_value = detail::student_t_two_sided(t, nu);
  return res;
}

namespace {

struct LinePoint {
  double slope, intercept;
};

// Weighted least squares line; weights all 1 gives OLS.
LinePoint weighted_line(std::span<const double> x, std::span<const double> y,
                        std::span<const double> w) {
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    swx += w[i] * x[i];
    swy += w[i] * y[i];
    swxx += w[i] * x[i] * x[i];
    swxy += w[i] * x[i] * y[i];
  }
  double denom = sw * swxx - swx * swx;
  if (denom == 0.0) throw std::domain_error("degenerate x in regression");
  LinePoint lp;
  lp.slope = (sw * swxy - swx * swy) / denom;
  lp.intercept = (swy - lp.slope * swx) / sw;
  return lp;
}

// Point estimate only; shared by irls_fit and its bootstrap replicates.
RegressionFit irls_point(std::span<const double> x, std::span<const double> y) {
  constexpr double kHuberC = 1.345;
  constexpr double kMadScale = 1.4826;
  constexpr double kSlopeTol = 1e-8;
  constexpr int kMaxIter = 50;

  const std::size_t n = x.size();
  std::vector<double> w(n, 1.0);
  LinePoint lp = weighted_line(x, y, w);

  RegressionFit fit;
  fit.method = FitMethod::IrlsHuber;
  fit.n = n;
  std::vector<double> resid(n), absdev(n);
  for (int iter = 1; iter <= kMaxIter; ++iter) {
    fit.iterations = iter;
    for (std::size_t i = 0; i < n; ++i) resid[i] = y[i] - lp.slope * x[i] - lp.intercept;
    double med = median(resid);
    for (std::size_t i = 0; i < n; ++i) absdev[i] = std::fabs(resid[i] - med);
    double scale = kMadScale * median(absdev);
    if (scale < 1e-12) {  // (near-)exact fit: nothing left to reweight
      fit.converged = true;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) {
      double r = std::fabs(resid[i]) / scale;
      w[i] = r <= kHuberC ? 1.0 : kHuberC / r;
    }
    LinePoint next = weighted_line(x, y, w);
    bool done = std::fabs(next.slope - lp.slope) < kSlopeTol;
    lp = next;
    if (done) {
      fit.converged = true;
      break;
    }
  }
  fit.slope = lp.slope;
  fit.intercept = lp.intercept;
  fit.slope_ci_low = fit.slope_ci_high = lp.slope;
  return fit;
}

}  // namespace

RegressionFit ols_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::domain_error("length mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw std::domain_error("regression needs n >= 3");
  std::vector<double> w(n, 1.0);
  LinePoint lp = weighted_line(x, y, w);

  double sxx = 0, mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    double r = y[i] - lp.slope * x[i] - lp.intercept;
    ssr += r * r;
  }
  double se = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  double tcrit = se > 0 ? detail::student_t_quantile(0.975, static_cast<double>(n - 2))
                        : 0.0;
  RegressionFit fit;
  fit.method = FitMethod::Ols;
  fit.n = n;
  fit.slope = lp.slope;
  fit.intercept = lp.intercept;
  fit.slope_ci_low = lp.slope - tcrit * se;
  fit.slope_ci_high = lp.slope + tcrit * se;
  fit.converged = true;
  fit.iterations = 1;
  return fit;
}

RegressionFit irls_fit(std::span<const double> x, std::span<const double> y,
                       std::uint64_t seed, int bootstrap_reps) {
  if (x.size() != y.size()) throw std::domain_error("length mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw std::domain_error("regression needs n >= 3");

  RegressionFit fit = irls_point(x, y);
  if (!fit.converged || bootstrap_reps <= 0) return fit;

  // Pair-resampling percentile bootstrap. Each replicate derives its RNG
  // substream from the root seed by index, so results are independent of
  // evaluation order.
  std::vector<double> slopes;
  slopes.reserve(bootstrap_reps);
  std::vector<double> bx(n), by(n);
  const std::uint64_t stream_base = detail::splitmix64(seed);
  for (int rep = 0; rep < bootstrap_reps; ++rep) {
    std::mt19937_64 rng(
        detail::splitmix64(stream_base + static_cast<std::uint64_t>(rep)));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = pick(rng);
      bx[i] = x[j];
      by[i] = y[j];
    }
    try {
      RegressionFit b = irls_point(bx, by);
      if (b.converged) slopes.push_back(b.slope);
    } catch (const std::domain_error&) {
      // degenerate resample (all x equal); skip
    }
  }
  if (slopes.size() >= 2) {
    Ecdf dist(std::move(slopes));
    fit.slope_ci_low = std::min(dist.quantile(0.025), fit.slope);
    fit.slope_ci_high = std::max(dist.quantile(0.975), fit.slope);
  }
  return fit;
}

RegressionFit trend_fit(std::span<const double> decision_years,
                        std::span<const double> overruns) {
  return ols_fit(decision_years, overruns);
}

}  // namespace rcf::stats
