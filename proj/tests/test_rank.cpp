#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>
#include <vector>

#include "rcf/stats.hpp"

using namespace rcf::stats;

TEST_CASE("midranks average over ties") {
  auto r = detail::midranks({3.0, 1.0, 3.0, 2.0});
  CHECK(r[0] == doctest::Approx(3.5));
  CHECK(r[1] == doctest::Approx(1.0));
  CHECK(r[2] == doctest::Approx(3.5));
  CHECK(r[3] == doctest::Approx(2.0));
}

TEST_CASE("small-sample test uses exact enumeration") {
  std::vector<double> a = {1.0, 2.0, 3.0};
  std::vector<double> b = {4.0, 5.0, 6.0};
  auto res = rank_sum_test(a, b);
  CHECK(res.method == RankTestMethod::Exact);
  CHECK(res.statistic_u == doctest::Approx(0.0));
  // most extreme split of 6 values: 2 * 1/C(6,3) = 0.1
  CHECK(res.p_value == doctest::Approx(0.1));
}

TEST_CASE("identical samples give p = 1") {
  std::vector<double> a = {1.0, 2.0, 3.0};
  auto res = rank_sum_test(a, a);
  CHECK(res.p_value == doctest::Approx(1.0));
}

TEST_CASE("degenerate all-equal input is flagged") {
  std::vector<double> a = {5.0, 5.0};
  std::vector<double> b = {5.0, 5.0, 5.0};
  auto res = rank_sum_test(a, b);
  CHECK(res.degenerate);
  CHECK(res.p_value == doctest::Approx(1.0));
}

TEST_CASE("symmetry: swapping samples preserves the p-value") {
  std::vector<double> a = {1.2, 0.4, 2.2, 0.9};
  std::vector<double> b = {1.1, 3.0, 2.5};
  auto ab = rank_sum_test(a, b);
  auto ba = rank_sum_test(b, a);
  CHECK(ab.p_value == doctest::Approx(ba.p_value).epsilon(1e-14));
  // U_a + U_b = n1 * n2
  CHECK(ab.statistic_u + ba.statistic_u == doctest::Approx(12.0));
}

TEST_CASE("exact path agrees with the permutation oracle, with ties") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> value(0, 4);  // forces ties
  for (int trial = 0; trial < 50; ++trial) {
    std::uniform_int_distribution<std::size_t> size(2, 6);
    std::vector<double> a(size(rng)), b(size(rng));
    for (auto& x : a) x = value(rng);
    for (auto& x : b) x = value(rng);
    bool all_same = true;
    for (double x : a)
      if (x != a[0]) all_same = false;
    for (double x : b)
      if (x != a[0]) all_same = false;
    if (all_same) continue;
    auto res = rank_sum_test(a, b);
    REQUIRE(res.method == RankTestMethod::Exact);
    CHECK(res.p_value == doctest::Approx(permutation_oracle(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("large samples switch to the tie-corrected normal approximation") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  std::vector<double> a(40), b(50);
  for (auto& x : a) x = g(rng);
  for (auto& x : b) x = g(rng) + 2.0;  // clearly shifted
  auto res = rank_sum_test(a, b);
  CHECK(res.method == RankTestMethod::NormalApprox);
  CHECK(res.p_value < 1e-6);

  std::vector<double> c(40), d(50);
  for (auto& x : c) x = g(rng);
  for (auto& x : d) x = g(rng);
  auto same = rank_sum_test(c, d);
  CHECK(same.p_value > 0.01);
}

TEST_CASE("normal approximation is continuous with the exact boundary") {
  // same data, sizes 9+9 = 18 (exact) vs 10+9 = 19 (approx): p-values should
  // be in the same ballpark
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::vector<double> a(9), b(9);
  for (auto& x : a) x = g(rng);
  for (auto& x : b) x = g(rng) + 0.8;
  auto exact = rank_sum_test(a, b);
  REQUIRE(exact.method == RankTestMethod::Exact);
  std::vector<double> a2 = a;
  a2.push_back(g(rng));
  auto approx = rank_sum_test(a2, b);
  REQUIRE(approx.method == RankTestMethod::NormalApprox);
  CHECK(std::fabs(exact.p_value - approx.p_value) < 0.2);
}

TEST_CASE("oracle refuses oversized problems and empty samples") {
  std::vector<double> big(10, 1.0), other(5, 2.0);
  CHECK_THROWS_AS(permutation_oracle(big, other), std::domain_error);
  std::vector<double> none;
  CHECK_THROWS_AS(permutation_oracle(none, other), std::domain_error);
  CHECK_THROWS_AS(rank_sum_test(none, other), std::domain_error);
}
