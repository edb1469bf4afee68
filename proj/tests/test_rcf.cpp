#include <doctest.h>

#include <stdexcept>

#include <random>
#include <vector>

#include "rcf/reference_class.hpp"

using namespace rcf;

namespace {

OverrunSample make_sample(std::string label, std::vector<double> values,
                          Metric metric = Metric::Cost) {
  OverrunSample s;
  s.label = std::move(label);
  s.metric = metric;
  s.values = std::move(values);
  return s;
}

std::vector<double> shifted_normal(std::uint64_t seed, std::size_t n,
                                   double shift) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(shift, 0.4);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

}  // namespace

TEST_CASE("pooling merges compatible groups and isolates shifted ones") {
  std::vector<OverrunSample> groups = {
      make_sample("a", shifted_normal(1, 40, 0.5)),
      make_sample("b", shifted_normal(2, 35, 0.5)),
      make_sample("c", shifted_normal(3, 30, 0.5)),
      make_sample("far", shifted_normal(4, 30, 5.0)),
  };
  auto d = decide_pooling(groups, 0.05);
  REQUIRE(d.partition.size() == 2);
  CHECK(d.partition[0] == std::vector<std::string>{"a", "b", "c"});
  CHECK(d.partition[1] == std::vector<std::string>{"far"});
  // evidence matrix is symmetric in p
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      CHECK(d.evidence.tests[i][j].p_value ==
            doctest::Approx(d.evidence.tests[j][i].p_value));
}

TEST_CASE("pooling is transitive through chains of compatibility") {
  // a~b and b~c merge all three even if a-c alone would separate
  std::vector<OverrunSample> groups = {
      make_sample("a", shifted_normal(26, 40, 0.0)),
      make_sample("b", shifted_normal(1026, 40, 0.2)),
      make_sample("c", shifted_normal(2026, 40, 0.4)),
  };
  auto d = decide_pooling(groups, 0.05);
  bool ab = d.evidence.tests[0][1].p_value >= 0.05;
  bool bc = d.evidence.tests[1][2].p_value >= 0.05;
  bool ac = d.evidence.tests[0][2].p_value >= 0.05;
  REQUIRE((ab && bc && !ac));  // the engineered chain structure
  CHECK(d.partition.size() == 1);  // one pool via b despite a-c separating
}

TEST_CASE("pooling at alpha = 1 only merges identical distributions") {
  std::vector<OverrunSample> groups = {
      make_sample("a", {1.0, 2.0, 3.0}),
      make_sample("b", {10.0, 20.0, 30.0}),
  };
  auto high = decide_pooling(groups, 0.999);
  CHECK(high.partition.size() == 2);
  auto low = decide_pooling(groups, 1e-9);
  CHECK(low.partition.size() == 1);
}

TEST_CASE("pooling rejects empty input") {
  std::vector<OverrunSample> one = {make_sample("a", {1.0})};
  CHECK_THROWS_AS(decide_pooling(one, 0.05), std::domain_error);
  std::vector<OverrunSample> with_empty = {make_sample("a", {1.0}),
                                           make_sample("b", {})};
  CHECK_THROWS_AS(decide_pooling(with_empty, 0.05), std::domain_error);
}

TEST_CASE("reference class pools member samples") {
  auto cls = build_reference_class(
      "test", Metric::Cost,
      {make_sample("a", {0.1, 0.3}), make_sample("b", {0.2, 0.4})});
  CHECK(cls.n == 4);
  CHECK(cls.member_groups == std::vector<std::string>{"a", "b"});
  CHECK(cls.ecdf.min() == doctest::Approx(0.1));
  CHECK(cls.ecdf.max() == doctest::Approx(0.4));
  CHECK_THROWS_AS(
      build_reference_class("empty", Metric::Cost, {make_sample("a", {})}),
      std::domain_error);
}

TEST_CASE("uplift table spans the default 19-level grid") {
  auto cls = build_reference_class(
      "test", Metric::Cost, {make_sample("a", shifted_normal(7, 100, 0.5))});
  auto table = build_uplift_table(cls);
  REQUIRE(table.rows.size() == 19);
  CHECK(table.rows.front().certainty == doctest::Approx(0.05));
  CHECK(table.rows.back().certainty == doctest::Approx(0.95));
  CHECK(table.rows.front().acceptable_chance == doctest::Approx(0.95));
  // uplift is nondecreasing in certainty
  for (std::size_t i = 1; i < table.rows.size(); ++i)
    CHECK(table.rows[i].uplift >= table.rows[i - 1].uplift);
  // P50 uplift is the class median
  CHECK(table.rows[9].uplift == doctest::Approx(cls.ecdf.quantile(0.5)));

  auto single = build_uplift_table(cls, {0.5});
  CHECK(single.rows.size() == 1);
}

TEST_CASE("forecast applies the uplift multiplicatively") {
  auto cls = build_reference_class("test", Metric::Cost,
                                   {make_sample("a", {0.0, 0.5, 1.0})});
  auto f = forecast(10.0, cls, 0.5);
  CHECK(f.uplift == doctest::Approx(0.5));
  CHECK(f.uplifted_estimate == doctest::Approx(15.0));
  // certainty 0 applies the minimum observed overrun
  CHECK(forecast(10.0, cls, 0.0).uplifted_estimate == doctest::Approx(10.0));
  CHECK(forecast(10.0, cls, 1.0).uplifted_estimate == doctest::Approx(20.0));
  CHECK_THROWS_AS(forecast(0.0, cls, 0.5), std::domain_error);
  CHECK_THROWS_AS(forecast(-1.0, cls, 0.5), std::domain_error);
}

TEST_CASE("adequacy discounts embedded contingency") {
  auto cls = build_reference_class("test", Metric::Cost,
                                   {make_sample("a", {0.0, 0.5, 1.0})});
  auto plain = certainty_of_contingency(cls, 0.5, 0.0);
  CHECK(plain.effective_threshold == doctest::Approx(0.5));
  CHECK(plain.certainty == doctest::Approx(0.5));
  auto discounted = certainty_of_contingency(cls, 0.5, 0.25);
  CHECK(discounted.effective_threshold == doctest::Approx(1.5 / 1.25 - 1.0));
  CHECK(discounted.certainty < plain.certainty);
  // huge contingency caps at certainty 1
  CHECK(certainty_of_contingency(cls, 10.0, 0.0).certainty ==
        doctest::Approx(1.0));
  CHECK_THROWS_AS(certainty_of_contingency(cls, -1.5, 0.0), std::domain_error);
}

TEST_CASE("delay cost scales linearly and uses 30.4375 days per month") {
  stats::RegressionFit fit;
  fit.slope = 1.1;
  fit.converged = true;
  auto m = delay_cost(8.229e9, 360.0, fit);
  CHECK(m.cost_per_month == doctest::Approx(8.229e9 * 1.1 / 360.0));
  CHECK(m.cost_per_day == doctest::Approx(m.cost_per_month / 30.4375));

  auto doubled = delay_cost(2 * 8.229e9, 360.0, fit);
  CHECK(doubled.cost_per_month == doctest::Approx(2 * m.cost_per_month));

  fit.slope = 0.0;
  CHECK(delay_cost(1e9, 100.0, fit).cost_per_month == doctest::Approx(0.0));

  stats::RegressionFit bad;
  bad.converged = false;
  CHECK_THROWS_AS(delay_cost(1e9, 100.0, bad), std::domain_error);
  fit.converged = true;
  CHECK_THROWS_AS(delay_cost(1e9, 0.0, fit), std::domain_error);
}

TEST_CASE("class summary reports the documented statistics") {
  auto cls = build_reference_class(
      "test", Metric::Cost, {make_sample("a", {-0.1, 0.0, 0.2, 0.6, 1.0})});
  auto s = summarize_class(cls, 2);
  CHECK(s.n == 5);
  CHECK(s.mean == doctest::Approx(0.34));
  CHECK(s.median == doctest::Approx(0.2));
  CHECK(s.min == doctest::Approx(-0.1));
  CHECK(s.max == doctest::Approx(1.0));
  CHECK(s.positive_fraction == doctest::Approx(0.6));
  CHECK(s.proxy_count == 2);
}
