#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <fstream>
#include <sstream>

#include "rcf/fixture.hpp"
#include "rcf/reference_class.hpp"
#include "rcf/stats.hpp"

using namespace rcf;

TEST_CASE("anchored sample hits its quantile anchors exactly") {
  fixture::AnchoredSampleSpec spec;
  spec.n = 50;
  spec.lo = -1.0;
  spec.hi = 10.0;
  spec.anchors = {{0.2, 0.0}, {0.5, 1.0}, {0.8, 4.0}};
  auto v = fixture::anchored_sample(spec);
  REQUIRE(v.size() == 50);
  stats::Ecdf e(v);
  for (auto [p, t] : spec.anchors)
    CHECK(e.quantile(p) == doctest::Approx(t).epsilon(1e-12));
  CHECK(e.min() == doctest::Approx(-1.0));
  CHECK(e.max() == doctest::Approx(10.0));
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] >= v[i - 1]);
}

TEST_CASE("anchored sample supports tied anchors via plateaus") {
  fixture::AnchoredSampleSpec spec;
  spec.n = 40;
  spec.lo = 0.0;
  spec.hi = 5.0;
  spec.anchors = {{0.3, 1.0}, {0.4, 1.0}, {0.7, 2.0}};
  auto v = fixture::anchored_sample(spec);
  stats::Ecdf e(v);
  CHECK(e.quantile(0.3) == doctest::Approx(1.0));
  CHECK(e.quantile(0.4) == doctest::Approx(1.0));
  CHECK(e.quantile(0.7) == doctest::Approx(2.0));
}

TEST_CASE("nuclear cost sample embodies the reference cost uplift grid") {
  auto v = fixture::nuclear_cost_sample();
  REQUIRE(v.size() == 216);
  stats::Ecdf e(v);
  const auto& targets = fixture::cost_uplift_targets();
  for (std::size_t k = 0; k < targets.size(); ++k) {
    double p = 0.05 * static_cast<double>(k + 1);
    CHECK(e.quantile(p) == doctest::Approx(targets[k]).epsilon(1e-12));
  }
  CHECK(e.min() == doctest::Approx(-0.30));
  CHECK(e.max() == doctest::Approx(19.0));
}

TEST_CASE("nuclear schedule sample embodies the reference schedule grid") {
  auto v = fixture::nuclear_schedule_sample();
  REQUIRE(v.size() == 200);
  stats::Ecdf e(v);
  const auto& targets = fixture::schedule_uplift_targets();
  for (std::size_t k = 0; k < targets.size(); ++k) {
    double p = 0.05 * static_cast<double>(k + 1);
    CHECK(e.quantile(p) == doctest::Approx(targets[k]).epsilon(1e-12));
  }
  CHECK(e.min() == doctest::Approx(-0.15));
  CHECK(e.max() == doctest::Approx(22.0));
}

TEST_CASE("reference dataset has the documented shape") {
  auto ds = fixture::reference_dataset();
  CHECK(ds.currency == "CHF");
  CHECK(ds.basis_year == 2016);
  CHECK(ds.records.size() == 250);
  CHECK(ds.proxy_count() == 3);
  CHECK(ds.usable_cost_count() == 247);  // 216 nuclear + 31 mining

  auto nuclear_cost = filter_class(ds.records, *make_class_filter("nuclear"),
                                   Metric::Cost);
  CHECK(nuclear_cost.sample.values.size() == 216);
  CHECK(nuclear_cost.proxy_count == 3);
  auto nuclear_sched = filter_class(ds.records, *make_class_filter("nuclear"),
                                    Metric::Schedule);
  CHECK(nuclear_sched.sample.values.size() == 200);
  auto mining = filter_class(ds.records, *make_class_filter("mining"),
                             Metric::Cost);
  CHECK(mining.sample.values.size() == 31);
}

TEST_CASE("dataset-level nuclear cost distribution still hits the grid") {
  // splitting the pooled sample over sectors must not change its union
  auto ds = fixture::reference_dataset();
  auto fr = filter_class(ds.records, *make_class_filter("nuclear"), Metric::Cost);
  stats::Ecdf e(fr.sample.values);
  const auto& targets = fixture::cost_uplift_targets();
  for (std::size_t k = 0; k < targets.size(); ++k)
    CHECK(e.quantile(0.05 * static_cast<double>(k + 1)) ==
          doctest::Approx(targets[k]).epsilon(1e-9));
}

TEST_CASE("nuclear sector groups pool for cost; mining stays separate") {
  auto ds = fixture::reference_dataset();
  auto group = [&](const char* name, Metric m) {
    return filter_class(ds.records, *make_class_filter(name), m).sample;
  };
  std::vector<OverrunSample> cost_groups = {
      group("nuclear_power", Metric::Cost), group("storage_hlw", Metric::Cost),
      group("storage_lilw", Metric::Cost), group("mining", Metric::Cost)};
  auto cost = decide_pooling(cost_groups, 0.05);
  REQUIRE(cost.partition.size() == 2);
  CHECK(cost.partition[0].size() == 3);
  CHECK(cost.partition[1] == std::vector<std::string>{"mining"});

  std::vector<OverrunSample> sched_groups = {
      group("nuclear_power", Metric::Schedule),
      group("storage_hlw", Metric::Schedule),
      group("storage_lilw", Metric::Schedule),
      group("mining", Metric::Schedule)};
  auto sched = decide_pooling(sched_groups, 0.05);
  CHECK(sched.partition.size() == 1);  // p >= 0.05 everywhere
}

TEST_CASE("fixture supports the paired schedule/cost regression") {
  auto ds = fixture::reference_dataset();
  std::vector<double> sched, cost;
  for (const auto& r : ds.records) {
    if (r.sector == Sector::Mining) continue;
    if (!r.usable_for_cost() || !r.usable_for_schedule()) continue;
    sched.push_back(overrun(*r.est_duration_months, *r.act_duration_months));
    cost.push_back(overrun(r.est_cost, *r.act_cost));
  }
  CHECK(sched.size() >= 150);
  auto corr = stats::pearson_correlation(sched, cost);
  CHECK(corr.r > 0.2);
  CHECK(corr.p_value < 0.001);
}

TEST_CASE("bundled data file matches the generator") {
  std::ifstream in(RCF_FIXTURE_PATH, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing " RCF_FIXTURE_PATH
                             " - run make_fixture to regenerate");
  std::ostringstream have;
  have << in.rdbuf();
  std::ostringstream want;
  fixture::write_reference_csv(want);
  CHECK_MESSAGE(have.str() == want.str(),
                "data/fixture.csv is stale - run make_fixture to regenerate");
}
