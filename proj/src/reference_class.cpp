#include "rcf/reference_class.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace rcf {

PoolingDecision decide_pooling(const std::vector<OverrunSample>& groups,
                               double alpha) {
  const std::size_t k = groups.size();
  if (k < 2) throw std::domain_error("pooling needs at least two groups");
  for (const auto& g : groups)
    if (g.values.empty())
      throw std::domain_error("pooling group '" + g.label + "' is empty");

  PoolingEvidence ev;
  ev.labels.reserve(k);
  for (const auto& g : groups) ev.labels.push_back(g.label);
  ev.tests.assign(k, std::vector<stats::RankTestResult>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      auto res = stats::rank_sum_test(groups[i].values, groups[j].values);
      ev.tests[i][j] = res;
      std::swap(res.n1, res.n2);
      ev.tests[j][i] = res;
    }
  }

  // Connected components of the compatibility graph (p >= alpha).
  std::vector<std::size_t> comp(k);
  std::iota(comp.begin(), comp.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t a) {
    while (comp[a] != a) a = comp[a] = comp[comp[a]];
    return a;
  };
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (ev.tests[i][j].p_value >= alpha) comp[find(i)] = find(j);

  Partition partition;
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t r = find(i);
    auto it = std::find(roots.begin(), roots.end(), r);
    std::size_t slot;
    if (it == roots.end()) {
      roots.push_back(r);
      partition.emplace_back();
      slot = roots.size() - 1;
    } else {
      slot = static_cast<std::size_t>(it - roots.begin());
    }
    partition[slot].push_back(groups[i].label);
  }
  return {std::move(partition), std::move(ev)};
}

ReferenceClass build_reference_class(const std::string& name, Metric metric,
                                     const std::vector<OverrunSample>& samples) {
  std::vector<double> pooled;
  std::vector<std::string> members;
  for (const auto& s : samples) {
    pooled.insert(pooled.end(), s.values.begin(), s.values.end());
    members.push_back(s.label);
  }
  if (pooled.empty())
    throw std::domain_error("reference class '" + name + "' has no observations");

  PoolingEvidence ev;
  if (samples.size() >= 2) {
    ev = decide_pooling(samples, 0.0).evidence;  // alpha irrelevant for evidence
  } else {
    ev.labels = members;
  }
  std::size_t n = pooled.size();
  return ReferenceClass{name, metric, std::move(members),
                        stats::Ecdf(std::move(pooled)), n, std::move(ev)};
}

double uplift_at(const ReferenceClass& cls, double certainty) {
  return cls.ecdf.quantile(certainty);
}

std::vector<double> default_certainty_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 19; ++i) grid.push_back(0.05 * i);
  return grid;
}

UpliftTable build_uplift_table(const ReferenceClass& cls,
                               const std::vector<double>& levels) {
  UpliftTable table;
  table.metric = cls.metric;
  table.n = cls.n;
  for (double certainty : levels) {
    UpliftRow row;
    row.certainty = certainty;
    row.acceptable_chance = 1.0 - certainty;
    row.uplift = uplift_at(cls, certainty);
    table.rows.push_back(row);
  }
  return table;
}

UpliftTable build_uplift_table(const ReferenceClass& cls) {
  return build_uplift_table(cls, default_certainty_grid());
}

ForecastResult forecast(double base_estimate, const ReferenceClass& cls,
                        double certainty) {
  if (!(base_estimate > 0)) throw std::domain_error("base estimate must be > 0");
  ForecastResult res;
  res.base_estimate = base_estimate;
  res.certainty = certainty;
  res.uplift = uplift_at(cls, certainty);
  res.uplifted_estimate = base_estimate * (1.0 + res.uplift);
  return res;
}

AdequacyResult certainty_of_contingency(const ReferenceClass& cls,
                                        double contingency, double embedded) {
  if (!(contingency > -1.0) || !(embedded > -1.0))
    throw std::domain_error("contingencies must exceed -100%");
  AdequacyResult res;
  res.contingency = contingency;
  res.embedded_contingency_assumption = embedded;
  res.effective_threshold = (1.0 + contingency) / (1.0 + embedded) - 1.0;
  res.certainty = cls.ecdf.evaluate(res.effective_threshold);
  return res;
}

DelayCostModel delay_cost(double base_cost, double total_duration_months,
                          const stats::RegressionFit& fit) {
  if (!fit.converged)
    throw std::domain_error("delay cost refused: regression did not converge");
  if (!(total_duration_months > 0))
    throw std::domain_error("total duration must be > 0");
  DelayCostModel m;
  m.base_cost = base_cost;
  m.total_duration_months = total_duration_months;
  m.cost_per_schedule_overrun = fit.slope;
  m.cost_per_month = base_cost * fit.slope / total_duration_months;
  m.cost_per_day = m.cost_per_month / kDaysPerMonth;
  return m;
}

ClassSummary summarize_class(const ReferenceClass& cls, std::size_t proxy_count) {
  const auto& v = cls.ecdf.sorted_values();
  ClassSummary s;
  s.n = v.size();
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  s.median = cls.ecdf.quantile(0.5);
  s.min = cls.ecdf.min();
  s.max = cls.ecdf.max();
  s.p05 = cls.ecdf.quantile(0.05);
  s.p95 = cls.ecdf.quantile(0.95);
  s.positive_fraction =
      static_cast<double>(std::count_if(v.begin(), v.end(),
                                        [](double x) { return x > 0.0; })) /
      static_cast<double>(v.size());
  s.proxy_count = proxy_count;
  return s;
}

}  // namespace rcf
