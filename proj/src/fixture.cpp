#include "rcf/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "rcf/stats.hpp"

namespace rcf::fixture {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

}  // namespace

std::vector<double> anchored_sample(const AnchoredSampleSpec& spec) {
  const std::size_t n = spec.n;
  if (n < 2) throw std::domain_error("anchored sample needs n >= 2");
  std::vector<double> v(n, kNaN);
  v[0] = spec.lo;
  v[n - 1] = spec.hi;

  const auto& anchors = spec.anchors;
  for (std::size_t k = 0; k < anchors.size(); ++k) {
    auto [p, t] = anchors[k];
    double h = p * static_cast<double>(n - 1);
    double r = std::round(h);
    if (std::fabs(h - r) < 1e-9) {
      v[static_cast<std::size_t>(r)] = t;
      continue;
    }
    auto i = static_cast<std::size_t>(h);
    double f = h - static_cast<double>(i);
    double prev = k > 0 ? anchors[k - 1].second : spec.lo;
    double next = k + 1 < anchors.size() ? anchors[k + 1].second : spec.hi;
    double s;
    if (auto it = spec.step_overrides.find(k); it != spec.step_overrides.end()) {
      s = it->second;
    } else if (t == prev || t == next) {
      s = 0.0;  // tied anchors share a plateau
    } else {
      s = 0.1 * std::min(t - prev, next - t);
    }
    // The chord between the two bracketing order statistics passes through
    // (h, t) for any spread s.
    v[i] = t - f * s;
    v[i + 1] = t + (1.0 - f) * s;
  }

  // Linear fill between constrained positions.
  std::size_t last = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::isnan(v[i])) continue;
    for (std::size_t j = last + 1; j < i; ++j) {
      double f = static_cast<double>(j - last) / static_cast<double>(i - last);
      v[j] = v[last] + f * (v[i] - v[last]);
    }
    last = i;
  }
  for (std::size_t i = 1; i < n; ++i)
    if (v[i] < v[i - 1])
      throw std::logic_error("anchored sample is not nondecreasing");
  return v;
}

const std::vector<double>& cost_uplift_targets() {
  static const std::vector<double> t = {0.02, 0.06, 0.11, 0.15, 0.21, 0.26, 0.32,
                                        0.41, 0.49, 0.67, 0.80, 0.98, 1.32, 1.65,
                                        1.83, 2.02, 2.40, 2.81, 4.27};
  return t;
}

const std::vector<double>& schedule_uplift_targets() {
  static const std::vector<double> t = {0.00, 0.02, 0.15, 0.20, 0.28, 0.33, 0.35,
                                        0.36, 0.40, 0.40, 0.60, 0.63, 0.77, 0.88,
                                        0.89, 1.04, 1.27, 1.45, 1.63};
  return t;
}

std::vector<double> nuclear_cost_sample() {
  AnchoredSampleSpec spec;
  spec.n = 216;
  spec.lo = -0.30;
  spec.hi = 19.0;
  const auto& t = cost_uplift_targets();
  for (std::size_t k = 0; k < t.size(); ++k)
    spec.anchors.emplace_back(0.05 * static_cast<double>(k + 1), t[k]);
  // Wide spread around the lowest anchor keeps the distribution steep just
  // above the 5% point.
  spec.step_overrides[0] = 0.06;
  return anchored_sample(spec);
}

std::vector<double> nuclear_schedule_sample() {
  AnchoredSampleSpec spec;
  spec.n = 200;
  spec.lo = -0.15;
  spec.hi = 22.0;
  const auto& t = schedule_uplift_targets();
  for (std::size_t k = 0; k < t.size(); ++k)
    spec.anchors.emplace_back(0.05 * static_cast<double>(k + 1), t[k]);
  return anchored_sample(spec);
}

namespace {

// Evenly spread positions used to deal the pooled values out to the storage
// groups so every group resembles the pooled distribution.
std::vector<std::size_t> strided_indices(std::size_t total, std::size_t count,
                                         double offset) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < count; ++j) {
    auto pos = static_cast<std::size_t>(
        (static_cast<double>(j) + offset) * static_cast<double>(total) /
        static_cast<double>(count));
    idx.push_back(std::min(pos, total - 1));
  }
  return idx;
}

struct GroupSplit {
  std::vector<double> power, hlw, lilw;
};

GroupSplit split_nuclear(const std::vector<double>& pooled,
                         const std::vector<std::size_t>& hlw_idx,
                         const std::vector<std::size_t>& lilw_idx) {
  GroupSplit out;
  std::vector<bool> taken(pooled.size(), false);
  for (std::size_t i : hlw_idx) {
    out.hlw.push_back(pooled[i]);
    taken[i] = true;
  }
  for (std::size_t i : lilw_idx) {
    if (taken[i]) throw std::logic_error("overlapping group assignment");
    out.lilw.push_back(pooled[i]);
    taken[i] = true;
  }
  for (std::size_t i = 0; i < pooled.size(); ++i)
    if (!taken[i]) out.power.push_back(pooled[i]);
  return out;
}

ProjectRecord base_record(std::string id, std::string name, Sector sector) {
  ProjectRecord r;
  r.id = std::move(id);
  r.name = std::move(name);
  r.sector = sector;
  r.est_cost = 100.0;
  r.pct_complete = 100.0;
  return r;
}

void set_cost(ProjectRecord& r, double ov) { r.act_cost = 100.0 * (1.0 + ov); }

void set_cost_proxy(ProjectRecord& r, double ov) {
  r.act_cost = 100.0 * (1.0 + ov);
  r.forecast_at_completion = r.act_cost;
  r.pct_complete = 80.0;
  r.cost_is_proxy = true;
}

void set_schedule(ProjectRecord& r, double ov) {
  r.est_duration_months = 120.0;
  r.act_duration_months = 120.0 * (1.0 + ov);
}

}  // namespace

Dataset reference_dataset() {
  Dataset ds;
  ds.currency = "CHF";
  ds.basis_year = 2016;

  const std::vector<double> cost = nuclear_cost_sample();        // n = 216
  const std::vector<double> sched = nuclear_schedule_sample();   // n = 200

  // HLW: 11 cost / 14 schedule; LILW: 11 cost / 9 schedule; rest new build.
  std::vector<std::size_t> hlw_cost_idx, lilw_cost_idx;
  for (std::size_t j = 0; j < 11; ++j) {
    hlw_cost_idx.push_back(5 + 20 * j);
    lilw_cost_idx.push_back(15 + 20 * j);
  }
  GroupSplit cost_split = split_nuclear(cost, hlw_cost_idx, lilw_cost_idx);
  GroupSplit sched_split = split_nuclear(sched, strided_indices(200, 14, 0.5),
                                         strided_indices(200, 9, 0.8));

  std::mt19937_64 rng(20181210);  // fixed layout seed

  // Pair new-build cost and schedule values by rank with a windowed shuffle,
  // so the paired metrics correlate without being collinear.
  std::vector<std::size_t> sched_perm(sched_split.power.size());
  for (std::size_t i = 0; i < sched_perm.size(); ++i) sched_perm[i] = i;
  constexpr std::size_t kWindow = 40;
  for (std::size_t start = 0; start < sched_perm.size(); start += kWindow) {
    std::size_t end = std::min(start + kWindow, sched_perm.size());
    std::shuffle(sched_perm.begin() + start, sched_perm.begin() + end, rng);
  }

  std::vector<int> years;
  for (std::size_t i = 0; i < cost_split.power.size(); ++i)
    years.push_back(1955 + static_cast<int>(i * 50 / (cost_split.power.size() - 1)));
  std::shuffle(years.begin(), years.end(), rng);  // no time trend

  char buf[32];
  for (std::size_t i = 0; i < cost_split.power.size(); ++i) {
    std::snprintf(buf, sizeof buf, "P%03u", static_cast<unsigned>(i + 1));
    auto r = base_record(buf, "Nuclear new build " + std::to_string(i + 1),
                         Sector::NuclearPower);
    set_cost(r, cost_split.power[i]);
    if (i < sched_split.power.size())
      set_schedule(r, sched_split.power[sched_perm[i]]);
    r.decision_year = years[i];
    ds.records.push_back(std::move(r));
  }

  for (std::size_t j = 0; j < 14; ++j) {
    std::snprintf(buf, sizeof buf, "H%02u", static_cast<unsigned>(j + 1));
    auto r = base_record(buf, "HLW storage " + std::to_string(j + 1),
                         Sector::NuclearStorageHlw);
    if (j < 11) {
      if (j == 1 || j == 3)
        set_cost_proxy(r, cost_split.hlw[j]);
      else
        set_cost(r, cost_split.hlw[j]);
    }
    set_schedule(r, sched_split.hlw[j]);
    r.decision_year = 1980 + static_cast<int>(2 * j);
    ds.records.push_back(std::move(r));
  }

  for (std::size_t j = 0; j < 11; ++j) {
    std::snprintf(buf, sizeof buf, "L%02u", static_cast<unsigned>(j + 1));
    auto r = base_record(buf, "LILW storage " + std::to_string(j + 1),
                         Sector::NuclearStorageLilw);
    if (j == 2)
      set_cost_proxy(r, cost_split.lilw[j]);
    else
      set_cost(r, cost_split.lilw[j]);
    if (j < 9) set_schedule(r, sched_split.lilw[j]);
    r.decision_year = 1985 + static_cast<int>(2 * j);
    ds.records.push_back(std::move(r));
  }

  // Mining: cost overruns clearly below the nuclear profile, schedule
  // overruns drawn from the pooled nuclear schedule distribution.
  std::vector<double> mining_cost = linspace(-0.28, 0.30, 31);
  stats::Ecdf sched_dist(sched);
  for (std::size_t i = 0; i < 31; ++i) {
    std::snprintf(buf, sizeof buf, "M%02u", static_cast<unsigned>(i + 1));
    auto r = base_record(buf, "Underground mine " + std::to_string(i + 1),
                         Sector::Mining);
    r.depth_m = i < 16 ? 320.0 + 25.0 * static_cast<double>(i)
                       : 110.0 + 12.0 * static_cast<double>(i - 16);
    set_cost(r, mining_cost[i]);
    if (i < 23)
      set_schedule(r, sched_dist.quantile((static_cast<double>(i) + 0.5) / 23.0));
    r.decision_year = 1975 + static_cast<int>(i);
    ds.records.push_back(std::move(r));
  }

  return ds;
}

void write_reference_csv(std::ostream& out) { write_csv(reference_dataset(), out); }

}  // namespace rcf::fixture
