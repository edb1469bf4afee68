#pragma once

#include <string>
#include <vector>

#include "rcf/dataset.hpp"
#include "rcf/stats.hpp"

namespace rcf {

// Pairwise rank-test evidence for a set of candidate groups. The matrix is
// symmetric with every unordered pair filled in; the diagonal is unused.
struct PoolingEvidence {
  std::vector<std::string> labels;
  std::vector<std::vector<stats::RankTestResult>> tests;

  const stats::RankTestResult& at(std::size_t i, std::size_t j) const {
    return tests[i][j];
  }
};

// Partition of group labels into merged reference-class candidates.
using Partition = std::vector<std::vector<std::string>>;

struct PoolingDecision {
  Partition partition;
  PoolingEvidence evidence;
};

// Runs every pairwise two-sided rank-sum test and merges groups over the
// connected components of the compatibility graph (edge where p >= alpha).
// The full evidence matrix is returned so borderline structure stays visible.
PoolingDecision decide_pooling(const std::vector<OverrunSample>& groups,
                               double alpha);

struct ReferenceClass {
  std::string name;
  Metric metric = Metric::Cost;
  std::vector<std::string> member_groups;
  stats::Ecdf ecdf;
  std::size_t n = 0;
  PoolingEvidence pooling_evidence;
};

// Concatenates the member samples into one pooled distribution.
// Throws std::domain_error when the union is empty.
ReferenceClass build_reference_class(const std::string& name, Metric metric,
                                     const std::vector<OverrunSample>& samples);

// Required uplift at a certainty level: the inverse of the pooled overrun
// distribution. certainty 0.5 is the class median.
double uplift_at(const ReferenceClass& cls, double certainty);

struct UpliftRow {
  double acceptable_chance = 0.0;  // 1 - certainty
  double certainty = 0.0;
  double uplift = 0.0;
};

struct UpliftTable {
  Metric metric = Metric::Cost;
  std::vector<UpliftRow> rows;
  std::size_t n = 0;
};

// Certainty levels 5%..95% in steps of 5.
std::vector<double> default_certainty_grid();

UpliftTable build_uplift_table(const ReferenceClass& cls,
                               const std::vector<double>& levels);
UpliftTable build_uplift_table(const ReferenceClass& cls);

struct ForecastResult {
  double base_estimate = 0.0;
  double certainty = 0.0;
  double uplift = 0.0;
  double uplifted_estimate = 0.0;  // base * (1 + uplift)
};

ForecastResult forecast(double base_estimate, const ReferenceClass& cls,
                        double certainty);

struct AdequacyResult {
  double contingency = 0.0;
  double embedded_contingency_assumption = 0.0;
  double effective_threshold = 0.0;  // (1+c)/(1+e) - 1
  double certainty = 0.0;
};

// How often a contingency of the given size would have been enough in the
// reference class, after discounting contingency assumed to be embedded in
// the historic estimates.
AdequacyResult certainty_of_contingency(const ReferenceClass& cls,
                                        double contingency, double embedded);

struct DelayCostModel {
  double base_cost = 0.0;
  double total_duration_months = 0.0;
  double cost_per_schedule_overrun = 0.0;  // regression slope
  double cost_per_month = 0.0;  // base * slope / duration
  double cost_per_day = 0.0;    // per_month / 30.4375
};

constexpr double kDaysPerMonth = 30.4375;

// Maps a one-month delay (schedule overrun of 1/duration) through the
// cost-on-schedule slope. Throws std::domain_error on an unconverged fit.
DelayCostModel delay_cost(double base_cost, double total_duration_months,
                          const stats::RegressionFit& fit);

struct ClassSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double min = 0.0;
  double max = 0.0;
  double positive_fraction = 0.0;  // overrun > 0
  double p05 = 0.0;
  double p95 = 0.0;
  std::size_t proxy_count = 0;
};

ClassSummary summarize_class(const ReferenceClass& cls, std::size_t proxy_count = 0);

}  // namespace rcf
