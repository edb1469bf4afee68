#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <vector>

#include "rcf/dataset.hpp"

namespace rcf::fixture {

// A sample whose interpolated order-statistic quantile hits each anchor
// (probability, value) pair exactly. Anchors with equal values produce a
// plateau; everything between constrained positions is filled linearly.
struct AnchoredSampleSpec {
  std::size_t n = 0;
  double lo = 0.0;  // value at p = 0
  double hi = 0.0;  // value at p = 1
  std::vector<std::pair<double, double>> anchors;  // ascending in p
  // Optional per-anchor spread between the two order statistics bracketing
  // the anchor position (by anchor index). Defaults to a tenth of the
  // smaller neighbor gap.
  std::map<std::size_t, double> step_overrides;
};

std::vector<double> anchored_sample(const AnchoredSampleSpec& spec);

// The 19-level reference uplift grids (certainty 5%..95%, step 5).
const std::vector<double>& cost_uplift_targets();
const std::vector<double>& schedule_uplift_targets();

// Pooled nuclear overrun samples embodying the reference grids:
// n = 216 for cost (range -30%..1900%), n = 200 for schedule (-15%..2200%).
std::vector<double> nuclear_cost_sample();
std::vector<double> nuclear_schedule_sample();

// Full bundled dataset: the nuclear samples spread over new-build, HLW and
// LILW storage groups (stratified so the groups stay statistically alike),
// three proxy-actual storage rows, and a mining group whose cost profile is
// clearly lower than nuclear but whose schedule profile matches.
Dataset reference_dataset();

void write_reference_csv(std::ostream& out);

}  // namespace rcf::fixture
