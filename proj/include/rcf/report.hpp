#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rcf/dataset.hpp"
#include "rcf/reference_class.hpp"

namespace rcf {

struct AdequacyScenario {
  double contingency = 0.0;
  double embedded = 0.0;
};

struct ReportConfig {
  std::string dataset_path;
  std::string dataset_digest;
  std::uint64_t seed = 42;
  double alpha = 0.05;
  bool exclude_proxies = false;
  // Worked-example defaults; all overridable from the CLI.
  std::vector<double> forecast_bases = {8.13, 8.23};
  std::vector<double> forecast_certainties = {0.5, 0.8};
  std::vector<AdequacyScenario> adequacy_scenarios = {
      {0.232, 0.0}, {0.23, 0.10}, {0.23, 0.20}};
  double delay_base_cost = 8.229e9;
  double delay_duration_months = 360.0;
  bool include_mining_schedule = false;
  int bootstrap_reps = 2000;
};

// Assembles the full analysis as ordered JSON (the source of truth for all
// renderings). Deterministic for fixed (dataset, config).
nlohmann::ordered_json build_report(const Dataset& ds, const ReportConfig& cfg);

// Markdown rendering of the JSON report; numbers are formatted copies of the
// JSON values, never recomputed.
std::string render_markdown(const nlohmann::ordered_json& report);

// Writes ecdf_cost.svg, ecdf_schedule.svg, uplift.svg and trend.svg.
void write_report_svgs(const Dataset& ds, const ReportConfig& cfg,
                       const std::string& dir);

// Chart used by `table --svg-dir`: uplift vs acceptable chance of overrun.
std::string uplift_chart_svg(const UpliftTable& table);

std::string fnv1a64_hex(std::string_view bytes);

}  // namespace rcf
