#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rcf {

enum class Sector {
  NuclearPower,
  NuclearStorageHlw,
  NuclearStorageLilw,
  NuclearResearch,
  Mining,
};

enum class Metric { Cost, Schedule };

const char* to_string(Sector s);
const char* to_string(Metric m);
std::optional<Sector> sector_from_string(std::string_view s);

// One completed (or nearly completed) project. Estimates are baselined at
// the decision to build; actuals at completion. Optional fields are absent
// when the source did not report them.
struct ProjectRecord {
  std::string id;
  std::string name;
  Sector sector = Sector::NuclearPower;
  std::optional<double> depth_m;  // mining only
  double est_cost = 0.0;
  std::optional<double> act_cost;
  std::optional<double> forecast_at_completion;
  std::optional<double> est_duration_months;
  std::optional<double> act_duration_months;
  double pct_complete = 100.0;
  std::optional<int> decision_year;
  // Set by the loader: act_cost was substituted by a forecast-at-completion
  // under the 75%-completion rule.
  bool cost_is_proxy = false;

  bool usable_for_cost() const { return act_cost.has_value(); }
  bool usable_for_schedule() const {
    return est_duration_months.has_value() && act_duration_months.has_value();
  }

  bool operator==(const ProjectRecord&) const = default;
};

// A labeled vector of overrun fractions for one candidate group.
struct OverrunSample {
  std::string label;
  Metric metric = Metric::Cost;
  std::vector<double> values;

  std::size_t n() const { return values.size(); }
};

struct Diagnostic {
  int line = 0;  // 1-based input line (or array index for JSON)
  std::string message;
};

enum class FileFormat { Csv, Json };

// A loaded file: file-level currency declaration, the valid records, and
// per-row diagnostics for everything that was dropped.
struct Dataset {
  std::string currency;
  std::optional<int> basis_year;
  std::vector<ProjectRecord> records;
  std::vector<Diagnostic> diagnostics;

  std::size_t usable_cost_count() const;
  std::size_t usable_schedule_count() const;
  std::size_t proxy_count() const;
};

// Parses and validates a dataset. Rows violating record invariants are
// dropped and reported in diagnostics; structural problems (bad header,
// undecodable file, missing currency declaration) throw std::runtime_error.
Dataset load_dataset(std::istream& in, FileFormat format);
Dataset load_dataset_file(const std::string& path);

// Serializes in the exact input schema, preserving proxy rows as
// (empty act_cost, forecast_at_completion) so a reload reproduces the
// records bit-for-bit.
void write_csv(const Dataset& ds, std::ostream& out);
void write_json(const Dataset& ds, std::ostream& out);

// actual/estimated - 1. Throws std::domain_error on non-positive input.
double overrun(double estimated, double actual);

// Applies the 75%-completion proxy rule. If act_cost is absent and the
// project is at least 75% complete with a forecast available, the forecast
// becomes the actual and the record is flagged as a proxy. Otherwise the
// record is left without an actual cost (unusable for cost analysis).
ProjectRecord resolve_actuals(ProjectRecord rec,
                              std::optional<double> forecast_at_completion);
ProjectRecord resolve_actuals(ProjectRecord rec);

// Reference-class membership filter: a set of sectors, optionally with a
// minimum mining depth (exclusive, meters).
struct ClassFilter {
  std::string label;
  std::vector<Sector> sectors;
  std::optional<double> min_depth_m;
};

// Named filters understood by the CLI: nuclear, nuclear_power, storage_hlw,
// storage_lilw, nuclear_research, mining (>100m), mining_deep (>300m).
std::optional<ClassFilter> make_class_filter(std::string_view name);

struct FilterResult {
  OverrunSample sample;
  std::size_t excluded_missing_metric = 0;
  std::size_t proxy_count = 0;  // proxy records contributing to the sample
  std::vector<std::string> warnings;
};

FilterResult filter_class(const std::vector<ProjectRecord>& records,
                          const ClassFilter& spec, Metric metric,
                          bool exclude_proxies = false);

}  // namespace rcf
