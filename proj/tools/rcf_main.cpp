// Command-line front end for the reference-class forecasting toolkit.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcf/dataset.hpp"
#include "rcf/reference_class.hpp"
#include "rcf/report.hpp"
#include "rcf/stats.hpp"

namespace {

using json = nlohmann::ordered_json;

struct GlobalOpts {
  std::string data_path = "data/fixture.csv";
  std::uint64_t seed = 42;
  double alpha = 0.05;
  bool exclude_proxies = false;
  std::string format = "text";
  std::string svg_dir;
};

struct LoadedData {
  rcf::Dataset ds;
  std::string digest;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LoadedData load_data(const GlobalOpts& g) {
  std::string bytes = read_file(g.data_path);
  auto fmt = g.data_path.size() >= 5 &&
                     g.data_path.compare(g.data_path.size() - 5, 5, ".json") == 0
                 ? rcf::FileFormat::Json
                 : rcf::FileFormat::Csv;
  std::istringstream in(bytes);
  return {rcf::load_dataset(in, fmt), rcf::fnv1a64_hex(bytes)};
}

std::string pct0(double v) {
  return std::to_string(llround(v * 100.0)) + "%";
}

std::string pct1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", v * 100.0);
  return buf;
}

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

void emit(const GlobalOpts& g, const json& payload,
          const std::function<void(std::ostream&)>& text,
          const std::function<void(std::ostream&)>& markdown) {
  if (g.format == "json") {
    std::cout << payload.dump(2) << "\n";
  } else if (g.format == "markdown") {
    markdown(std::cout);
  } else {
    text(std::cout);
  }
}

rcf::ReferenceClass class_from_name(const rcf::Dataset& ds,
                                    const std::string& name, rcf::Metric metric,
                                    bool exclude_proxies) {
  auto filter = rcf::make_class_filter(name);
  if (!filter) throw CLI::ValidationError("--class", "unknown class '" + name + "'");
  auto fr = rcf::filter_class(ds.records, *filter, metric, exclude_proxies);
  if (fr.sample.values.empty())
    throw std::runtime_error("class '" + name + "' has no usable " +
                             std::string(rcf::to_string(metric)) + " records");
  return rcf::build_reference_class(name, metric, {fr.sample});
}

void paired_overruns(const rcf::Dataset& ds, bool exclude_proxies,
                     std::vector<double>& sched, std::vector<double>& cost) {
  for (const auto& r : ds.records) {
    if (exclude_proxies && r.cost_is_proxy) continue;
    if (!r.usable_for_cost() || !r.usable_for_schedule()) continue;
    sched.push_back(rcf::overrun(*r.est_duration_months, *r.act_duration_months));
    cost.push_back(rcf::overrun(r.est_cost, *r.act_cost));
  }
}

int cmd_validate(const GlobalOpts& g) {
  auto [ds, digest] = load_data(g);
  for (const auto& d : ds.diagnostics)
    std::cout << "line " << d.line << ": dropped: " << d.message << "\n";
  std::cout << ds.records.size() << " valid records (digest " << digest << ")\n";
  std::cout << ds.usable_cost_count() << " usable cost records, "
            << ds.usable_schedule_count() << " usable schedule records in total\n";
  for (const char* cls : {"nuclear", "mining"}) {
    auto cost = rcf::filter_class(ds.records, *rcf::make_class_filter(cls),
                                  rcf::Metric::Cost, g.exclude_proxies);
    auto sched = rcf::filter_class(ds.records, *rcf::make_class_filter(cls),
                                   rcf::Metric::Schedule, g.exclude_proxies);
    if (cost.sample.values.empty() && sched.sample.values.empty()) continue;
    std::cout << cls << ": " << cost.sample.values.size()
              << " usable cost records, " << sched.sample.values.size()
              << " usable schedule records\n";
  }
  std::cout << ds.proxy_count() << " proxy actuals\n";
  std::cout << ds.diagnostics.size() << " dropped rows\n";
  return ds.diagnostics.empty() ? 0 : 2;
}

int cmd_table(const GlobalOpts& g, const std::string& metric_name,
              const std::string& class_name, std::vector<double> levels) {
  auto [ds, digest] = load_data(g);
  rcf::Metric metric =
      metric_name == "schedule" ? rcf::Metric::Schedule : rcf::Metric::Cost;
  auto cls = class_from_name(ds, class_name, metric, g.exclude_proxies);

  std::vector<double> grid;
  if (levels.empty()) {
    grid = rcf::default_certainty_grid();
  } else {
    for (double lv : levels) grid.push_back(lv / 100.0);  // given as percent
  }
  auto table = rcf::build_uplift_table(cls, grid);

  if (!g.svg_dir.empty()) {
    std::filesystem::create_directories(g.svg_dir);
    std::ofstream svg(std::filesystem::path(g.svg_dir) / "uplift.svg",
                      std::ios::binary);
    svg << rcf::uplift_chart_svg(table);
  }

  json payload{{"class", class_name},
               {"metric", rcf::to_string(metric)},
               {"n", table.n},
               {"rows", json::array()}};
  for (const auto& r : table.rows)
    payload["rows"].push_back(json{{"acceptable_chance", r.acceptable_chance},
                                   {"certainty", r.certainty},
                                   {"uplift", r.uplift}});

  emit(
      g, payload,
      [&](std::ostream& out) {
        out << "Uplift table: class " << class_name << ", metric "
            << rcf::to_string(metric) << ", n = " << table.n << "\n";
        out << "acceptable chance  certainty  uplift\n";
        for (const auto& r : table.rows)
          out << std::left << std::setw(19) << pct0(r.acceptable_chance)
              << std::setw(11) << pct0(r.certainty) << pct0(r.uplift) << "\n";
      },
      [&](std::ostream& out) {
        out << "| Acceptable chance of overrun | Certainty | Uplift |\n"
            << "|---|---|---|\n";
        for (const auto& r : table.rows)
          out << "| " << pct0(r.acceptable_chance) << " | " << pct0(r.certainty)
              << " | " << pct0(r.uplift) << " |\n";
      });
  return 0;
}

int cmd_pool(const GlobalOpts& g, const std::string& metric_name,
             std::vector<std::string> group_names) {
  auto [ds, digest] = load_data(g);
  rcf::Metric metric =
      metric_name == "schedule" ? rcf::Metric::Schedule : rcf::Metric::Cost;
  if (group_names.empty())
    group_names = {"nuclear_power", "storage_hlw", "storage_lilw",
                   "nuclear_research", "mining"};

  std::vector<rcf::OverrunSample> groups;
  for (const auto& name : group_names) {
    auto filter = rcf::make_class_filter(name);
    if (!filter)
      throw CLI::ValidationError("--groups", "unknown group '" + name + "'");
    auto fr = rcf::filter_class(ds.records, *filter, metric, g.exclude_proxies);
    if (!fr.sample.values.empty()) groups.push_back(std::move(fr.sample));
  }
  if (groups.size() < 2)
    throw std::runtime_error("pooling needs at least two nonempty groups");

  auto decision = rcf::decide_pooling(groups, g.alpha);
  const auto& ev = decision.evidence;
  const std::size_t k = ev.labels.size();

  json matrix = json::array();
  for (std::size_t i = 0; i < k; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < k; ++j)
      row.push_back(i == j ? json(nullptr) : json(ev.tests[i][j].p_value));
    matrix.push_back(std::move(row));
  }
  json payload{{"metric", rcf::to_string(metric)},
               {"alpha", g.alpha},
               {"labels", ev.labels},
               {"p_values", matrix},
               {"partition", decision.partition}};

  auto print_matrix = [&](std::ostream& out, bool markdown) {
    if (markdown) {
      out << "|  |";
      for (const auto& l : ev.labels) out << " " << l << " |";
      out << "\n|---|";
      for (std::size_t i = 0; i < k; ++i) out << "---|";
      out << "\n";
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (markdown)
        out << "| " << ev.labels[i] << " |";
      else
        out << std::left << std::setw(18) << ev.labels[i];
      for (std::size_t j = 0; j < k; ++j) {
        std::string cell;
        if (i == j) {
          cell = "-";
        } else {
          double p = ev.tests[i][j].p_value;
          cell = fmt3(p);
          if (p < g.alpha) cell = markdown ? "**" + cell + "**" : cell + "*";
        }
        if (markdown)
          out << " " << cell << " |";
        else
          out << std::setw(10) << cell;
      }
      out << "\n";
    }
    out << (markdown ? "\nPartition:" : "partition:");
    for (const auto& grp : decision.partition) {
      out << " {";
      for (std::size_t i = 0; i < grp.size(); ++i)
        out << (i ? ", " : "") << grp[i];
      out << "}";
    }
    out << "\n";
  };

  emit(
      g, payload,
      [&](std::ostream& out) {
        out << "Pairwise rank-sum p-values (" << rcf::to_string(metric)
            << " overrun, alpha = " << g.alpha << ", * below alpha)\n";
        print_matrix(out, false);
      },
      [&](std::ostream& out) { print_matrix(out, true); });
  return 0;
}

int cmd_forecast(const GlobalOpts& g, double base, double certainty,
                 const std::string& metric_name, const std::string& class_name) {
  auto [ds, digest] = load_data(g);
  rcf::Metric metric =
      metric_name == "schedule" ? rcf::Metric::Schedule : rcf::Metric::Cost;
  auto cls = class_from_name(ds, class_name, metric, g.exclude_proxies);
  auto f = rcf::forecast(base, cls, certainty);

  json payload{{"class", class_name},
               {"metric", rcf::to_string(metric)},
               {"base_estimate", f.base_estimate},
               {"certainty", f.certainty},
               {"uplift", f.uplift},
               {"uplifted_estimate", f.uplifted_estimate}};
  emit(
      g, payload,
      [&](std::ostream& out) {
        out << "base estimate:     " << fmt2(f.base_estimate) << "\n"
            << "certainty:         " << pct0(f.certainty) << "\n"
            << "uplift:            " << pct0(f.uplift) << "\n"
            << "uplifted estimate: " << fmt2(f.uplifted_estimate) << "\n";
      },
      [&](std::ostream& out) {
        out << "| Base estimate | Certainty | Uplift | Uplifted estimate |\n"
            << "|---|---|---|---|\n"
            << "| " << fmt2(f.base_estimate) << " | " << pct0(f.certainty)
            << " | " << pct0(f.uplift) << " | " << fmt2(f.uplifted_estimate)
            << " |\n";
      });
  return 0;
}

int cmd_adequacy(const GlobalOpts& g, double contingency, double embedded,
                 const std::string& metric_name, const std::string& class_name) {
  auto [ds, digest] = load_data(g);
  rcf::Metric metric =
      metric_name == "schedule" ? rcf::Metric::Schedule : rcf::Metric::Cost;
  auto cls = class_from_name(ds, class_name, metric, g.exclude_proxies);
  auto a = rcf::certainty_of_contingency(cls, contingency, embedded);
  auto pxx = "P" + std::to_string(llround(a.certainty * 100.0));

  json payload{{"class", class_name},
               {"metric", rcf::to_string(metric)},
               {"contingency", a.contingency},
               {"embedded_contingency_assumption",
                a.embedded_contingency_assumption},
               {"effective_threshold", a.effective_threshold},
               {"certainty", a.certainty},
               {"level", pxx}};
  emit(
      g, payload,
      [&](std::ostream& out) {
        out << "contingency:         " << pct1(a.contingency) << "\n"
            << "assumed embedded:    " << pct1(a.embedded_contingency_assumption)
            << "\n"
            << "effective threshold: " << pct1(a.effective_threshold) << "\n"
            << "certainty:           " << pct1(a.certainty) << " (" << pxx
            << ")\n";
      },
      [&](std::ostream& out) {
        out << "| Contingency | Assumed embedded | Effective threshold | "
               "Certainty |\n|---|---|---|---|\n"
            << "| " << pct1(a.contingency) << " | "
            << pct1(a.embedded_contingency_assumption) << " | "
            << pct1(a.effective_threshold) << " | " << pct1(a.certainty) << " ("
            << pxx << ") |\n";
      });
  return 0;
}

int cmd_regress(const GlobalOpts& g, int bootstrap_reps) {
  auto [ds, digest] = load_data(g);
  std::vector<double> sched, cost;
  paired_overruns(ds, g.exclude_proxies, sched, cost);
  if (sched.size() < 3)
    throw std::runtime_error("need at least 3 records usable for both metrics");

  auto corr = rcf::stats::pearson_correlation(sched, cost);
  auto fit = rcf::stats::irls_fit(sched, cost, g.seed, bootstrap_reps);

  json payload{
      {"n", corr.n},
      {"correlation", json{{"r", corr.r}, {"p_value", corr.p_value}}},
      {"irls", json{{"slope", fit.slope},
                    {"intercept", fit.intercept},
                    {"slope_ci_low", fit.slope_ci_low},
                    {"slope_ci_high", fit.slope_ci_high},
                    {"converged", fit.converged},
                    {"iterations", fit.iterations}}}};
  auto interp = [&](std::ostream& out) {
    out << "for every 10% of schedule delay, cost overrun increases by about "
        << pct1(fit.slope * 0.10) << "\n";
  };
  emit(
      g, payload,
      [&](std::ostream& out) {
        out << "pairs:      " << corr.n << "\n"
            << "pearson r:  " << fmt3(corr.r) << " (p = " << corr.p_value
            << ")\n"
            << "irls slope: " << fmt3(fit.slope) << " (95% CI ["
            << fmt3(fit.slope_ci_low) << ", " << fmt3(fit.slope_ci_high)
            << "], intercept " << fmt3(fit.intercept) << ")\n";
        interp(out);
      },
      [&](std::ostream& out) {
        out << "- Pearson r = " << fmt3(corr.r) << " (p = " << corr.p_value
            << ", n = " << corr.n << ")\n"
            << "- Robust slope " << fmt3(fit.slope) << ", 95% CI ["
            << fmt3(fit.slope_ci_low) << ", " << fmt3(fit.slope_ci_high)
            << "]\n- ";
        interp(out);
      });
  return 0;
}

int cmd_delay_cost(const GlobalOpts& g, double base, double duration_months,
                   std::optional<double> slope_override, int bootstrap_reps) {
  rcf::stats::RegressionFit fit;
  if (slope_override) {
    fit.slope = *slope_override;
    fit.slope_ci_low = fit.slope_ci_high = *slope_override;
    fit.converged = true;
  } else {
    auto [ds, digest] = load_data(g);
    std::vector<double> sched, cost;
    paired_overruns(ds, g.exclude_proxies, sched, cost);
    if (sched.size() < 3)
      throw std::runtime_error(
          "need --slope or at least 3 records usable for both metrics");
    fit = rcf::stats::irls_fit(sched, cost, g.seed, bootstrap_reps);
  }
  auto m = rcf::delay_cost(base, duration_months, fit);

  json payload{{"base_cost", m.base_cost},
               {"total_duration_months", m.total_duration_months},
               {"slope", m.cost_per_schedule_overrun},
               {"cost_per_month", m.cost_per_month},
               {"cost_per_day", m.cost_per_day}};
  emit(
      g, payload,
      [&](std::ostream& out) {
        out << "base cost:       " << m.base_cost << "\n"
            << "duration:        " << m.total_duration_months << " months\n"
            << "slope:           " << m.cost_per_schedule_overrun << "\n"
            << "cost per month:  " << m.cost_per_month << "\n"
            << "cost per day:    " << m.cost_per_day << "\n";
      },
      [&](std::ostream& out) {
        out << "| Base cost | Duration (months) | Slope | Cost per month | "
               "Cost per day |\n|---|---|---|---|---|\n"
            << "| " << m.base_cost << " | " << m.total_duration_months << " | "
            << m.cost_per_schedule_overrun << " | " << m.cost_per_month << " | "
            << m.cost_per_day << " |\n";
      });
  return 0;
}

int cmd_report(const GlobalOpts& g, const std::string& out_dir,
               int bootstrap_reps) {
  auto [ds, digest] = load_data(g);
  rcf::ReportConfig cfg;
  cfg.dataset_path = g.data_path;
  cfg.dataset_digest = digest;
  cfg.seed = g.seed;
  cfg.alpha = g.alpha;
  cfg.exclude_proxies = g.exclude_proxies;
  cfg.bootstrap_reps = bootstrap_reps;

  auto doc = rcf::build_report(ds, cfg);
  std::string md = rcf::render_markdown(doc);

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "report.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report.json");
    out << doc.dump(2) << "\n";
  }
  {
    std::ofstream out(fs::path(out_dir) / "report.md", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report.md");
    out << md;
  }
  if (!g.svg_dir.empty()) rcf::write_report_svgs(ds, cfg, g.svg_dir);

  if (g.format == "json")
    std::cout << doc.dump(2) << "\n";
  else if (g.format == "markdown")
    std::cout << md;
  else
    std::cout << "wrote " << (fs::path(out_dir) / "report.json").string()
              << " and " << (fs::path(out_dir) / "report.md").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference class forecasting for project cost and schedule risk"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--data", g.data_path, "Dataset file (.csv or .json)")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "RNG seed, echoed into reports")
      ->capture_default_str();
  app.add_option("--alpha", g.alpha, "Significance level for pooling")
      ->check(CLI::Range(1e-9, 1.0 - 1e-9))
      ->capture_default_str();
  app.add_flag("--exclude-proxies", g.exclude_proxies,
               "Drop proxy-actual records (sensitivity analysis)");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"text", "json", "markdown"}))
      ->capture_default_str();
  app.add_option("--svg-dir", g.svg_dir, "Directory for SVG charts");

  std::string metric = "cost", class_name = "nuclear", out_dir = ".";
  std::vector<double> levels;
  std::vector<std::string> groups;
  double base = 0.0, certainty = 0.5, contingency = 0.0, embedded = 0.0;
  double duration_months = 0.0;
  std::optional<double> slope_override;
  int bootstrap_reps = 2000;
  app.add_option("--bootstrap-reps", bootstrap_reps,
                 "Bootstrap replicates for regression CIs")
      ->capture_default_str();

  app.add_subcommand("validate", "Check the dataset and report diagnostics");

  auto* tab = app.add_subcommand("table", "Uplift table by certainty level");
  tab->add_option("--metric", metric, "cost or schedule")
      ->check(CLI::IsMember({"cost", "schedule"}));
  tab->add_option("--class", class_name, "Reference class name");
  tab->add_option("--levels", levels, "Certainty levels in percent");

  auto* pool = app.add_subcommand("pool", "Pairwise pooling test matrix");
  pool->add_option("--metric", metric, "cost or schedule")
      ->check(CLI::IsMember({"cost", "schedule"}));
  pool->add_option("--groups", groups, "Candidate group names");

  auto* fc = app.add_subcommand("forecast", "Uplifted estimate at a certainty");
  fc->add_option("--base", base, "Base estimate")->required();
  fc->add_option("--certainty", certainty, "Certainty in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  fc->add_option("--metric", metric, "cost or schedule")
      ->check(CLI::IsMember({"cost", "schedule"}));
  fc->add_option("--class", class_name, "Reference class name");

  auto* adq = app.add_subcommand("adequacy", "Certainty of a given contingency");
  adq->add_option("--contingency", contingency, "Contingency as a fraction")
      ->required();
  adq->add_option("--embedded", embedded,
                  "Contingency assumed embedded in historic estimates");
  adq->add_option("--metric", metric, "cost or schedule")
      ->check(CLI::IsMember({"cost", "schedule"}));
  adq->add_option("--class", class_name, "Reference class name");

  app.add_subcommand("regress",
                     "Robust regression of cost overrun on schedule overrun");

  auto* dc = app.add_subcommand("delay-cost", "Cost of schedule delay");
  dc->add_option("--base", base, "Base cost")->required();
  dc->add_option("--duration-months", duration_months, "Total duration")
      ->required();
  dc->add_option("--slope", [&](const std::vector<std::string>& v) {
      slope_override = std::stod(v.front());
      return true;
    }, "Override the regression slope");

  auto* rep = app.add_subcommand("report", "Full analysis report (md + json)");
  rep->add_option("--out-dir", out_dir, "Output directory")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "validate") return cmd_validate(g);
    if (name == "table") return cmd_table(g, metric, class_name, levels);
    if (name == "pool") return cmd_pool(g, metric, groups);
    if (name == "forecast") return cmd_forecast(g, base, certainty, metric, class_name);
    if (name == "adequacy") return cmd_adequacy(g, contingency, embedded, metric, class_name);
    if (name == "regress") return cmd_regress(g, bootstrap_reps);
    if (name == "delay-cost")
      return cmd_delay_cost(g, base, duration_months, slope_override, bootstrap_reps);
    if (name == "report") return cmd_report(g, out_dir, bootstrap_reps);
    std::cerr << "unknown subcommand\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
