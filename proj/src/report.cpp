#include "rcf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "rcf/stats.hpp"

namespace rcf {

namespace {

constexpr const char* kSchemaVersion = "1.0";
constexpr const char* kToolVersion = "0.1.0";

using json = nlohmann::ordered_json;

struct GroupSamples {
  std::vector<OverrunSample> nuclear;  // nonempty nuclear sector groups
  std::optional<OverrunSample> mining;
  std::size_t proxy_count = 0;
};

GroupSamples collect_groups(const Dataset& ds, Metric metric, bool exclude_proxies) {
  GroupSamples out;
  for (const char* name :
       {"nuclear_power", "storage_hlw", "storage_lilw", "nuclear_research"}) {
    auto fr = filter_class(ds.records, *make_class_filter(name), metric,
                           exclude_proxies);
    out.proxy_count += fr.proxy_count;
    if (!fr.sample.values.empty()) out.nuclear.push_back(std::move(fr.sample));
  }
  auto fr = filter_class(ds.records, *make_class_filter("mining"), metric,
                         exclude_proxies);
  if (!fr.sample.values.empty()) out.mining = std::move(fr.sample);
  return out;
}

json fit_to_json(const stats::RegressionFit& fit) {
  return json{{"slope", fit.slope},
              {"intercept", fit.intercept},
              {"slope_ci_low", fit.slope_ci_low},
              {"slope_ci_high", fit.slope_ci_high},
              {"n", fit.n},
              {"converged", fit.converged},
              {"iterations", fit.iterations}};
}

json summary_to_json(const std::string& name, Metric metric,
                     const ClassSummary& s) {
  return json{{"name", name},
              {"metric", to_string(metric)},
              {"n", s.n},
              {"mean", s.mean},
              {"median", s.median},
              {"min", s.min},
              {"max", s.max},
              {"p05", s.p05},
              {"p95", s.p95},
              {"positive_fraction", s.positive_fraction},
              {"proxy_count", s.proxy_count}};
}

json pooling_to_json(const PoolingDecision& pd) {
  json matrix = json::array();
  const std::size_t k = pd.evidence.labels.size();
  for (std::size_t i = 0; i < k; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < k; ++j)
      row.push_back(i == j ? json(nullptr) : json(pd.evidence.tests[i][j].p_value));
    matrix.push_back(std::move(row));
  }
  return json{{"labels", pd.evidence.labels},
              {"p_values", std::move(matrix)},
              {"partition", pd.partition}};
}

json table_to_json(const UpliftTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows)
    rows.push_back(json{{"acceptable_chance", r.acceptable_chance},
                        {"certainty", r.certainty},
                        {"uplift", r.uplift}});
  return json{{"metric", to_string(table.metric)},
              {"n", table.n},
              {"rows", std::move(rows)}};
}

// Paired (schedule overrun, cost overrun) observations from nuclear records.
void paired_overruns(const Dataset& ds, bool exclude_proxies,
                     std::vector<double>& sched, std::vector<double>& cost) {
  for (const auto& r : ds.records) {
    if (r.sector == Sector::Mining) continue;
    if (exclude_proxies && r.cost_is_proxy) continue;
    if (!r.usable_for_cost() || !r.usable_for_schedule()) continue;
    sched.push_back(overrun(*r.est_duration_months, *r.act_duration_months));
    cost.push_back(overrun(r.est_cost, *r.act_cost));
  }
}

}  // namespace

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::ordered_json build_report(const Dataset& ds, const ReportConfig& cfg) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["tool"] = json{{"name", "rcf"}, {"version", kToolVersion}};
  doc["seed"] = cfg.seed;
  doc["alpha"] = cfg.alpha;
  doc["exclude_proxies"] = cfg.exclude_proxies;
  doc["dataset"] = json{{"path", cfg.dataset_path},
                        {"digest", cfg.dataset_digest},
                        {"currency", ds.currency},
                        {"records", ds.records.size()},
                        {"usable_cost", ds.usable_cost_count()},
                        {"usable_schedule", ds.usable_schedule_count()},
                        {"proxy_count",
                         cfg.exclude_proxies ? 0 : ds.proxy_count()},
                        {"dropped_rows", ds.diagnostics.size()}};

  GroupSamples cost_groups = collect_groups(ds, Metric::Cost, cfg.exclude_proxies);
  GroupSamples sched_groups =
      collect_groups(ds, Metric::Schedule, cfg.exclude_proxies);
  if (cost_groups.nuclear.empty())
    throw std::runtime_error("dataset has no usable nuclear cost records");

  auto nuclear_cost =
      build_reference_class("nuclear", Metric::Cost, cost_groups.nuclear);

  std::optional<ReferenceClass> nuclear_sched;
  if (!sched_groups.nuclear.empty()) {
    auto members = sched_groups.nuclear;
    if (cfg.include_mining_schedule && sched_groups.mining)
      members.push_back(*sched_groups.mining);
    nuclear_sched = build_reference_class("nuclear", Metric::Schedule, members);
  }

  doc["classes"] = json::array();
  doc["classes"].push_back(summary_to_json(
      "nuclear", Metric::Cost,
      summarize_class(nuclear_cost, cost_groups.proxy_count)));
  if (nuclear_sched)
    doc["classes"].push_back(summary_to_json(
        "nuclear", Metric::Schedule, summarize_class(*nuclear_sched, 0)));
  if (cost_groups.mining) {
    auto mining_cost = build_reference_class("mining", Metric::Cost,
                                             {*cost_groups.mining});
    doc["classes"].push_back(
        summary_to_json("mining", Metric::Cost, summarize_class(mining_cost, 0)));
  }

  doc["pooling"] = json::object();
  auto pooling_section = [&](Metric metric, const GroupSamples& groups) {
    std::vector<OverrunSample> all = groups.nuclear;
    if (groups.mining) all.push_back(*groups.mining);
    if (all.size() >= 2)
      doc["pooling"][to_string(metric)] =
          pooling_to_json(decide_pooling(all, cfg.alpha));
  };
  pooling_section(Metric::Cost, cost_groups);
  pooling_section(Metric::Schedule, sched_groups);

  doc["uplift_tables"] = json::object();
  doc["uplift_tables"]["cost"] = table_to_json(build_uplift_table(nuclear_cost));
  if (nuclear_sched)
    doc["uplift_tables"]["schedule"] =
        table_to_json(build_uplift_table(*nuclear_sched));

  doc["forecasts"] = json::array();
  for (double base : cfg.forecast_bases) {
    for (double certainty : cfg.forecast_certainties) {
      auto f = forecast(base, nuclear_cost, certainty);
      doc["forecasts"].push_back(json{{"base_estimate", f.base_estimate},
                                      {"certainty", f.certainty},
                                      {"uplift", f.uplift},
                                      {"uplifted_estimate", f.uplifted_estimate}});
    }
  }

  doc["adequacy"] = json::array();
  for (const auto& sc : cfg.adequacy_scenarios) {
    auto a = certainty_of_contingency(nuclear_cost, sc.contingency, sc.embedded);
    doc["adequacy"].push_back(
        json{{"contingency", a.contingency},
             {"embedded_contingency_assumption", a.embedded_contingency_assumption},
             {"effective_threshold", a.effective_threshold},
             {"certainty", a.certainty}});
  }

  std::vector<double> sched_x, cost_y;
  paired_overruns(ds, cfg.exclude_proxies, sched_x, cost_y);
  if (sched_x.size() >= 3) {
    auto corr = stats::pearson_correlation(sched_x, cost_y);
    auto irls = stats::irls_fit(sched_x, cost_y, cfg.seed, cfg.bootstrap_reps);
    doc["regression"] =
        json{{"correlation",
              json{{"r", corr.r}, {"p_value", corr.p_value}, {"n", corr.n}}},
             {"irls", fit_to_json(irls)}};
    if (irls.converged) {
      auto dc = delay_cost(cfg.delay_base_cost, cfg.delay_duration_months, irls);
      doc["delay_cost"] = json{{"base_cost", dc.base_cost},
                               {"total_duration_months", dc.total_duration_months},
                               {"cost_per_schedule_overrun",
                                dc.cost_per_schedule_overrun},
                               {"cost_per_month", dc.cost_per_month},
                               {"cost_per_day", dc.cost_per_day}};
    }
  }

  std::vector<double> years, year_overruns;
  for (const auto& r : ds.records) {
    if (!r.decision_year || !r.usable_for_cost()) continue;
    if (cfg.exclude_proxies && r.cost_is_proxy) continue;
    years.push_back(static_cast<double>(*r.decision_year));
    year_overruns.push_back(overrun(r.est_cost, *r.act_cost));
  }
  if (years.size() >= 3) {
    auto tfit = stats::trend_fit(years, year_overruns);
    json t = fit_to_json(tfit);
    t["risk_decreased_over_time"] = tfit.slope_ci_high < 0.0;
    doc["trend"] = std::move(t);
  }

  return doc;
}

namespace {

std::string pct0(double v) {
  std::ostringstream ss;
  ss << llround(v * 100.0) << "%";
  return ss.str();
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

}  // namespace

std::string render_markdown(const nlohmann::ordered_json& r) {
  std::ostringstream md;
  md << "# Reference class forecast report\n\n";
  md << "- tool: " << r["tool"]["name"].get<std::string>() << " "
     << r["tool"]["version"].get<std::string>() << "\n";
  md << "- seed: " << r["seed"] << "\n";
  md << "- alpha: " << r["alpha"] << "\n";
  md << "- dataset: `" << r["dataset"]["path"].get<std::string>() << "` (digest "
     << r["dataset"]["digest"].get<std::string>() << ", "
     << r["dataset"]["records"] << " records, "
     << r["dataset"]["usable_cost"] << " usable for cost, "
     << r["dataset"]["usable_schedule"] << " usable for schedule, "
     << r["dataset"]["proxy_count"] << " proxy actuals)\n\n";

  md << "## Class summaries\n\n";
  md << "| class | metric | n | mean | median | min | max | P5 | P95 | overrun>0 | proxies |\n";
  md << "|---|---|---|---|---|---|---|---|---|---|---|\n";
  for (const auto& c : r["classes"]) {
    md << "| " << c["name"].get<std::string>() << " | "
       << c["metric"].get<std::string>() << " | " << c["n"] << " | "
       << pct0(c["mean"].get<double>()) << " | "
       << pct0(c["median"].get<double>()) << " | "
       << pct0(c["min"].get<double>()) << " | " << pct0(c["max"].get<double>())
       << " | " << pct0(c["p05"].get<double>()) << " | "
       << pct0(c["p95"].get<double>()) << " | "
       << pct1(c["positive_fraction"].get<double>()) << " | "
       << c["proxy_count"] << " |\n";
  }
  md << "\n";

  for (const auto& metric : {"cost", "schedule"}) {
    if (!r["pooling"].contains(metric)) continue;
    const auto& p = r["pooling"][metric];
    md << "## Pooling evidence (" << metric << " overrun)\n\n";
    md << "Two-sided rank-sum p-values; entries below alpha are starred.\n\n|  |";
    for (const auto& l : p["labels"]) md << " " << l.get<std::string>() << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < p["labels"].size(); ++i) md << "---|";
    md << "\n";
    double alpha = r["alpha"].get<double>();
    for (std::size_t i = 0; i < p["labels"].size(); ++i) {
      md << "| " << p["labels"][i].get<std::string>() << " |";
      for (std::size_t j = 0; j < p["labels"].size(); ++j) {
        if (i == j) {
          md << " - |";
        } else {
          double pv = p["p_values"][i][j].get<double>();
          md << " " << fmt3(pv) << (pv < alpha ? "*" : "") << " |";
        }
      }
      md << "\n";
    }
    md << "\nPartition:";
    for (const auto& grp : p["partition"]) {
      md << " {";
      for (std::size_t i = 0; i < grp.size(); ++i)
        md << (i ? ", " : "") << grp[i].get<std::string>();
      md << "}";
    }
    md << "\n\n";
  }

  md << "## Uplifts by level of certainty\n\n";
  md << "| Acceptable chance of overrun | Certainty | Cost uplift | Schedule uplift |\n";
  md << "|---|---|---|---|\n";
  const auto& cost_rows = r["uplift_tables"]["cost"]["rows"];
  const json* sched_rows = r["uplift_tables"].contains("schedule")
                               ? &r["uplift_tables"]["schedule"]["rows"]
                               : nullptr;
  for (std::size_t i = 0; i < cost_rows.size(); ++i) {
    const auto& row = cost_rows[i];
    md << "| " << pct0(row["acceptable_chance"].get<double>()) << " | "
       << pct0(row["certainty"].get<double>()) << " | "
       << pct0(row["uplift"].get<double>()) << " | ";
    if (sched_rows && i < sched_rows->size())
      md << pct0((*sched_rows)[i]["uplift"].get<double>());
    else
      md << "-";
    md << " |\n";
  }
  md << "\n";

  if (r.contains("forecasts")) {
    md << "## Uplifted cost forecasts\n\n";
    md << "| Base estimate | Certainty | Uplift | Uplifted estimate |\n|---|---|---|---|\n";
    for (const auto& f : r["forecasts"]) {
      md << "| " << fmt2(f["base_estimate"].get<double>()) << " | "
         << pct0(f["certainty"].get<double>()) << " | "
         << pct0(f["uplift"].get<double>()) << " | "
         << fmt2(f["uplifted_estimate"].get<double>()) << " |\n";
    }
    md << "\n";
  }

  if (r.contains("adequacy")) {
    md << "## Contingency adequacy\n\n";
    md << "| Contingency | Assumed embedded | Effective threshold | Certainty |\n|---|---|---|---|\n";
    for (const auto& a : r["adequacy"]) {
      md << "| " << pct1(a["contingency"].get<double>()) << " | "
         << pct1(a["embedded_contingency_assumption"].get<double>()) << " | "
         << pct1(a["effective_threshold"].get<double>()) << " | "
         << pct1(a["certainty"].get<double>()) << " |\n";
    }
    md << "\n";
  }

  if (r.contains("regression")) {
    const auto& c = r["regression"]["correlation"];
    const auto& f = r["regression"]["irls"];
    md << "## Schedule risk regression\n\n";
    md << "- Pearson correlation of cost overrun with schedule overrun: r = "
       << fmt3(c["r"].get<double>()) << " (p = " << c["p_value"].get<double>()
       << ", n = " << c["n"] << ")\n";
    md << "- Robust (Huber IRLS) slope: " << fmt3(f["slope"].get<double>())
       << " with 95% CI [" << fmt3(f["slope_ci_low"].get<double>()) << ", "
       << fmt3(f["slope_ci_high"].get<double>()) << "]\n";
    md << "- A 10% schedule delay adds about "
       << pct1(f["slope"].get<double>() * 0.10) << " cost overrun\n\n";
  }

  if (r.contains("delay_cost")) {
    const auto& d = r["delay_cost"];
    md << "## Delay cost\n\n";
    md << "- Base cost " << d["base_cost"].get<double>() << " over "
       << d["total_duration_months"].get<double>() << " months\n";
    md << "- One month of delay adds " << d["cost_per_month"].get<double>()
       << " on average\n";
    md << "- One day of delay adds " << d["cost_per_day"].get<double>()
       << " on average\n\n";
  }

  if (r.contains("trend")) {
    const auto& t = r["trend"];
    md << "## Cost risk over time\n\n";
    md << "- Trend of cost overrun on decision year: slope "
       << t["slope"].get<double>() << " per year, 95% CI ["
       << t["slope_ci_low"].get<double>() << ", "
       << t["slope_ci_high"].get<double>() << "]\n";
    md << "- "
       << (t["risk_decreased_over_time"].get<bool>()
               ? "Risk has decreased over time."
               : "No evidence that risk has decreased over time.")
       << "\n";
  }

  return md.str();
}

namespace {

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
  bool scatter = false;
};

// Minimal self-contained SVG line/scatter chart: one polyline (line series)
// or one path (scatter series) per series.
std::string line_chart(const std::string& title, const std::string& x_label,
                       const std::string& y_label,
                       const std::vector<Series>& series) {
  constexpr double kW = 640, kH = 420, kMargin = 50;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmax <= xmin) xmax = xmin + 1;
  if (ymax <= ymin) ymax = ymin + 1;
  auto sx = [&](double x) {
    return kMargin + (x - xmin) / (xmax - xmin) * (kW - 2 * kMargin);
  };
  auto sy = [&](double y) {
    return kH - kMargin - (y - ymin) / (ymax - ymin) * (kH - 2 * kMargin);
  };
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" viewBox=\"0 0 " << kW << " " << kH
      << "\">\n";
  svg << "<rect width=\"" << kW << "\" height=\"" << kH
      << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" "
         "font-size=\"14\">" << title << "</text>\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kH - kMargin << "\" x2=\""
      << kW - kMargin << "\" y2=\"" << kH - kMargin
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\""
      << kMargin << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label
      << "</text>\n";
  svg << "<text x=\"15\" y=\"" << kH / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 15 "
      << kH / 2 << ")\">" << y_label << "</text>\n";

  int color = 0;
  double legend_y = kMargin;
  for (const auto& s : series) {
    const char* c = kColors[color++ % 4];
    if (s.scatter) {
      svg << "<path fill=\"none\" stroke=\"" << c << "\" d=\"";
      for (auto [x, y] : s.points)
        svg << "M" << sx(x) - 2 << " " << sy(y) << " L" << sx(x) + 2 << " "
            << sy(y) << " M" << sx(x) << " " << sy(y) - 2 << " L" << sx(x)
            << " " << sy(y) + 2 << " ";
      svg << "\"/>\n";
    } else {
      svg << "<polyline fill=\"none\" stroke=\"" << c << "\" points=\"";
      for (auto [x, y] : s.points) svg << sx(x) << "," << sy(y) << " ";
      svg << "\"/>\n";
    }
    svg << "<text x=\"" << kW - kMargin - 150 << "\" y=\"" << legend_y
        << "\" font-size=\"12\" fill=\"" << c << "\">" << s.name
        << "</text>\n";
    legend_y += 16;
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::pair<double, double>> ecdf_points(const stats::Ecdf& e,
                                                   double clip_hi) {
  std::vector<std::pair<double, double>> pts;
  const auto& v = e.sorted_values();
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] > clip_hi) break;
    pts.emplace_back(v[i], static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return pts;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

std::string uplift_chart_svg(const UpliftTable& table) {
  Series s;
  s.name = std::string(to_string(table.metric)) + " uplift";
  for (const auto& r : table.rows)
    s.points.emplace_back(r.acceptable_chance, r.uplift);
  return line_chart("Uplift by acceptable chance of overrun",
                    "acceptable chance of overrun", "uplift", {s});
}

void write_report_svgs(const Dataset& ds, const ReportConfig& cfg,
                       const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  auto sample = [&](const char* cls, Metric m) {
    return filter_class(ds.records, *make_class_filter(cls), m,
                        cfg.exclude_proxies)
        .sample;
  };
  auto nuclear_cost = sample("nuclear", Metric::Cost);
  auto nuclear_sched = sample("nuclear", Metric::Schedule);
  auto mining_cost = sample("mining", Metric::Cost);
  auto mining_sched = sample("mining", Metric::Schedule);

  // ECDF charts, clipped at 300% overrun like the detail view of the data.
  {
    std::vector<Series> series;
    if (!nuclear_cost.values.empty())
      series.push_back({"nuclear", ecdf_points(stats::Ecdf(nuclear_cost.values), 3.0),
                        false});
    if (!mining_cost.values.empty())
      series.push_back({"mining", ecdf_points(stats::Ecdf(mining_cost.values), 3.0),
                        false});
    if (!series.empty())
      write_text_file(fs::path(dir) / "ecdf_cost.svg",
                      line_chart("Cumulative frequency of cost overrun",
                                 "cost overrun", "cumulative frequency", series));
  }
  {
    std::vector<Series> series;
    if (!nuclear_sched.values.empty())
      series.push_back({"nuclear",
                        ecdf_points(stats::Ecdf(nuclear_sched.values), 3.0), false});
    if (!mining_sched.values.empty())
      series.push_back({"mining",
                        ecdf_points(stats::Ecdf(mining_sched.values), 3.0), false});
    if (!series.empty())
      write_text_file(
          fs::path(dir) / "ecdf_schedule.svg",
          line_chart("Cumulative frequency of schedule overrun",
                     "schedule overrun", "cumulative frequency", series));
  }

  {
    std::vector<Series> series;
    if (!nuclear_cost.values.empty()) {
      auto cls = build_reference_class("nuclear", Metric::Cost, {nuclear_cost});
      Series s{"cost uplift", {}, false};
      for (const auto& r : build_uplift_table(cls).rows)
        s.points.emplace_back(r.acceptable_chance, r.uplift);
      series.push_back(std::move(s));
    }
    if (!nuclear_sched.values.empty()) {
      auto cls =
          build_reference_class("nuclear", Metric::Schedule, {nuclear_sched});
      Series s{"schedule uplift", {}, false};
      for (const auto& r : build_uplift_table(cls).rows)
        s.points.emplace_back(r.acceptable_chance, r.uplift);
      series.push_back(std::move(s));
    }
    if (!series.empty())
      write_text_file(fs::path(dir) / "uplift.svg",
                      line_chart("Uplift by acceptable chance of overrun",
                                 "acceptable chance of overrun", "uplift",
                                 series));
  }

  {
    std::vector<double> years, overruns;
    for (const auto& r : ds.records) {
      if (!r.decision_year || !r.usable_for_cost()) continue;
      if (cfg.exclude_proxies && r.cost_is_proxy) continue;
      years.push_back(static_cast<double>(*r.decision_year));
      overruns.push_back(overrun(r.est_cost, *r.act_cost));
    }
    if (years.size() >= 3) {
      Series pts{"cost overrun", {}, true};
      for (std::size_t i = 0; i < years.size(); ++i)
        pts.points.emplace_back(years[i], overruns[i]);
      auto fit = stats::trend_fit(years, overruns);
      auto [ymin_it, ymax_it] = std::minmax_element(years.begin(), years.end());
      Series line{"trend", {}, false};
      line.points.emplace_back(*ymin_it, fit.intercept + fit.slope * *ymin_it);
      line.points.emplace_back(*ymax_it, fit.intercept + fit.slope * *ymax_it);
      write_text_file(fs::path(dir) / "trend.svg",
                      line_chart("Cost overrun by decision year",
                                 "decision year", "cost overrun", {pts, line}));
    }
  }
}

}  // namespace rcf
