#include "rcf/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rcf {

namespace {

constexpr const char* kCsvHeader =
    "id,name,sector,depth_m,est_cost,act_cost,forecast_at_completion,"
    "est_duration_months,act_duration_months,pct_complete,decision_year";

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::optional<double> parse_optional_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

std::optional<int> parse_optional_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t pos = 0;
  int v = std::stoi(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("trailing characters");
  return v;
}

// Record-invariant checks shared by both loaders. Returns an error message
// or empty string when the record is valid.
std::string validate_record(const ProjectRecord& r) {
  if (r.id.empty()) return "id must be nonempty";
  if (!(r.est_cost > 0)) return "est_cost must be > 0";
  if (r.act_cost && !(*r.act_cost > 0)) return "act_cost must be > 0";
  if (r.forecast_at_completion && !(*r.forecast_at_completion > 0))
    return "forecast_at_completion must be > 0";
  if (r.est_duration_months && !(*r.est_duration_months > 0))
    return "est_duration_months must be > 0";
  if (r.act_duration_months && !(*r.act_duration_months > 0))
    return "act_duration_months must be > 0";
  if (r.depth_m && *r.depth_m < 0) return "depth_m must be >= 0";
  if (!(r.pct_complete >= 0 && r.pct_complete <= 100))
    return "pct_complete must be in [0,100]";
  return {};
}

bool parse_metadata_line(const std::string& line, Dataset& ds) {
  // "# currency=CHF basis_year=2016"
  std::istringstream ss(line.substr(1));
  std::string token;
  bool saw_currency = false;
  while (ss >> token) {
    auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    std::string key = token.substr(0, eq);
    std::string value = token.substr(eq + 1);
    if (key == "currency") {
      if (!ds.currency.empty() && ds.currency != value)
        throw std::runtime_error("conflicting currency declarations");
      ds.currency = value;
      saw_currency = true;
    } else if (key == "basis_year") {
      ds.basis_year = std::stoi(value);
    }
  }
  return saw_currency;
}

Dataset load_csv(std::istream& in) {
  Dataset ds;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      parse_metadata_line(line, ds);
      continue;
    }
    if (!header_seen) {
      if (line != kCsvHeader)
        throw std::runtime_error("schema error: unexpected CSV header at line " +
                                 std::to_string(lineno));
      header_seen = true;
      continue;
    }
    auto fields = split_csv_line(line);
    if (fields.size() != 11) {
      ds.diagnostics.push_back(
          {lineno, "expected 11 columns, got " + std::to_string(fields.size())});
      continue;
    }
    try {
      ProjectRecord r;
      r.id = fields[0];
      r.name = fields[1];
      auto sector = sector_from_string(fields[2]);
      if (!sector) {
        ds.diagnostics.push_back({lineno, "unknown sector '" + fields[2] + "'"});
        continue;
      }
      r.sector = *sector;
      r.depth_m = parse_optional_double(fields[3]);
      if (auto v = parse_optional_double(fields[4])) r.est_cost = *v;
      r.act_cost = parse_optional_double(fields[5]);
      r.forecast_at_completion = parse_optional_double(fields[6]);
      r.est_duration_months = parse_optional_double(fields[7]);
      r.act_duration_months = parse_optional_double(fields[8]);
      if (auto v = parse_optional_double(fields[9])) r.pct_complete = *v;
      r.decision_year = parse_optional_int(fields[10]);
      if (auto err = validate_record(r); !err.empty()) {
        ds.diagnostics.push_back({lineno, err});
        continue;
      }
      ds.records.push_back(resolve_actuals(std::move(r)));
    } catch (const std::exception&) {
      ds.diagnostics.push_back({lineno, "unparseable row"});
    }
  }
  if (!header_seen) throw std::runtime_error("schema error: missing CSV header");
  if (ds.currency.empty())
    throw std::runtime_error("schema error: missing '# currency=...' declaration");
  return ds;
}

template <typename T>
std::optional<T> json_optional(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string() && it->get<std::string>().empty()) return std::nullopt;
  return it->get<T>();
}

Dataset load_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed JSON: ") + e.what());
  }
  Dataset ds;
  const nlohmann::json* rows = nullptr;
  if (doc.is_object()) {
    if (!doc.contains("currency") || !doc.contains("records"))
      throw std::runtime_error("schema error: expected currency and records keys");
    ds.currency = doc["currency"].get<std::string>();
    if (doc.contains("basis_year") && !doc["basis_year"].is_null())
      ds.basis_year = doc["basis_year"].get<int>();
    rows = &doc["records"];
  } else {
    throw std::runtime_error(
        "schema error: expected top-level object with currency declaration");
  }
  if (!rows->is_array())
    throw std::runtime_error("schema error: records must be an array");
  int index = 0;
  for (const auto& obj : *rows) {
    ++index;
    try {
      ProjectRecord r;
      r.id = obj.at("id").get<std::string>();
      r.name = obj.value("name", std::string{});
      auto sector = sector_from_string(obj.at("sector").get<std::string>());
      if (!sector) {
        ds.diagnostics.push_back({index, "unknown sector"});
        continue;
      }
      r.sector = *sector;
      r.depth_m = json_optional<double>(obj, "depth_m");
      r.est_cost = obj.at("est_cost").get<double>();
      r.act_cost = json_optional<double>(obj, "act_cost");
      r.forecast_at_completion = json_optional<double>(obj, "forecast_at_completion");
      r.est_duration_months = json_optional<double>(obj, "est_duration_months");
      r.act_duration_months = json_optional<double>(obj, "act_duration_months");
      r.pct_complete = obj.value("pct_complete", 100.0);
      r.decision_year = json_optional<int>(obj, "decision_year");
      if (auto err = validate_record(r); !err.empty()) {
        ds.diagnostics.push_back({index, err});
        continue;
      }
      ds.records.push_back(resolve_actuals(std::move(r)));
    } catch (const nlohmann::json::exception&) {
      ds.diagnostics.push_back({index, "unparseable record"});
    }
  }
  return ds;
}

std::string format_number(double v) {
  std::ostringstream ss;
  ss.precision(std::numeric_limits<double>::max_digits10);
  ss << v;
  return ss.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

const char* to_string(Sector s) {
  switch (s) {
    case Sector::NuclearPower: return "nuclear_power";
    case Sector::NuclearStorageHlw: return "nuclear_storage_hlw";
    case Sector::NuclearStorageLilw: return "nuclear_storage_lilw";
    case Sector::NuclearResearch: return "nuclear_research";
    case Sector::Mining: return "mining";
  }
  return "?";
}

const char* to_string(Metric m) {
  return m == Metric::Cost ? "cost" : "schedule";
}

std::optional<Sector> sector_from_string(std::string_view s) {
  if (s == "nuclear_power") return Sector::NuclearPower;
  if (s == "nuclear_storage_hlw") return Sector::NuclearStorageHlw;
  if (s == "nuclear_storage_lilw") return Sector::NuclearStorageLilw;
  if (s == "nuclear_research") return Sector::NuclearResearch;
  if (s == "mining") return Sector::Mining;
  return std::nullopt;
}

std::size_t Dataset::usable_cost_count() const {
  return std::count_if(records.begin(), records.end(),
                       [](const ProjectRecord& r) { return r.usable_for_cost(); });
}

std::size_t Dataset::usable_schedule_count() const {
  return std::count_if(records.begin(), records.end(), [](const ProjectRecord& r) {
    return r.usable_for_schedule();
  });
}

std::size_t Dataset::proxy_count() const {
  return std::count_if(records.begin(), records.end(),
                       [](const ProjectRecord& r) { return r.cost_is_proxy; });
}

Dataset load_dataset(std::istream& in, FileFormat format) {
  return format == FileFormat::Csv ? load_csv(in) : load_json(in);
}

Dataset load_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  FileFormat fmt = path.size() >= 5 && path.substr(path.size() - 5) == ".json"
                       ? FileFormat::Json
                       : FileFormat::Csv;
  return load_dataset(in, fmt);
}

double overrun(double estimated, double actual) {
  if (!(estimated > 0) || !(actual > 0))
    throw std::domain_error("overrun requires positive estimated and actual");
  return actual / estimated - 1.0;
}

ProjectRecord resolve_actuals(ProjectRecord rec,
                              std::optional<double> forecast_at_completion) {
  if (rec.act_cost) return rec;  // idempotent: already resolved
  if (rec.pct_complete >= 75.0 && forecast_at_completion) {
    rec.act_cost = forecast_at_completion;
    rec.cost_is_proxy = true;
  }
  return rec;
}

ProjectRecord resolve_actuals(ProjectRecord rec) {
  auto forecast = rec.forecast_at_completion;
  return resolve_actuals(std::move(rec), forecast);
}

std::optional<ClassFilter> make_class_filter(std::string_view name) {
  using S = Sector;
  if (name == "nuclear")
    return ClassFilter{"nuclear",
                       {S::NuclearPower, S::NuclearStorageHlw, S::NuclearStorageLilw},
                       std::nullopt};
  if (name == "nuclear_power")
    return ClassFilter{"nuclear_power", {S::NuclearPower}, std::nullopt};
  if (name == "storage_hlw")
    return ClassFilter{"storage_hlw", {S::NuclearStorageHlw}, std::nullopt};
  if (name == "storage_lilw")
    return ClassFilter{"storage_lilw", {S::NuclearStorageLilw}, std::nullopt};
  if (name == "nuclear_research")
    return ClassFilter{"nuclear_research", {S::NuclearResearch}, std::nullopt};
  if (name == "mining") return ClassFilter{"mining", {S::Mining}, 100.0};
  if (name == "mining_deep") return ClassFilter{"mining_deep", {S::Mining}, 300.0};
  return std::nullopt;
}

FilterResult filter_class(const std::vector<ProjectRecord>& records,
                          const ClassFilter& spec, Metric metric,
                          bool exclude_proxies) {
  FilterResult out;
  out.sample.label = spec.label;
  out.sample.metric = metric;
  for (const auto& r : records) {
    if (std::find(spec.sectors.begin(), spec.sectors.end(), r.sector) ==
        spec.sectors.end())
      continue;
    if (spec.min_depth_m) {
      if (!r.depth_m || !(*r.depth_m > *spec.min_depth_m)) continue;
    }
    if (metric == Metric::Cost) {
      if (exclude_proxies && r.cost_is_proxy) continue;
      if (!r.usable_for_cost()) {
        ++out.excluded_missing_metric;
        continue;
      }
      if (r.cost_is_proxy) ++out.proxy_count;
      out.sample.values.push_back(overrun(r.est_cost, *r.act_cost));
    } else {
      if (!r.usable_for_schedule()) {
        ++out.excluded_missing_metric;
        continue;
      }
      out.sample.values.push_back(
          overrun(*r.est_duration_months, *r.act_duration_months));
    }
  }
  if (out.sample.values.empty())
    out.warnings.push_back("class '" + spec.label + "' selected no usable " +
                           std::string(to_string(metric)) + " records");
  return out;
}

void write_csv(const Dataset& ds, std::ostream& out) {
  out << "# currency=" << ds.currency;
  if (ds.basis_year) out << " basis_year=" << *ds.basis_year;
  out << "\n" << kCsvHeader << "\n";
  auto opt = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string{};
  };
  for (const auto& r : ds.records) {
    out << csv_escape(r.id) << ',' << csv_escape(r.name) << ','
        << to_string(r.sector) << ',' << opt(r.depth_m) << ','
        << format_number(r.est_cost) << ','
        // Proxy rows serialize with act_cost empty so the reload re-derives
        // the proxy flag from forecast_at_completion.
        << (r.cost_is_proxy ? std::string{} : opt(r.act_cost)) << ','
        << opt(r.forecast_at_completion) << ',' << opt(r.est_duration_months)
        << ',' << opt(r.act_duration_months) << ','
        << format_number(r.pct_complete) << ','
        << (r.decision_year ? std::to_string(*r.decision_year) : std::string{})
        << "\n";
  }
}

void write_json(const Dataset& ds, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["currency"] = ds.currency;
  if (ds.basis_year) doc["basis_year"] = *ds.basis_year;
  doc["records"] = nlohmann::ordered_json::array();
  for (const auto& r : ds.records) {
    nlohmann::ordered_json obj;
    obj["id"] = r.id;
    obj["name"] = r.name;
    obj["sector"] = to_string(r.sector);
    auto set = [&obj](const char* key, const std::optional<double>& v) {
      obj[key] = v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
    };
    set("depth_m", r.depth_m);
    obj["est_cost"] = r.est_cost;
    set("act_cost", r.cost_is_proxy ? std::nullopt : r.act_cost);
    set("forecast_at_completion", r.forecast_at_completion);
    set("est_duration_months", r.est_duration_months);
    set("act_duration_months", r.act_duration_months);
    obj["pct_complete"] = r.pct_complete;
    obj["decision_year"] = r.decision_year
                               ? nlohmann::ordered_json(*r.decision_year)
                               : nlohmann::ordered_json(nullptr);
    doc["records"].push_back(std::move(obj));
  }
  out << doc.dump(2) << "\n";
}

}  // namespace rcf
