#include "relcomp/io.hpp"

#include "relcomp/error.hpp"
#include "relcomp/models.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace relcomp {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Vector json_vector(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw InvalidArgument(what + ": expected a non-empty array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidArgument(what + ": expected numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix json_matrix(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw InvalidArgument(what + ": expected a non-empty array of rows");
  const auto cols = json_vector(j[0], what).size();
  Matrix m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vector row = json_vector(j[i], what);
    if (row.size() != cols) throw InvalidArgument(what + ": ragged matrix");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

const json& field(const json& obj, const char* key, const std::string& what) {
  if (!obj.contains(key)) throw InvalidArgument(what + ": missing field '" + key + "'");
  return obj.at(key);
}

GaussianSpec json_gaussian(const json& j, const std::string& what) {
  GaussianSpec g{json_vector(field(j, "mean", what), what + ".mean"),
                 json_matrix(field(j, "covariance", what), what + ".covariance")};
  g.validate();
  return g;
}

std::string scalar_text(const json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  throw InvalidArgument("config key '" + key + "' must be a string or a number");
}

void apply_object(RunConfig& c, const json& obj, bool allow_plan_keys) {
  if (!obj.is_object()) throw InvalidArgument("config: expected a JSON object");
  // problem first so that params validate against the right registry entry
  if (obj.contains("problem")) apply_setting(c, "problem", scalar_text(obj.at("problem"), "problem"));
  for (const auto& [key, value] : obj.items()) {
    if (key == "problem") continue;
    if (key == "schema_version") {
      if (!value.is_number_integer() || value.get<int>() != kSchemaVersion) {
        throw InvalidArgument("config: unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
      }
    } else if (key == "params") {
      if (!value.is_object()) throw InvalidArgument("config: 'params' must be an object");
      for (const auto& [pk, pv] : value.items()) {
        if (!pv.is_number()) throw InvalidArgument("config: problem parameter '" + pk + "' must be a number");
        c.params[pk] = pv.get<double>();
      }
    } else if (key == "runs" || key == "sweep") {
      if (!allow_plan_keys) throw InvalidArgument("config: '" + key + "' is only allowed at the top level");
    } else {
      apply_setting(c, key, scalar_text(value, key));
    }
  }
}

json nullable(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json interval_end(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

Sample parse_csv_sample(std::istream& in, const std::string& source) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell = trim(cell);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (cell.empty() || used != cell.size() || !std::isfinite(v)) {
        throw InvalidArgument(source + ":" + std::to_string(lineno) + ": not a finite number: '" + cell + "'");
      }
      row.push_back(v);
    }
    if (line.back() == ',') throw InvalidArgument(source + ":" + std::to_string(lineno) + ": trailing comma");
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidArgument(source + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(rows.front().size()) + " columns, found " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument(source + ": no data rows");
  Sample out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
  return out;
}

Sample read_csv_sample(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return parse_csv_sample(in, path);
}

void write_csv_sample(const Sample& sample, std::ostream& out) {
  for (Eigen::Index i = 0; i < sample.rows(); ++i) {
    for (Eigen::Index k = 0; k < sample.cols(); ++k) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", sample(i, k));
      out << (k ? "," : "") << buf;
    }
    out << '\n';
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DensityModel parse_density_model(const std::string& json_text, const std::string& source) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(source + ": invalid JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw InvalidArgument(source + ": model needs a string field 'type'");
  }
  const auto type = j.at("type").get<std::string>();
  if (type == "gaussian") {
    const auto g = json_gaussian(j, source);
    return {make_gaussian_score(g), static_cast<std::size_t>(g.mean.size())};
  }
  if (type == "mixture") {
    MixtureSpec m;
    m.weights = json_vector(field(j, "weights", source), source + ".weights");
    const auto& comps = field(j, "components", source);
    if (!comps.is_array()) throw InvalidArgument(source + ": 'components' must be an array");
    for (const auto& c : comps) m.components.push_back(json_gaussian(c, source + ".components"));
    m.validate();
    return {make_mixture_score(m), m.dim()};
  }
  if (type == "rbm") {
    GaussianRbmSpec r{json_matrix(field(j, "B", source), source + ".B"),
                      json_vector(field(j, "b", source), source + ".b"),
                      json_vector(field(j, "c", source), source + ".c")};
    r.validate();
    return {make_rbm_score(r), r.visible_dim()};
  }
  throw InvalidArgument(source + ": unknown model type '" + type + "'; expected gaussian, mixture or rbm");
}

CandidateModel load_model(const std::string& path) {
  const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  if (is_json) return parse_density_model(read_text_file(path), path);
  return SampleModel{read_csv_sample(path)};
}

BenchPlan parse_bench_plan(const std::string& json_text, const std::map<std::string, std::string>& overrides) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig base;
  apply_object(base, j, true);

  BenchPlan plan;
  if (j.contains("runs")) {
    const auto& runs = j.at("runs");
    if (!runs.is_array() || runs.empty()) throw InvalidArgument("config: 'runs' must be a non-empty array");
    for (const auto& r : runs) {
      RunConfig c = base;
      apply_object(c, r, false);
      plan.runs.push_back(std::move(c));
    }
  } else {
    plan.runs.push_back(base);
  }
  for (auto& c : plan.runs) {
    for (const auto& [k, v] : overrides) apply_setting(c, k, v);
    c.validate();
  }
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    if (!s.is_object() || !s.contains("param") || !s.at("param").is_string()) {
      throw InvalidArgument("config: 'sweep' needs a string 'param' and an array 'values'");
    }
    Sweep sweep;
    sweep.param = s.at("param").get<std::string>();
    const Vector vals = json_vector(field(s, "values", "config.sweep"), "config.sweep.values");
    sweep.values.assign(vals.data(), vals.data() + vals.size());
    for (const auto& c : plan.runs)
      for (double v : sweep.values) with_param(c, sweep.param, v).validate();
    plan.sweep = std::move(sweep);
  }
  return plan;
}

CompareReport make_report(const ComparisonResult& result, std::vector<std::string> models) {
  CompareReport r;
  const std::size_t l = result.decisions.size();
  r.test = result.test;
  r.kind = to_string(result.kind);
  r.kernel = result.kernel;
  r.alpha = result.alpha;
  r.n = result.n;
  r.models = std::move(models);
  r.selected = result.selected;
  r.reference = result.selected;
  r.discrepancies.assign(result.discrepancies.data(), result.discrepancies.data() + result.discrepancies.size());
  r.decisions = result.decisions;
  r.statistics.assign(l, std::nullopt);
  r.sigmas.assign(l, std::nullopt);
  r.thresholds.assign(l, std::nullopt);
  r.pvalues.assign(l, std::nullopt);
  r.intervals.assign(l, std::nullopt);
  for (const auto& t : result.tests) {
    r.statistics[t.index] = t.statistic;
    r.sigmas[t.index] = t.sigma;
    r.thresholds[t.index] = t.threshold;
    r.pvalues[t.index] = t.pvalue;
    r.intervals[t.index] = t.interval;
  }
  r.regularized = result.diagnostics.regularized;
  r.rho = result.diagnostics.rho;
  r.selection_size = result.diagnostics.selection_size;
  r.test_size = result.diagnostics.test_size;
  return r;
}

CompareReport make_report(const PairResult& pair, DiscrepancyKind kind, const KernelSpec& kernel, double alpha,
                          std::size_t n, std::vector<std::string> models) {
  CompareReport r;
  r.test = "relpair";
  r.kind = to_string(kind);
  r.kernel = kernel;
  r.alpha = alpha;
  r.n = n;
  r.models = std::move(models);
  r.reference = 1;
  r.decisions = {pair.reject, false};
  r.statistics = {pair.statistic, std::nullopt};
  r.sigmas = {pair.sigma, std::nullopt};
  r.thresholds = {pair.threshold, std::nullopt};
  r.pvalues = {pair.pvalue, std::nullopt};
  r.intervals = {std::nullopt, std::nullopt};
  r.regularized = pair.regularized;
  r.selection_size = 0;
  r.test_size = n;
  return r;
}

std::string report_json(const CompareReport& r) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["test"] = r.test;
  j["kind"] = r.kind;
  json k;
  k["family"] = r.kernel.family_name();
  if (r.kernel.family == KernelFamily::Gaussian) {
    k["bandwidth"] = r.kernel.bandwidth;
    k["bandwidth_rule"] = r.bandwidth_rule;
  } else {
    k["c"] = r.kernel.imq_c;
    k["beta"] = r.kernel.imq_beta;
  }
  j["kernel"] = k;
  j["alpha"] = r.alpha;
  j["n"] = r.n;
  j["models"] = r.models;
  j["selected"] = r.selected ? json(*r.selected) : json(nullptr);
  j["reference"] = r.reference;
  j["discrepancies"] = r.discrepancies;
  j["decisions"] = r.decisions;
  json stats = json::array(), sig = json::array(), thr = json::array(), pv = json::array(), iv = json::array();
  for (std::size_t i = 0; i < r.decisions.size(); ++i) {
    stats.push_back(nullable(r.statistics[i]));
    sig.push_back(nullable(r.sigmas[i]));
    thr.push_back(nullable(r.thresholds[i]));
    pv.push_back(nullable(r.pvalues[i]));
    iv.push_back(r.intervals[i] ? json::array({interval_end(r.intervals[i]->lower), interval_end(r.intervals[i]->upper)})
                                : json(nullptr));
  }
  j["statistics"] = stats;
  j["sigmas"] = sig;
  j["thresholds"] = thr;
  j["pvalues"] = pv;
  j["intervals"] = iv;
  json d;
  d["regularized"] = r.regularized;
  d["rho"] = nullable(r.rho);
  d["selection_size"] = r.selection_size;
  d["test_size"] = r.test_size;
  j["diagnostics"] = d;
  return j.dump(2) + "\n";
}

std::string report_table(const CompareReport& r) {
  std::ostringstream out;
  out << r.test << " (" << r.kind << ", " << r.kernel.family_name();
  if (r.kernel.family == KernelFamily::Gaussian) out << " bandwidth " << fmt(r.kernel.bandwidth);
  out << "), alpha " << fmt(r.alpha) << ", n " << r.n << "\n";
  out << std::left << std::setw(20) << "model" << std::setw(14) << "discrepancy" << std::setw(14) << "statistic"
      << std::setw(14) << "threshold" << std::setw(12) << "p-value"
      << "verdict\n";
  auto cell = [](const std::optional<double>& v) { return v ? fmt(*v) : std::string("-"); };
  for (std::size_t i = 0; i < r.decisions.size(); ++i) {
    std::string verdict;
    if (i == r.reference) verdict = r.selected ? "reference (selected)" : "reference";
    else verdict = r.decisions[i] ? "worse" : "not rejected";
    const std::string name = i < r.models.size() ? r.models[i] : "P" + std::to_string(i + 1);
    out << std::setw(20) << name << std::setw(14)
        << (i < r.discrepancies.size() ? fmt(r.discrepancies[i]) : std::string("-")) << std::setw(14)
        << cell(r.statistics[i]) << std::setw(14) << cell(r.thresholds[i]) << std::setw(12) << cell(r.pvalues[i])
        << verdict << "\n";
  }
  if (r.regularized) out << "note: covariance estimate was regularized\n";
  return out.str();
}

std::string metrics_csv_header() {
  return "schema_version,problem,test,kind,n,alpha,rho,param_name,param_value,trials,"
         "tpr,tpr_se,fpr,fpr_se,fdr,fdr_se,reject_rate,reject_rate_se,nonfinite_trials";
}

void write_metrics_csv(const std::vector<MetricsRow>& rows, std::ostream& out) {
  out << metrics_csv_header() << "\n";
  auto opt = [](const std::optional<RateEstimate>& e, bool se) {
    return e ? fmt(se ? e->se : e->mean) : std::string();
  };
  for (const auto& r : rows) {
    const auto& s = r.summary;
    out << kSchemaVersion << "," << r.problem << "," << r.test << "," << r.kind << "," << r.n << "," << fmt(r.alpha)
        << "," << (r.test == "relmulti" ? fmt(r.rho) : "") << "," << r.param_name << ","
        << (r.param_name.empty() ? "" : fmt(r.param_value)) << "," << s.trials << "," << opt(s.tpr, false) << ","
        << opt(s.tpr, true) << "," << opt(s.fpr, false) << "," << opt(s.fpr, true) << "," << fmt(s.fdr.mean) << ","
        << fmt(s.fdr.se) << "," << fmt(s.reject_rate.mean) << "," << fmt(s.reject_rate.se) << ","
        << r.nonfinite_trials << "\n";
  }
}

void write_calibration_csv(const CalibrationResult& result, std::ostream& out) {
  out << "schema_version,p,ecdf\n";
  const double t = static_cast<double>(result.pvalues.size());
  for (std::size_t i = 0; i < result.pvalues.size(); ++i) {
    out << kSchemaVersion << "," << fmt(result.pvalues[i]) << "," << fmt(static_cast<double>(i + 1) / t) << "\n";
  }
}

}  // namespace relcomp
