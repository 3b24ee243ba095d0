#pragma once

#include "relcomp/comparison.hpp"
#include "relcomp/harness.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace relcomp {

inline constexpr int kSchemaVersion = 1;

/// Numeric CSV, one observation per row, no header. Throws InvalidArgument
/// naming the source and line on empty input, ragged rows or bad numbers.
Sample parse_csv_sample(std::istream& in, const std::string& source = "<stream>");
Sample read_csv_sample(const std::string& path);
void write_csv_sample(const Sample& sample, std::ostream& out);

/// Built-in density from a JSON model file:
///   {"type": "gaussian", "mean": [...], "covariance": [[...], ...]}
///   {"type": "mixture", "weights": [...], "components": [<gaussian>, ...]}
///   {"type": "rbm", "B": [[...], ...], "b": [...], "c": [...]}
DensityModel parse_density_model(const std::string& json_text, const std::string& source = "<string>");
/// `.json` files load as densities, anything else as a CSV sample.
CandidateModel load_model(const std::string& path);

/// Bench/calibrate config. Top-level keys are RunConfig settings plus
/// "schema_version", "params" (problem parameters), "runs" (list of setting
/// overrides, one run each) and "sweep" ({"param": ..., "values": [...]}).
/// `overrides` are applied last, to every run.
BenchPlan parse_bench_plan(const std::string& json_text,
                           const std::map<std::string, std::string>& overrides = {});
std::string read_text_file(const std::string& path);

/// Flat per-model view of one comparison, used for the JSON result and the
/// verdict table. Arrays are indexed by model; absent entries are null.
struct CompareReport {
  std::string test;
  std::string kind;
  KernelSpec kernel;
  std::string bandwidth_rule;
  double alpha = 0.05;
  std::size_t n = 0;
  std::vector<std::string> models;
  std::optional<std::size_t> selected;
  std::size_t reference = 0;
  std::vector<double> discrepancies;
  std::vector<bool> decisions;
  std::vector<std::optional<double>> statistics;
  std::vector<std::optional<double>> sigmas;
  std::vector<std::optional<double>> thresholds;
  std::vector<std::optional<double>> pvalues;
  std::vector<std::optional<TruncationInterval>> intervals;
  bool regularized = false;
  std::optional<double> rho;
  std::size_t selection_size = 0;
  std::size_t test_size = 0;
};

CompareReport make_report(const ComparisonResult& result, std::vector<std::string> models);
CompareReport make_report(const PairResult& pair, DiscrepancyKind kind, const KernelSpec& kernel, double alpha,
                          std::size_t n, std::vector<std::string> models);

/// Infinite interval ends are written as the strings "inf" / "-inf".
std::string report_json(const CompareReport& report);
std::string report_table(const CompareReport& report);

std::string metrics_csv_header();
void write_metrics_csv(const std::vector<MetricsRow>& rows, std::ostream& out);
/// (p, ECDF(p)) pairs of the sorted p-values.
void write_calibration_csv(const CalibrationResult& result, std::ostream& out);

}  // namespace relcomp
