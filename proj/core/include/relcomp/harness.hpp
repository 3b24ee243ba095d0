#pragma once

#include "relcomp/comparison.hpp"
#include "relcomp/discrepancy.hpp"
#include "relcomp/kernels.hpp"
#include "relcomp/metrics.hpp"
#include "relcomp/problems.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace relcomp {

enum class TestKind { RelPsi, RelMulti, RelPair, RelPsiFixed };

std::string to_string(TestKind test);
/// "relpsi", "relmulti", "relpair", "relpsi-fixed".
TestKind parse_test_kind(const std::string& name);

enum class BandwidthRule {
  Auto,    ///< the problem's fixed bandwidth (per kind) if it has one, else the median heuristic
  Median,  ///< always the median heuristic
  Fixed,
};

struct BandwidthChoice {
  BandwidthRule rule = BandwidthRule::Auto;
  double value = 1.0;  ///< used by Fixed

  static BandwidthChoice parse(const std::string& text);  ///< "median", "auto" or a positive number
  std::string to_string() const;
};

struct RunConfig {
  std::string problem = "mean_shift";
  ProblemParams params;
  TestKind test = TestKind::RelPsi;
  DiscrepancyKind kind = DiscrepancyKind::MmdComplete;
  KernelFamily kernel = KernelFamily::Gaussian;
  double imq_c = 1.0;
  double imq_beta = -0.5;
  BandwidthChoice bandwidth;
  double alpha = 0.05;
  std::size_t trials = 100;
  std::size_t n = 1000;
  double rho = 0.5;
  std::uint64_t seed = 0;
  /// relpsi-fixed: H0 D(target) <= D(reference).
  std::size_t target = 0;
  std::size_t reference = 1;
  std::size_t threads = 0;  ///< 0 = hardware concurrency
  /// Cap on pooled rows used by the median heuristic (0 = all).
  std::size_t median_max_points = 2000;
  std::string out;

  /// Checks ranges and the problem registry; throws InvalidArgument.
  void validate() const;
};

/// Sets one field from its textual form; keys match the config file and CLI
/// flags (problem, test, kind, kernel, bandwidth, alpha, rho, trials, n, seed,
/// target, reference, threads, imq_c, imq_beta, median_max_points, out).
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Bandwidth for one trial: median heuristic over the reference pooled with
/// candidate samples (MMD) or over the reference alone (KSD).
KernelSpec resolve_kernel(const RunConfig& config, const Problem& problem, const TrialData& data);

struct TrialOutcome {
  std::size_t trial = 0;
  std::size_t selected = 0;           ///< reference model of the test
  std::vector<bool> positive;         ///< declared worse, per model
  std::vector<double> pvalues;        ///< per model; NaN where no test was run
  std::vector<double> statistics;     ///< per model; NaN where no test was run
  std::vector<std::size_t> as_good;
  std::vector<std::size_t> worse;
  double bandwidth = 0.0;
  bool finite = true;                 ///< every reported number finite
};

/// One seeded trial: trial seed = config.seed + trial.
TrialOutcome run_trial(const RunConfig& config, std::size_t trial);

/// All trials, run on a worker pool and returned in trial order.
std::vector<TrialOutcome> run_trials(const RunConfig& config);

struct MetricsRow {
  std::string problem;
  std::string test;
  std::string kind;
  std::size_t n = 0;
  double alpha = 0.0;
  double rho = 0.0;
  std::string param_name;  ///< swept parameter, empty without a sweep
  double param_value = 0.0;
  MetricsSummary summary;
  std::size_t nonfinite_trials = 0;
};

MetricsRow bench(const RunConfig& config, const std::string& param_name = "", double param_value = 0.0);

/// A bench plan: one or more run configurations, each optionally swept over
/// one parameter ("n", "alpha", "rho" or a problem parameter).
struct Sweep {
  std::string param;
  std::vector<double> values;
};

struct BenchPlan {
  std::vector<RunConfig> runs;
  std::optional<Sweep> sweep;
};

std::vector<MetricsRow> run_plan(const BenchPlan& plan);

/// Applies a sweep value to a copy of `config`.
RunConfig with_param(const RunConfig& config, const std::string& param, double value);

struct CalibrationResult {
  std::vector<double> pvalues;  ///< sorted
  double ks_distance = 0.0;
  std::size_t nonfinite_trials = 0;
};

/// p-values of every test of every trial (selective p-values for relpsi).
CalibrationResult calibrate(const RunConfig& config);

}  // namespace relcomp
