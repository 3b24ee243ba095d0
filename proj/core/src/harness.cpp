#include "relcomp/harness.hpp"

#include "relcomp/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace relcomp {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool finite_or_nan(double v) { return std::isfinite(v) || std::isnan(v); }

}  // namespace

std::string to_string(TestKind test) {
  switch (test) {
    case TestKind::RelPsi: return "relpsi";
    case TestKind::RelMulti: return "relmulti";
    case TestKind::RelPair: return "relpair";
    case TestKind::RelPsiFixed: return "relpsi-fixed";
  }
  return "?";
}

TestKind parse_test_kind(const std::string& name) {
  if (name == "relpsi") return TestKind::RelPsi;
  if (name == "relmulti") return TestKind::RelMulti;
  if (name == "relpair") return TestKind::RelPair;
  if (name == "relpsi-fixed") return TestKind::RelPsiFixed;
  throw InvalidArgument("unknown test '" + name + "'; expected relpsi, relmulti, relpair or relpsi-fixed");
}

BandwidthChoice BandwidthChoice::parse(const std::string& text) {
  BandwidthChoice c;
  if (text == "median") {
    c.rule = BandwidthRule::Median;
    return c;
  }
  if (text == "auto") return c;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || !(v > 0.0) || !std::isfinite(v)) {
    throw InvalidArgument("bandwidth must be 'median', 'auto' or a positive number, got '" + text + "'");
  }
  c.rule = BandwidthRule::Fixed;
  c.value = v;
  return c;
}

std::string BandwidthChoice::to_string() const {
  switch (rule) {
    case BandwidthRule::Auto: return "auto";
    case BandwidthRule::Median: return "median";
    case BandwidthRule::Fixed: return std::to_string(value);
  }
  return "?";
}

void RunConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("rho must lie in (0, 1)");
  if (trials < 1) throw InvalidArgument("trials must be at least 1");
  if (n < 4) throw InvalidArgument("n must be at least 4");
  if (bandwidth.rule == BandwidthRule::Fixed && !(bandwidth.value > 0.0)) {
    throw InvalidArgument("bandwidth must be positive");
  }
  if (kernel == KernelFamily::IMQ) (void)KernelSpec::imq(imq_c, imq_beta);
  const auto l = make_problem(problem, params, seed).candidates.size();
  if (test == TestKind::RelPair && l != 2) {
    throw InvalidArgument("relpair needs exactly two candidate models, problem '" + problem + "' has " +
                          std::to_string(l));
  }
  if (test == TestKind::RelPsiFixed && (target >= l || reference >= l || target == reference)) {
    throw InvalidArgument("relpsi-fixed: target and reference must be distinct model indices");
  }
}

KernelSpec resolve_kernel(const RunConfig& config, const Problem& problem, const TrialData& data) {
  if (config.kernel == KernelFamily::IMQ) return KernelSpec::imq(config.imq_c, config.imq_beta);
  if (config.bandwidth.rule == BandwidthRule::Fixed) return KernelSpec::gaussian(config.bandwidth.value);
  if (config.bandwidth.rule == BandwidthRule::Auto) {
    if (!is_mmd(config.kind) && problem.ksd_bandwidth) return KernelSpec::gaussian(*problem.ksd_bandwidth);
    if (problem.bandwidth) return KernelSpec::gaussian(*problem.bandwidth);
  }
  if (!is_mmd(config.kind)) return KernelSpec::gaussian(median_heuristic(data.reference, config.median_max_points));
  std::vector<const Sample*> parts{&data.reference};
  for (const auto& m : data.models) parts.push_back(&std::get<SampleModel>(m).sample);
  return KernelSpec::gaussian(median_heuristic(stack_rows(parts), config.median_max_points));
}

TrialOutcome run_trial(const RunConfig& config, std::size_t trial) {
  const std::uint64_t seed = config.seed + trial;
  const Problem problem = make_problem(config.problem, config.params, seed);
  const TrialData data = draw_trial(problem, config.kind, config.n, seed);
  const KernelSpec spec = resolve_kernel(config, problem, data);
  const std::size_t l = data.models.size();

  TrialOutcome out;
  out.trial = trial;
  out.positive.assign(l, false);
  out.pvalues.assign(l, kNaN);
  out.statistics.assign(l, kNaN);
  out.as_good = problem.as_good();
  out.worse = problem.worse();
  out.bandwidth = spec.bandwidth;

  std::vector<double> checked;
  switch (config.test) {
    case TestKind::RelPsi:
    case TestKind::RelMulti: {
      const auto r = config.test == TestKind::RelPsi
                         ? rel_psi(data.models, data.reference, spec, config.kind, config.alpha)
                         : rel_multi(data.models, data.reference, spec, config.kind, config.alpha, config.rho);
      out.selected = r.selected;
      out.positive = r.decisions;
      for (const auto& t : r.tests) {
        out.pvalues[t.index] = t.pvalue;
        out.statistics[t.index] = t.statistic;
        checked.insert(checked.end(), {t.statistic, t.sigma, t.pvalue});
        if (t.threshold) checked.push_back(*t.threshold);
      }
      for (Eigen::Index j = 0; j < r.discrepancies.size(); ++j) checked.push_back(r.discrepancies(j));
      break;
    }
    case TestKind::RelPair: {
      const auto r = rel_pair(data.models[0], data.models[1], data.reference, spec, config.kind, config.alpha);
      out.selected = 1;
      out.positive[0] = r.reject;
      out.pvalues[0] = r.pvalue;
      out.statistics[0] = r.statistic;
      checked = {r.statistic, r.sigma, r.threshold, r.pvalue};
      break;
    }
    case TestKind::RelPsiFixed: {
      const auto r = rel_psi_fixed(data.models, data.reference, spec, config.kind, config.alpha,
                                   config.target, config.reference);
      out.selected = r.reference;
      out.positive[config.target] = r.reject;
      out.pvalues[config.target] = r.pvalue;
      out.statistics[config.target] = r.statistic;
      checked = {r.statistic, r.sigma, r.threshold, r.pvalue};
      break;
    }
  }
  out.finite = std::all_of(checked.begin(), checked.end(), [](double v) { return std::isfinite(v); }) &&
               std::all_of(out.pvalues.begin(), out.pvalues.end(), finite_or_nan);
  return out;
}

std::vector<TrialOutcome> run_trials(const RunConfig& config) {
  config.validate();
  std::vector<TrialOutcome> results(config.trials);
  std::vector<std::exception_ptr> errors(config.trials);
  std::size_t workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, config.trials);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t t = next++; t < config.trials; t = next++) {
      try {
        results[t] = run_trial(config, t);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

MetricsRow bench(const RunConfig& config, const std::string& param_name, double param_value) {
  const auto outcomes = run_trials(config);
  MetricsRow row;
  row.problem = config.problem;
  row.test = to_string(config.test);
  row.kind = to_string(config.kind);
  row.n = config.n;
  row.alpha = config.alpha;
  row.rho = config.rho;
  row.param_name = param_name;
  row.param_value = param_value;
  std::vector<TrialRates> rates;
  for (const auto& o : outcomes) {
    rates.push_back(trial_rates(o.positive, o.as_good, o.worse));
    if (!o.finite) ++row.nonfinite_trials;
  }
  row.summary = summarize(rates);
  return row;
}

RunConfig with_param(const RunConfig& config, const std::string& param, double value) {
  RunConfig c = config;
  if (param == "n") {
    if (!(value >= 4) || value != std::floor(value)) throw InvalidArgument("sweep: n must be an integer >= 4");
    c.n = static_cast<std::size_t>(value);
  } else if (param == "alpha") {
    c.alpha = value;
  } else if (param == "rho") {
    c.rho = value;
  } else {
    const auto defaults = default_params(c.problem);
    if (!defaults.count(param)) {
      throw InvalidArgument("sweep parameter '" + param + "' is neither n, alpha, rho nor a parameter of '" +
                            c.problem + "'");
    }
    c.params[param] = value;
  }
  return c;
}

std::vector<MetricsRow> run_plan(const BenchPlan& plan) {
  std::vector<MetricsRow> rows;
  for (const auto& run : plan.runs) {
    if (!plan.sweep) {
      rows.push_back(bench(run));
      continue;
    }
    for (double v : plan.sweep->values) {
      rows.push_back(bench(with_param(run, plan.sweep->param, v), plan.sweep->param, v));
    }
  }
  return rows;
}

CalibrationResult calibrate(const RunConfig& config) {
  const auto outcomes = run_trials(config);
  CalibrationResult r;
  for (const auto& o : outcomes) {
    if (!o.finite) ++r.nonfinite_trials;
    for (double p : o.pvalues) {
      if (!std::isnan(p)) r.pvalues.push_back(p);
    }
  }
  std::sort(r.pvalues.begin(), r.pvalues.end());
  r.ks_distance = ks_uniform_distance(r.pvalues);
  return r;
}

}  // namespace relcomp

namespace relcomp {

namespace {

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size() || !std::isfinite(v)) {
    throw InvalidArgument("'" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  if (v < 0 || v != std::floor(v) || v > 9.0e15) {
    throw InvalidArgument("'" + key + "' expects a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "problem") {
    (void)default_params(value);
    c.problem = value;
  } else if (key == "test") {
    c.test = parse_test_kind(value);
  } else if (key == "kind") {
    c.kind = parse_discrepancy_kind(value);
  } else if (key == "kernel") {
    if (value == "gaussian") c.kernel = KernelFamily::Gaussian;
    else if (value == "imq") c.kernel = KernelFamily::IMQ;
    else throw InvalidArgument("unknown kernel '" + value + "'; expected gaussian or imq");
  } else if (key == "bandwidth") {
    c.bandwidth = BandwidthChoice::parse(value);
  } else if (key == "alpha") {
    c.alpha = parse_double(key, value);
  } else if (key == "rho") {
    c.rho = parse_double(key, value);
  } else if (key == "imq_c") {
    c.imq_c = parse_double(key, value);
  } else if (key == "imq_beta") {
    c.imq_beta = parse_double(key, value);
  } else if (key == "trials") {
    c.trials = parse_count(key, value);
  } else if (key == "n") {
    c.n = parse_count(key, value);
  } else if (key == "seed") {
    c.seed = parse_count(key, value);
  } else if (key == "target") {
    c.target = parse_count(key, value);
  } else if (key == "reference") {
    c.reference = parse_count(key, value);
  } else if (key == "threads") {
    c.threads = parse_count(key, value);
  } else if (key == "median_max_points") {
    c.median_max_points = parse_count(key, value);
  } else if (key == "out") {
    c.out = value;
  } else {
    throw InvalidArgument("unknown setting '" + key + "'");
  }
}

}  // namespace relcomp
