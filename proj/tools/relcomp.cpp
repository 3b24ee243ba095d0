// relcomp: relative model comparison from the command line.
//
//   relcomp compare --data data.csv --model a.csv --model b.csv [--test relpsi] ...
//   relcomp bench --config run.json [overrides] --out metrics.csv
//   relcomp calibrate --problem mean_shift --param mu1=2.5 --param mu2=2.5 --out ecdf.csv
//
// Exit codes: 0 ok, 1 runtime failure, 2 bad input or arguments.

#include <CLI11.hpp>

#include "relcomp/comparison.hpp"
#include "relcomp/error.hpp"
#include "relcomp/harness.hpp"
#include "relcomp/io.hpp"
#include "relcomp/kernels.hpp"
#include "relcomp/models.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace {

using namespace relcomp;

constexpr int kExitInput = 2;

// Flags shared by all subcommands; only flags the user actually passed are
// applied, so they override config files.
struct CommonFlags {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> opts;

  void add(CLI::App* app, const std::string& key, const std::string& help) {
    opts.emplace_back(key, app->add_option("--" + key, values[key], help));
  }
  std::map<std::string, std::string> given() const {
    std::map<std::string, std::string> out;
    for (const auto& [key, opt] : opts) {
      if (opt->count() > 0) out[key] = values.at(key);
    }
    return out;
  }
};

void add_test_flags(CLI::App* app, CommonFlags& f) {
  f.add(app, "test", "relpsi | relmulti | relpair | relpsi-fixed");
  f.add(app, "kind", "mmd | mmd-lin | ksd | ksd-lin");
  f.add(app, "kernel", "gaussian | imq");
  f.add(app, "bandwidth", "median | auto | <positive float> (gaussian kernel)");
  f.add(app, "alpha", "significance level");
  f.add(app, "rho", "relmulti: fraction of rows used for testing");
  f.add(app, "seed", "root seed");
  f.add(app, "imq_c", "imq kernel c");
  f.add(app, "imq_beta", "imq kernel beta in (-1, 0)");
  f.add(app, "target", "relpsi-fixed: index of the model tested as worse");
  f.add(app, "reference", "relpsi-fixed: index of the comparison model");
}

Sample shuffled(const Sample& s, std::uint64_t seed) {
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(s.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  Sample out(s.rows(), s.cols());
  for (std::size_t i = 0; i < perm.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = s.row(perm[i]);
  return out;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << text;
}

int run_compare(const std::string& reference_path, const std::vector<std::string>& model_paths,
                const std::map<std::string, std::string>& flags, const std::string& out_path) {
  RunConfig cfg;
  cfg.bandwidth.rule = BandwidthRule::Median;
  for (const auto& [k, v] : flags) apply_setting(cfg, k, v);
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");

  Sample reference = read_csv_sample(reference_path);
  std::vector<CandidateModel> models;
  std::vector<std::string> names;
  for (const auto& p : model_paths) {
    models.push_back(load_model(p));
    names.push_back(std::filesystem::path(p).stem().string());
  }
  if (models.size() < 2) throw InvalidArgument("need at least two --model inputs");
  validate_candidates(models, reference, cfg.kind);

  if (cfg.test == TestKind::RelMulti) {
    // the split takes leading rows; shuffle so file order cannot bias it
    reference = shuffled(reference, derive_seed(cfg.seed, 0));
    for (std::size_t j = 0; j < models.size(); ++j) {
      if (auto* s = std::get_if<SampleModel>(&models[j])) s->sample = shuffled(s->sample, derive_seed(cfg.seed, j + 1));
    }
  }

  KernelSpec spec;
  std::string rule = cfg.bandwidth.to_string();
  if (cfg.kernel == KernelFamily::IMQ) {
    spec = KernelSpec::imq(cfg.imq_c, cfg.imq_beta);
  } else if (cfg.bandwidth.rule == BandwidthRule::Fixed) {
    spec = KernelSpec::gaussian(cfg.bandwidth.value);
  } else {
    rule = "median";
    std::vector<const Sample*> parts{&reference};
    for (const auto& m : models) {
      if (const auto* s = std::get_if<SampleModel>(&m)) parts.push_back(&s->sample);
    }
    spec = KernelSpec::gaussian(median_heuristic(stack_rows(parts)));
  }

  const auto n = static_cast<std::size_t>(reference.rows());
  CompareReport report;
  switch (cfg.test) {
    case TestKind::RelPsi:
      report = make_report(rel_psi(models, reference, spec, cfg.kind, cfg.alpha), names);
      break;
    case TestKind::RelMulti:
      report = make_report(rel_multi(models, reference, spec, cfg.kind, cfg.alpha, cfg.rho), names);
      break;
    case TestKind::RelPair:
      if (models.size() != 2) throw InvalidArgument("relpair takes exactly two --model inputs");
      report = make_report(rel_pair(models[0], models[1], reference, spec, cfg.kind, cfg.alpha), cfg.kind, spec,
                           cfg.alpha, n, names);
      break;
    case TestKind::RelPsiFixed: {
      const auto r = rel_psi_fixed(models, reference, spec, cfg.kind, cfg.alpha, cfg.target, cfg.reference);
      PairResult p{r.statistic, r.sigma, r.threshold, r.pvalue, r.reject, r.regularized};
      report = make_report(p, cfg.kind, spec, cfg.alpha, n, names);
      report.test = "relpsi-fixed";
      const std::size_t l = models.size();
      report.decisions.assign(l, false);
      report.decisions[cfg.target] = r.reject;
      report.statistics.assign(l, std::nullopt);
      report.sigmas.assign(l, std::nullopt);
      report.thresholds.assign(l, std::nullopt);
      report.pvalues.assign(l, std::nullopt);
      report.intervals.assign(l, std::nullopt);
      report.statistics[cfg.target] = r.statistic;
      report.sigmas[cfg.target] = r.sigma;
      report.thresholds[cfg.target] = r.threshold;
      report.pvalues[cfg.target] = r.pvalue;
      report.intervals[cfg.target] = r.interval;
      report.selected = r.selected;
      report.reference = r.reference;
      break;
    }
  }
  report.bandwidth_rule = rule;

  const bool to_stdout = out_path.empty() || out_path == "-";
  (to_stdout ? std::cerr : std::cout) << report_table(report);
  write_output(out_path, report_json(report));
  return 0;
}

BenchPlan make_plan(const std::string& config_path, const std::string& problem,
                    const std::vector<std::string>& params, const std::string& sweep,
                    std::map<std::string, std::string> flags) {
  std::string text = config_path.empty() ? std::string("{}") : read_text_file(config_path);
  if (!problem.empty()) flags["problem"] = problem;
  BenchPlan plan = parse_bench_plan(text, flags);
  for (const auto& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--param expects key=value, got '" + kv + "'");
    const std::string key = kv.substr(0, eq);
    for (auto& run : plan.runs) {
      run = with_param(run, key, std::stod(kv.substr(eq + 1)));
      run.validate();
    }
  }
  if (!sweep.empty()) {
    const auto eq = sweep.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--sweep expects param=v1,v2,..., got '" + sweep + "'");
    Sweep s;
    s.param = sweep.substr(0, eq);
    std::stringstream ss(sweep.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      if (used != item.size()) throw InvalidArgument("--sweep: bad value '" + item + "'");
      s.values.push_back(v);
    }
    if (s.values.empty()) throw InvalidArgument("--sweep: no values");
    for (const auto& run : plan.runs)
      for (double v : s.values) with_param(run, s.param, v).validate();
    plan.sweep = s;
  }
  return plan;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative comparison of candidate models against a reference sample"};
  app.require_subcommand(1);

  auto* compare = app.add_subcommand("compare", "compare candidate models on user data; writes JSON");
  CommonFlags cflags;
  std::string reference_path, out_path = "-";
  std::vector<std::string> model_paths;
  compare->add_option("--data", reference_path, "reference sample CSV (rows = observations)")->required();
  compare->add_option("--model,-m", model_paths,
                      "candidate: CSV sample (mmd kinds) or JSON density model (ksd kinds); repeat per model")
      ->required();
  compare->add_option("--out", out_path, "result JSON path ('-' = stdout, table then goes to stderr)");
  add_test_flags(compare, cflags);

  auto* bench_cmd = app.add_subcommand("bench", "Monte-Carlo rejection rates; writes metrics CSV");
  auto* calib_cmd = app.add_subcommand("calibrate", "p-value calibration study; writes ECDF CSV");
  struct RunFlags {
    CommonFlags flags;
    std::string config, problem, sweep, out = "-";
    std::vector<std::string> params;
  } bflags, kflags;
  for (auto [cmd, rf] : {std::pair{bench_cmd, &bflags}, std::pair{calib_cmd, &kflags}}) {
    cmd->add_option("--config", rf->config, "JSON run config");
    cmd->add_option("--problem", rf->problem, "problem name");
    cmd->add_option("--param", rf->params, "problem parameter key=value (repeatable)");
    add_test_flags(cmd, rf->flags);
    rf->flags.add(cmd, "trials", "number of trials");
    rf->flags.add(cmd, "n", "sample size");
    rf->flags.add(cmd, "threads", "worker threads (0 = all cores)");
    cmd->add_option("--out", rf->out, "CSV path ('-' = stdout)");
  }
  bench_cmd->add_option("--sweep", bflags.sweep, "param=v1,v2,... sweep one parameter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*compare) return run_compare(reference_path, model_paths, cflags.given(), out_path);
    if (*bench_cmd) {
      const auto plan = make_plan(bflags.config, bflags.problem, bflags.params, bflags.sweep, bflags.flags.given());
      const auto rows = run_plan(plan);
      std::ostringstream csv;
      write_metrics_csv(rows, csv);
      write_output(bflags.out, csv.str());
      std::size_t bad = 0;
      for (const auto& r : rows) bad += r.nonfinite_trials;
      if (bad) std::cerr << "warning: " << bad << " trial(s) produced non-finite values\n";
      return 0;
    }
    if (*calib_cmd) {
      const auto plan = make_plan(kflags.config, kflags.problem, kflags.params, "", kflags.flags.given());
      if (plan.runs.size() != 1) throw InvalidArgument("calibrate takes a single run configuration");
      const auto result = calibrate(plan.runs.front());
      std::ostringstream csv;
      write_calibration_csv(result, csv);
      write_output(kflags.out, csv.str());
      (kflags.out == "-" ? std::cerr : std::cout)
          << "p-values: " << result.pvalues.size() << ", Kolmogorov distance to uniform: " << result.ks_distance
          << "\n";
      return 0;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: bad numeric value (" << e.what() << ")\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
