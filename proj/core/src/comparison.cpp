#include "relcomp/comparison.hpp"

#include "relcomp/error.hpp"
#include "relcomp/normal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace relcomp {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
}

// Split every sample-model sample and the reference at the same row.
struct Split {
  std::vector<CandidateModel> models;
  Sample reference;
};

Split take_split(const std::vector<CandidateModel>& models, const Sample& reference,
                 std::size_t begin, std::size_t count) {
  Split out;
  out.reference = take_rows(reference, begin, count);
  out.models.reserve(models.size());
  for (const auto& m : models) {
    if (const auto* s = std::get_if<SampleModel>(&m)) {
      out.models.emplace_back(SampleModel{take_rows(s->sample, begin, count)});
    } else {
      out.models.push_back(m);
    }
  }
  return out;
}

double contrast_sigma(const Matrix& sigma_hat, const Contrast& c) {
  return std::sqrt(std::max(c.eta.dot(sigma_hat * c.eta), 0.0));
}

}  // namespace

std::size_t select_reference(const Vector& values) {
  if (values.size() < 2) throw InvalidArgument("select_reference: need at least 2 values");
  if (!values.allFinite()) throw InvalidArgument("select_reference: values must be finite");
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < values.size(); ++j) {
    if (values(j) < values(best)) best = j;
  }
  return static_cast<std::size_t>(best);
}

void validate_candidates(const std::vector<CandidateModel>& models, const Sample& reference,
                         DiscrepancyKind kind) {
  if (models.empty()) throw InvalidArgument("no candidate models given");
  require_finite(reference, "reference");
  const auto d = static_cast<std::size_t>(reference.cols());
  for (std::size_t j = 0; j < models.size(); ++j) {
    const std::string who = "candidate " + std::to_string(j);
    if (const auto* s = std::get_if<SampleModel>(&models[j])) {
      if (!is_mmd(kind)) {
        throw InvalidArgument(who + " is a sample model but kind " + to_string(kind) +
                              " needs score functions");
      }
      if (static_cast<std::size_t>(s->sample.cols()) != d) {
        throw DimensionMismatch(who + " has dimension " + std::to_string(s->sample.cols()) +
                                ", reference has " + std::to_string(d));
      }
      if (s->sample.rows() != reference.rows()) {
        throw InvalidArgument(who + " has " + std::to_string(s->sample.rows()) +
                              " rows, reference has " + std::to_string(reference.rows()));
      }
      require_finite(s->sample, who);
    } else {
      const auto& dm = std::get<DensityModel>(models[j]);
      if (is_mmd(kind)) {
        throw InvalidArgument(who + " is a density model but kind " + to_string(kind) +
                              " needs samples");
      }
      if (!dm.score) throw InvalidArgument(who + " has no score function");
      if (dm.dim != d) {
        throw DimensionMismatch(who + " has dimension " + std::to_string(dm.dim) +
                                ", reference has " + std::to_string(d));
      }
    }
  }
}

DiscrepancyVector estimate_discrepancies(const std::vector<CandidateModel>& models,
                                         const Sample& reference, const KernelSpec& spec,
                                         DiscrepancyKind kind) {
  validate_candidates(models, reference, kind);
  if (is_mmd(kind)) {
    std::vector<Sample> samples;
    samples.reserve(models.size());
    for (const auto& m : models) samples.push_back(std::get<SampleModel>(m).sample);
    return mmd_discrepancy_vector(spec, kind, samples, reference);
  }
  std::vector<ScoreFunction> scores;
  scores.reserve(models.size());
  for (const auto& m : models) scores.push_back(std::get<DensityModel>(m).score);
  return ksd_discrepancy_vector(spec, kind, scores, reference);
}

ComparisonResult rel_psi(const std::vector<CandidateModel>& models, const Sample& reference,
                         const KernelSpec& spec, DiscrepancyKind kind, double alpha) {
  check_alpha(alpha);
  const std::size_t l = models.size();
  if (l < 2) throw InvalidArgument("rel_psi: need at least 2 candidate models");
  if (reference.rows() < 4) throw InvalidArgument("rel_psi: need at least 4 observations");

  const DiscrepancyVector dv = estimate_discrepancies(models, reference, spec, kind);
  ComparisonResult out;
  out.test = "relpsi";
  out.kind = kind;
  out.kernel = spec;
  out.alpha = alpha;
  out.n = dv.n;
  out.discrepancies = dv.estimates;
  out.selected = select_reference(dv.values);
  out.decisions.assign(l, false);
  out.diagnostics.regularized = dv.regularized;
  out.diagnostics.selection_size = dv.n;
  out.diagnostics.test_size = dv.n;

  const SelectionEvent event = SelectionEvent::argmin(l, out.selected);
  for (std::size_t i = 0; i < l; ++i) {
    if (i == out.selected) continue;
    const Contrast c = Contrast::between(l, i, out.selected);
    ModelTest t;
    t.index = i;
    t.statistic = c.eta.dot(dv.values);
    t.sigma = contrast_sigma(dv.sigma_hat, c);
    const TruncationInterval iv = polyhedral_truncation(event, dv.values, dv.sigma_hat, c);
    t.interval = iv;
    t.threshold = selective_threshold(t.sigma, iv, alpha);
    t.pvalue = selective_pvalue(t.statistic, t.sigma, iv);
    t.reject = t.statistic > *t.threshold;
    out.decisions[i] = t.reject;
    out.tests.push_back(t);
  }
  return out;
}

FixedTestResult rel_psi_fixed(const std::vector<CandidateModel>& models, const Sample& reference,
                              const KernelSpec& spec, DiscrepancyKind kind, double alpha,
                              std::size_t target, std::size_t reference_index) {
  check_alpha(alpha);
  const std::size_t l = models.size();
  if (l < 2) throw InvalidArgument("rel_psi_fixed: need at least 2 candidate models");
  if (reference.rows() < 4) throw InvalidArgument("rel_psi_fixed: need at least 4 observations");
  const Contrast c = Contrast::between(l, target, reference_index);

  const DiscrepancyVector dv = estimate_discrepancies(models, reference, spec, kind);
  FixedTestResult out;
  out.target = target;
  out.reference = reference_index;
  out.selected = select_reference(dv.values);
  out.regularized = dv.regularized;
  out.statistic = c.eta.dot(dv.values);
  out.sigma = contrast_sigma(dv.sigma_hat, c);
  out.interval = polyhedral_truncation(SelectionEvent::argmin(l, out.selected), dv.values,
                                       dv.sigma_hat, c);
  out.threshold = selective_threshold(out.sigma, out.interval, alpha);
  out.pvalue = selective_pvalue(out.statistic, out.sigma, out.interval);
  out.reject = out.statistic > out.threshold;
  return out;
}

std::vector<bool> by_correction(const std::vector<double>& pvalues, double alpha) {
  check_alpha(alpha);
  const std::size_t m = pvalues.size();
  for (double p : pvalues) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("by_correction: p-values must lie in [0, 1]");
  }
  std::vector<bool> reject(m, false);
  if (m == 0) return reject;
  double harmonic = 0.0;
  for (std::size_t k = 1; k <= m; ++k) harmonic += 1.0 / static_cast<double>(k);

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return pvalues[a] < pvalues[b]; });
  std::size_t last = 0;  // number of rejections
  for (std::size_t rank = 1; rank <= m; ++rank) {
    const double bound = static_cast<double>(rank) * alpha / (static_cast<double>(m) * harmonic);
    if (pvalues[order[rank - 1]] <= bound) last = rank;
  }
  for (std::size_t r = 0; r < last; ++r) reject[order[r]] = true;
  return reject;
}

ComparisonResult rel_multi(const std::vector<CandidateModel>& models, const Sample& reference,
                           const KernelSpec& spec, DiscrepancyKind kind, double alpha, double rho) {
  check_alpha(alpha);
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("rel_multi: rho must lie in (0, 1)");
  const std::size_t l = models.size();
  if (l < 2) throw InvalidArgument("rel_multi: need at least 2 candidate models");
  validate_candidates(models, reference, kind);

  const auto n = static_cast<std::size_t>(reference.rows());
  const auto n_test = static_cast<std::size_t>(std::floor(rho * static_cast<double>(n)));
  const std::size_t n_select = n - n_test;
  if (n_test < 2 || n_select < 2) {
    throw InvalidArgument("rel_multi: split of " + std::to_string(n) + " rows with rho=" +
                          std::to_string(rho) + " leaves fewer than 2 rows on one side");
  }
  const Split selection = take_split(models, reference, 0, n_select);
  const Split testing = take_split(models, reference, n_select, n_test);

  const DiscrepancyVector dv0 = estimate_discrepancies(selection.models, selection.reference, spec, kind);
  const DiscrepancyVector dv1 = estimate_discrepancies(testing.models, testing.reference, spec, kind);

  ComparisonResult out;
  out.test = "relmulti";
  out.kind = kind;
  out.kernel = spec;
  out.alpha = alpha;
  out.n = n;
  out.discrepancies = dv0.estimates;
  out.selected = select_reference(dv0.values);
  out.decisions.assign(l, false);
  out.diagnostics.regularized = dv1.regularized;
  out.diagnostics.rho = rho;
  out.diagnostics.selection_size = n_select;
  out.diagnostics.test_size = n_test;

  std::vector<double> pvalues;
  for (std::size_t i = 0; i < l; ++i) {
    if (i == out.selected) continue;
    const Contrast c = Contrast::between(l, i, out.selected);
    ModelTest t;
    t.index = i;
    t.statistic = c.eta.dot(dv1.values);
    t.sigma = contrast_sigma(dv1.sigma_hat, c);
    t.pvalue = t.sigma > 0.0 ? normal::sf(t.statistic / t.sigma) : (t.statistic > 0.0 ? 0.0 : 1.0);
    pvalues.push_back(t.pvalue);
    out.tests.push_back(t);
  }
  const std::vector<bool> rejected = by_correction(pvalues, alpha);
  for (std::size_t k = 0; k < out.tests.size(); ++k) {
    out.tests[k].reject = rejected[k];
    out.decisions[out.tests[k].index] = rejected[k];
  }
  return out;
}

PairResult rel_pair(const CandidateModel& model1, const CandidateModel& model2,
                    const Sample& reference, const KernelSpec& spec, DiscrepancyKind kind,
                    double alpha) {
  check_alpha(alpha);
  const std::vector<CandidateModel> models{model1, model2};
  const DiscrepancyVector dv = estimate_discrepancies(models, reference, spec, kind);
  const Contrast c = Contrast::between(2, 0, 1);
  PairResult out;
  out.regularized = dv.regularized;
  out.statistic = c.eta.dot(dv.values);
  out.sigma = contrast_sigma(dv.sigma_hat, c);
  out.threshold = out.sigma * normal::quantile(1.0 - alpha);
  out.pvalue = out.sigma > 0.0 ? normal::sf(out.statistic / out.sigma) : (out.statistic > 0.0 ? 0.0 : 1.0);
  out.reject = out.statistic > out.threshold;
  return out;
}

}  // namespace relcomp
