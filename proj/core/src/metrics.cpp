#include "relcomp/metrics.hpp"

#include "relcomp/error.hpp"

#include <algorithm>
#include <cmath>

namespace relcomp {

TrialRates trial_rates(const std::vector<bool>& positive, const std::vector<std::size_t>& as_good,
                       const std::vector<std::size_t>& worse) {
  const std::size_t l = positive.size();
  std::vector<int> seen(l, 0);
  for (auto i : as_good) {
    if (i >= l) throw InvalidArgument("trial_rates: index out of range");
    ++seen[i];
  }
  for (auto i : worse) {
    if (i >= l) throw InvalidArgument("trial_rates: index out of range");
    ++seen[i];
  }
  if (std::any_of(seen.begin(), seen.end(), [](int s) { return s != 1; })) {
    throw InvalidArgument("trial_rates: ground-truth sets must partition the models");
  }

  TrialRates r;
  std::size_t fp = 0, tp = 0;
  for (auto i : as_good) fp += positive[i] ? 1 : 0;
  for (auto i : worse) tp += positive[i] ? 1 : 0;
  if (!as_good.empty()) r.fpr = static_cast<double>(fp) / static_cast<double>(as_good.size());
  if (!worse.empty()) r.tpr = static_cast<double>(tp) / static_cast<double>(worse.size());
  const std::size_t total = fp + tp;
  r.fdr = static_cast<double>(fp) / static_cast<double>(std::max<std::size_t>(1, total));
  r.any_positive = total > 0;
  return r;
}

RateEstimate mean_and_se(const std::vector<double>& values) {
  RateEstimate e;
  if (values.empty()) return e;
  double sum = 0.0;
  for (double v : values) sum += v;
  const double t = static_cast<double>(values.size());
  e.mean = sum / t;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    e.se = std::sqrt(ss / (t - 1.0) / t);
  }
  return e;
}

MetricsSummary summarize(const std::vector<TrialRates>& trials) {
  MetricsSummary s;
  s.trials = trials.size();
  std::vector<double> tpr, fpr, fdr, any;
  for (const auto& t : trials) {
    if (t.tpr) tpr.push_back(*t.tpr);
    if (t.fpr) fpr.push_back(*t.fpr);
    fdr.push_back(t.fdr);
    any.push_back(t.any_positive ? 1.0 : 0.0);
  }
  if (!tpr.empty()) s.tpr = mean_and_se(tpr);
  if (!fpr.empty()) s.fpr = mean_and_se(fpr);
  s.fdr = mean_and_se(fdr);
  s.reject_rate = mean_and_se(any);
  return s;
}

double ks_uniform_distance(std::vector<double> pvalues) {
  if (pvalues.empty()) throw InvalidArgument("ks_uniform_distance: no p-values");
  std::sort(pvalues.begin(), pvalues.end());
  const double t = static_cast<double>(pvalues.size());
  double d = 0.0;
  for (std::size_t i = 0; i < pvalues.size(); ++i) {
    const double p = std::clamp(pvalues[i], 0.0, 1.0);
    d = std::max(d, static_cast<double>(i + 1) / t - p);
    d = std::max(d, p - static_cast<double>(i) / t);
  }
  return d;
}

}  // namespace relcomp
