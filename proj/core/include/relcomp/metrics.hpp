#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace relcomp {

/// Rates of one trial. TPR is absent when no model is truly worse, FPR when
/// no model is as good as the best (cannot happen for a well-formed problem).
struct TrialRates {
  std::optional<double> tpr;
  std::optional<double> fpr;
  double fdr = 0.0;
  bool any_positive = false;
};

/// `positive[i]` is true when model i was declared worse than the reference.
/// `as_good` and `worse` must partition {0..l-1}.
TrialRates trial_rates(const std::vector<bool>& positive, const std::vector<std::size_t>& as_good,
                       const std::vector<std::size_t>& worse);

struct RateEstimate {
  double mean = 0.0;
  double se = 0.0;  ///< sample standard deviation / sqrt(T)
};

struct MetricsSummary {
  std::size_t trials = 0;
  std::optional<RateEstimate> tpr;
  std::optional<RateEstimate> fpr;
  RateEstimate fdr;
  RateEstimate reject_rate;  ///< fraction of trials with at least one positive
};

/// Ordered fold over per-trial rates.
MetricsSummary summarize(const std::vector<TrialRates>& trials);

RateEstimate mean_and_se(const std::vector<double>& values);

/// sup |F_n(p) - p| for the empirical CDF of `pvalues` against Uniform[0, 1].
double ks_uniform_distance(std::vector<double> pvalues);

}  // namespace relcomp
