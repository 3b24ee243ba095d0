#pragma once

#include "relcomp/covariance.hpp"
#include "relcomp/discrepancy.hpp"
#include "relcomp/kernels.hpp"
#include "relcomp/sample.hpp"
#include "relcomp/selective_inference.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace relcomp {

/// A candidate represented by draws from it. The sample must have as many
/// rows as the reference sample.
struct SampleModel {
  Sample sample;
};

/// A candidate represented by its score function grad log p.
struct DensityModel {
  ScoreFunction score;
  std::size_t dim = 0;
};

using CandidateModel = std::variant<SampleModel, DensityModel>;

/// One hypothesis "candidate `index` is worse than the reference".
struct ModelTest {
  std::size_t index = 0;
  double statistic = 0.0;  ///< eta^T z
  double sigma = 0.0;      ///< sqrt(eta^T Sigma_hat eta)
  std::optional<TruncationInterval> interval;
  std::optional<double> threshold;
  double pvalue = 1.0;
  bool reject = false;
};

struct ComparisonDiagnostics {
  bool regularized = false;
  std::optional<double> rho;
  std::size_t selection_size = 0;
  std::size_t test_size = 0;
};

struct ComparisonResult {
  std::string test;  ///< "relpsi" or "relmulti"
  DiscrepancyKind kind = DiscrepancyKind::MmdComplete;
  KernelSpec kernel;
  double alpha = 0.05;
  std::size_t n = 0;
  std::size_t selected = 0;
  Vector discrepancies;          ///< D_hat(P_j, R) used for selection
  std::vector<bool> decisions;   ///< true = declared worse than the reference
  std::vector<ModelTest> tests;  ///< l - 1 entries, ordered by index
  ComparisonDiagnostics diagnostics;
};

/// Result of a single fixed hypothesis H0: D(P_target, R) <= D(P_reference, R).
struct FixedTestResult {
  std::size_t target = 0;
  std::size_t reference = 0;
  std::size_t selected = 0;
  double statistic = 0.0;
  double sigma = 0.0;
  TruncationInterval interval{-std::numeric_limits<double>::infinity(),
                              std::numeric_limits<double>::infinity()};
  double threshold = 0.0;
  double pvalue = 1.0;
  bool reject = false;
  bool regularized = false;
};

/// Index of the smallest value; ties go to the lowest index.
std::size_t select_reference(const Vector& values);

/// Checks tags, dimensions and sizes; throws InvalidArgument on mismatch.
void validate_candidates(const std::vector<CandidateModel>& models, const Sample& reference,
                         DiscrepancyKind kind);

/// z and Sigma_hat for the candidates on `reference`.
DiscrepancyVector estimate_discrepancies(const std::vector<CandidateModel>& models,
                                         const Sample& reference, const KernelSpec& spec,
                                         DiscrepancyKind kind);

/// Selection and testing on the full sample with truncated-normal thresholds.
ComparisonResult rel_psi(const std::vector<CandidateModel>& models, const Sample& reference,
                         const KernelSpec& spec, DiscrepancyKind kind, double alpha);

/// The selective test of one fixed contrast: target minus reference, truncated
/// by the realized arg-min selection event.
FixedTestResult rel_psi_fixed(const std::vector<CandidateModel>& models, const Sample& reference,
                              const KernelSpec& spec, DiscrepancyKind kind, double alpha,
                              std::size_t target, std::size_t reference_index);

/// Selection on the first (1 - rho) n rows, normal-theory tests on the
/// remaining rho n rows, then Benjamini-Yekutieli across the l - 1 p-values.
ComparisonResult rel_multi(const std::vector<CandidateModel>& models, const Sample& reference,
                           const KernelSpec& spec, DiscrepancyKind kind, double alpha, double rho);

/// Benjamini-Yekutieli step-up; entry i is true when hypothesis i is rejected.
std::vector<bool> by_correction(const std::vector<double>& pvalues, double alpha);

struct PairResult {
  double statistic = 0.0;  ///< sqrt(n) (D_hat(P1, R) - D_hat(P2, R))
  double sigma = 0.0;
  double threshold = 0.0;  ///< sigma * Phi^{-1}(1 - alpha)
  double pvalue = 1.0;
  bool reject = false;
  bool regularized = false;
};

/// Fixed two-model relative test of H0: D(P1, R) <= D(P2, R).
PairResult rel_pair(const CandidateModel& model1, const CandidateModel& model2,
                    const Sample& reference, const KernelSpec& spec, DiscrepancyKind kind,
                    double alpha);

}  // namespace relcomp
