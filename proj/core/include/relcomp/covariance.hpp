#pragma once

#include "relcomp/discrepancy.hpp"
#include "relcomp/kernels.hpp"
#include "relcomp/sample.hpp"

#include <cstddef>
#include <vector>

namespace relcomp {

/// The sqrt(n)-scaled vector of estimated discrepancies z together with the
/// plug-in estimate of its asymptotic covariance.
struct DiscrepancyVector {
  Vector values;     ///< z_j = sqrt(n) * D_hat(P_j, R)
  Vector estimates;  ///< D_hat(P_j, R), unscaled
  Matrix sigma_hat;  ///< regularized, symmetric PSD
  std::size_t n = 0;
  DiscrepancyKind kind = DiscrepancyKind::MmdComplete;
  bool regularized = false;  ///< a positive diagonal shift was applied

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

/// g_i = (1 / (n - 1)) sum_{j != i} u_p(x_i, x_j).
Vector ksd_projection_means(const KernelSpec& spec, const ScoreFunction& score, const Sample& x);

/// g_i = (1 / (n - 1)) sum_{j != i} h(z_i, z_j), z_i = (x_i, y_i).
Vector mmd_projection_means(const KernelSpec& spec, const Sample& x, const Sample& y);

/// 4 * empirical covariance (1/n normalization) of the columns of `g`
/// (n rows, one column per model). Not regularized.
Matrix projection_covariance(const Matrix& g);

/// 2 * empirical covariance (1/m normalization) of per-pair linear-estimator
/// terms (m rows, one column per model). Not regularized.
Matrix linear_term_covariance(const Matrix& terms);

/// Sigma_hat for the complete KSD estimator of l models on one sample.
Matrix ksd_joint_covariance(const KernelSpec& spec, const std::vector<ScoreFunction>& scores,
                            const Sample& x);

/// Sigma_hat for the complete MMD estimator of l model samples against a
/// shared reference sample `y`.
Matrix mmd_joint_covariance(const KernelSpec& spec, const std::vector<Sample>& model_samples,
                            const Sample& y);

/// 1e-8 * trace / l, or 1e-8 when the trace is zero.
double default_regularization_floor(const Matrix& sigma);

/// Diagonal shift eps >= 0 so that the symmetrized matrix has minimum
/// eigenvalue >= floor.
double regularization_shift(const Matrix& sigma, double floor);

/// (sigma + sigma^T) / 2 + eps I with eps = regularization_shift(sigma, floor).
Matrix regularize(const Matrix& sigma, double floor);

/// z and Sigma_hat for MMD kinds. All samples must have the size of `y`.
DiscrepancyVector mmd_discrepancy_vector(const KernelSpec& spec, DiscrepancyKind kind,
                                         const std::vector<Sample>& model_samples,
                                         const Sample& y);

/// z and Sigma_hat for KSD kinds; scores are evaluated once per point.
DiscrepancyVector ksd_discrepancy_vector(const KernelSpec& spec, DiscrepancyKind kind,
                                         const std::vector<ScoreFunction>& scores,
                                         const Sample& x);

}  // namespace relcomp
