#pragma once

#include "relcomp/kernels.hpp"
#include "relcomp/sample.hpp"

#include <string>
#include <string_view>

namespace relcomp {

enum class DiscrepancyKind { MmdComplete, MmdLinear, KsdComplete, KsdLinear };

constexpr bool is_mmd(DiscrepancyKind kind) {
  return kind == DiscrepancyKind::MmdComplete || kind == DiscrepancyKind::MmdLinear;
}
constexpr bool is_linear(DiscrepancyKind kind) {
  return kind == DiscrepancyKind::MmdLinear || kind == DiscrepancyKind::KsdLinear;
}

/// "mmd", "mmd-lin", "ksd", "ksd-lin".
std::string to_string(DiscrepancyKind kind);
DiscrepancyKind parse_discrepancy_kind(std::string_view name);

// ---------------------------------------------------------------------------
// MMD

/// h(z, z') = k(x, x') + k(y, y') - k(x, y') - k(x', y) for z = (x, y).
double h_kernel(const KernelSpec& spec, const VectorRef& x, const VectorRef& y,
                const VectorRef& x2, const VectorRef& y2);

/// n x n matrix H(i, j) = h(z_i, z_j) with z_i = (x_i, y_i). The diagonal is
/// zero. `reference_gram`, when given, must be gram(spec, y, y).
Matrix mmd_h_matrix(const KernelSpec& spec, const Sample& x, const Sample& y,
                    const Matrix* reference_gram = nullptr);

/// Complete unbiased estimate of MMD^2(P, R) from paired samples x ~ P, y ~ R.
double mmd2_u_complete(const KernelSpec& spec, const Sample& x, const Sample& y);

/// h evaluated on the disjoint consecutive pairs (z_1, z_2), (z_3, z_4), ...
/// An odd trailing row is dropped.
Vector mmd_linear_terms(const KernelSpec& spec, const Sample& x, const Sample& y);

/// Mean of mmd_linear_terms. Depends on row order.
double mmd2_u_linear(const KernelSpec& spec, const Sample& x, const Sample& y);

// ---------------------------------------------------------------------------
// KSD

/// Evaluates `score` on every row. Throws NonFiniteScore naming the first
/// offending row and DimensionMismatch if the output length is wrong.
Sample score_rows(const ScoreFunction& score, const Sample& x);

/// Stein kernel u_p(x, x') from points and their precomputed scores.
double stein_kernel(const KernelSpec& spec, const VectorRef& x, const VectorRef& sx,
                    const VectorRef& x2, const VectorRef& sx2);

/// Stein kernel u_p(x, x') evaluating the score at both points.
double stein_kernel(const KernelSpec& spec, const ScoreFunction& score, const VectorRef& x,
                    const VectorRef& x2);

/// n x n matrix U(i, j) = u_p(x_i, x_j) from precomputed scores. The diagonal
/// holds u_p(x_i, x_i) and is excluded by every estimator.
Matrix stein_matrix(const KernelSpec& spec, const Sample& x, const Sample& scores);

double ksd2_u_complete(const KernelSpec& spec, const ScoreFunction& score, const Sample& x);

Vector ksd_linear_terms(const KernelSpec& spec, const Sample& x, const Sample& scores);

double ksd2_u_linear(const KernelSpec& spec, const ScoreFunction& score, const Sample& x);

// ---------------------------------------------------------------------------

/// Off-diagonal mean of a square matrix, (1 / (n (n - 1))) sum_{i != j} M(i, j).
double off_diagonal_mean(const Matrix& m);

/// Row means excluding the diagonal, g_i = (1 / (n - 1)) sum_{j != i} M(i, j).
Vector off_diagonal_row_means(const Matrix& m);

}  // namespace relcomp
