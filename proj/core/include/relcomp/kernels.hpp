#pragma once

#include "relcomp/sample.hpp"

#include <cstddef>
#include <string>

namespace relcomp {

enum class KernelFamily { Gaussian, IMQ };

/// Parameters of a radial positive-definite kernel k(x, y) = phi(|x - y|^2).
///
///   Gaussian: exp(-|x - y|^2 / (2 bandwidth^2))
///   IMQ:      (imq_c^2 + |x - y|^2)^imq_beta,  -1 < imq_beta < 0
struct KernelSpec {
  KernelFamily family = KernelFamily::Gaussian;
  double bandwidth = 1.0;
  double imq_c = 1.0;
  double imq_beta = -0.5;

  static KernelSpec gaussian(double bandwidth);
  static KernelSpec imq(double c = 1.0, double beta = -0.5);

  /// Throws InvalidArgument when a parameter is out of range.
  void validate() const;

  std::string family_name() const;
};

/// phi(r2), phi'(r2) and phi''(r2) for the radial profile of a kernel.
struct RadialProfile {
  double value;
  double d1;
  double d2;
};

RadialProfile radial_profile(const KernelSpec& spec, double sq_dist);

double eval(const KernelSpec& spec, const VectorRef& x, const VectorRef& y);

/// Gradient of k(x, y) with respect to its first argument.
Vector grad_x(const KernelSpec& spec, const VectorRef& x, const VectorRef& y);

/// Gradient of k(x, y) with respect to its second argument.
Vector grad_y(const KernelSpec& spec, const VectorRef& x, const VectorRef& y);

/// sum_i d^2 k / (dx_i dy_i).
double trace_grad_xy(const KernelSpec& spec, const VectorRef& x, const VectorRef& y);

/// Squared Euclidean distances between rows of `x` and rows of `y`. Entry
/// (i, j) is bitwise equal to entry (j, i) of the transposed call.
Matrix pairwise_sq_dist(const Sample& x, const Sample& y);

/// Gram matrix K(i, j) = k(x_i, y_j).
Matrix gram(const KernelSpec& spec, const Sample& x, const Sample& y);

/// Median of |x_i - x_j| over all pairs i < j (mean of the two middle values
/// for an even pair count). When `max_points` is non-zero and the sample is
/// larger, an evenly strided subset of `max_points` rows is used instead.
double median_heuristic(const Sample& pooled, std::size_t max_points = 0);

}  // namespace relcomp
