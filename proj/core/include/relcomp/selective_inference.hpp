#pragma once

#include "relcomp/sample.hpp"

#include <cstddef>
#include <limits>

namespace relcomp {

/// Closed interval [lower, upper]; either end may be infinite.
struct TruncationInterval {
  double lower;
  double upper;
};

/// Normal(mu, sigma^2) restricted to [lower, upper].
struct TruncatedNormal {
  double mu = 0.0;
  double sigma = 1.0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  void validate() const;
};

/// P(T <= x). `x` is clamped into [lower, upper]. Evaluated in log space on
/// the tail the interval lies in, so intervals far from mu keep full relative
/// precision. Throws TruncationError when the interval carries no mass.
double truncnorm_cdf(const TruncatedNormal& tn, double x);

/// P(T > x), computed directly rather than as 1 - cdf.
double truncnorm_sf(const TruncatedNormal& tn, double x);

/// The x with truncnorm_cdf(tn, x) = q, for q in (0, 1).
double truncnorm_quantile(const TruncatedNormal& tn, double q);

/// Affine event {A z <= b} that the candidate `selected` attains the
/// minimum: one row per s != selected with +1 at `selected` and -1 at s.
struct SelectionEvent {
  Matrix A;
  Vector b;
  std::size_t selected = 0;

  static SelectionEvent argmin(std::size_t l, std::size_t selected);
};

/// eta with +1 at `target` and -1 at `reference`; eta^T z is the scaled
/// discrepancy of the target minus that of the reference.
struct Contrast {
  Vector eta;
  std::size_t target = 0;
  std::size_t reference = 0;

  static Contrast between(std::size_t l, std::size_t target, std::size_t reference);
};

/// Truncation points of eta^T z conditioned on {A z <= b} for z ~ N(mu, sigma).
TruncationInterval polyhedral_truncation(const Matrix& A, const Vector& b, const Vector& z,
                                         const Matrix& sigma, const Vector& eta);

TruncationInterval polyhedral_truncation(const SelectionEvent& event, const Vector& z,
                                         const Matrix& sigma, const Contrast& contrast);

/// (1 - alpha)-quantile of TN(0, sigma_eta^2, lower, upper).
double selective_threshold(double sigma_eta, const TruncationInterval& interval, double alpha);

/// 1 - Psi(stat | 0, sigma_eta, lower, upper).
double selective_pvalue(double stat, double sigma_eta, const TruncationInterval& interval);

}  // namespace relcomp
