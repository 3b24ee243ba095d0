#pragma once

namespace relcomp::normal {

/// Standard normal CDF.
double cdf(double x);
/// Upper tail 1 - cdf(x), accurate for large x.
double sf(double x);
/// log cdf(x), finite for every finite x.
double log_cdf(double x);
/// log sf(x), finite for every finite x.
double log_sf(double x);
/// Inverse of cdf on (0, 1); -inf / +inf at 0 / 1.
double quantile(double p);
/// Inverse of sf on (0, 1): the x with sf(x) = q.
double isf(double q);

}  // namespace relcomp::normal
