#include "relcomp/normal.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace relcomp::normal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// erfc underflows past ~37.5 standard deviations; switch to the asymptotic
// expansion of the Mills ratio well before that.
constexpr double kAsymptoticCut = 30.0;

double log_sf_asymptotic(double x) {
  const double inv2 = 1.0 / (x * x);
  // 1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8
  const double series = 1.0 + inv2 * (-1.0 + inv2 * (3.0 + inv2 * (-15.0 + inv2 * 105.0)));
  return -0.5 * x * x - std::log(x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

}  // namespace

double cdf(double x) {
  if (std::isnan(x)) return x;
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double sf(double x) {
  if (std::isnan(x)) return x;
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double log_sf(double x) {
  if (std::isnan(x)) return x;
  if (x == kInf) return -kInf;
  if (x == -kInf) return 0.0;
  if (x < -1.0) return std::log1p(-sf(-x));
  if (x < kAsymptoticCut) return std::log(sf(x));
  return log_sf_asymptotic(x);
}

double log_cdf(double x) { return log_sf(-x); }

double quantile(double p) {
  if (std::isnan(p) || p < 0.0 || p > 1.0) return std::numeric_limits<double>::quiet_NaN();
  if (p == 0.0) return -kInf;
  if (p == 1.0) return kInf;
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, p);
}

double isf(double q) {
  if (std::isnan(q) || q < 0.0 || q > 1.0) return std::numeric_limits<double>::quiet_NaN();
  if (q == 0.0) return kInf;
  if (q == 1.0) return -kInf;
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(boost::math::complement(standard, q));
}

}  // namespace relcomp::normal
