#include "relcomp/selective_inference.hpp"

#include "relcomp/error.hpp"
#include "relcomp/normal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace relcomp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest value passed to the closed-form inverses; below it the normal
// quantile functions lose relative accuracy and bisection takes over.
constexpr double kMinClosedFormMass = 1e-290;

std::string interval_text(double lo, double hi) {
  std::ostringstream os;
  os << "[" << lo << ", " << hi << "]";
  return os.str();
}

struct Standardized {
  double a;  // (lower - mu) / sigma
  double b;  // (upper - mu) / sigma
};

Standardized standardize(const TruncatedNormal& tn) {
  tn.validate();
  return {(tn.lower - tn.mu) / tn.sigma, (tn.upper - tn.mu) / tn.sigma};
}

[[noreturn]] void no_mass(const TruncatedNormal& tn) {
  throw TruncationError(tn.lower, tn.upper,
                        "truncated normal has no numerically representable mass on " +
                            interval_text(tn.lower, tn.upper));
}

// Returns {cdf, sf} of the standardized truncated normal at t in [a, b].
std::pair<double, double> cdf_sf(const TruncatedNormal& tn, const Standardized& s, double t) {
  const double a = s.a;
  const double b = s.b;
  if (t <= a) return {0.0, 1.0};
  if (t >= b) return {1.0, 0.0};
  if (a >= 0.0) {
    // Upper tail: Psi = (Q(a) - Q(t)) / (Q(a) - Q(b)), Q = sf.
    const double la = normal::log_sf(a);
    const double lt = normal::log_sf(t);
    const double lb = normal::log_sf(b);
    const double denom = std::expm1(lb - la);  // in [-1, 0)
    if (!(denom < 0.0)) no_mass(tn);
    const double cdf = std::expm1(lt - la) / denom;
    const double sf = std::exp(lt - la) * std::expm1(lb - lt) / denom;
    return {std::clamp(cdf, 0.0, 1.0), std::clamp(sf, 0.0, 1.0)};
  }
  if (b <= 0.0) {
    // Lower tail: Psi = (F(t) - F(a)) / (F(b) - F(a)), F = cdf.
    const double la = normal::log_cdf(a);
    const double lt = normal::log_cdf(t);
    const double lb = normal::log_cdf(b);
    const double denom = std::expm1(la - lb);  // in [-1, 0)
    if (!(denom < 0.0)) no_mass(tn);
    const double cdf = std::exp(lt - lb) * std::expm1(la - lt) / denom;
    const double sf = std::expm1(lt - lb) / denom;
    return {std::clamp(cdf, 0.0, 1.0), std::clamp(sf, 0.0, 1.0)};
  }
  const double fa = normal::cdf(a);
  const double fb = normal::cdf(b);
  const double qa = normal::sf(a);
  const double qb = normal::sf(b);
  const double denom = fb - fa;
  if (!(denom > 0.0)) no_mass(tn);
  if (t <= 0.0) {
    const double cdf = (normal::cdf(t) - fa) / denom;
    return {std::clamp(cdf, 0.0, 1.0), std::clamp(1.0 - cdf, 0.0, 1.0)};
  }
  const double sf = (normal::sf(t) - qb) / (qa - qb);
  return {std::clamp(1.0 - sf, 0.0, 1.0), std::clamp(sf, 0.0, 1.0)};
}

double bisect_quantile(const TruncatedNormal& tn, const Standardized& s, double q) {
  double lo = std::isfinite(s.a) ? s.a : std::min(s.b, 0.0) - 40.0;
  double hi = std::isfinite(s.b) ? s.b : std::max(s.a, 0.0) + 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (cdf_sf(tn, s, mid).first < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void TruncatedNormal::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("truncated normal: sigma must be positive and finite");
  }
  if (!std::isfinite(mu)) throw InvalidArgument("truncated normal: mu must be finite");
  if (std::isnan(lower) || std::isnan(upper) || !(lower < upper)) {
    throw TruncationError(lower, upper,
                          "truncated normal: need lower < upper, got " + interval_text(lower, upper));
  }
}

double truncnorm_cdf(const TruncatedNormal& tn, double x) {
  if (std::isnan(x)) throw InvalidArgument("truncnorm_cdf: x is NaN");
  const Standardized s = standardize(tn);
  return cdf_sf(tn, s, (x - tn.mu) / tn.sigma).first;
}

double truncnorm_sf(const TruncatedNormal& tn, double x) {
  if (std::isnan(x)) throw InvalidArgument("truncnorm_sf: x is NaN");
  const Standardized s = standardize(tn);
  return cdf_sf(tn, s, (x - tn.mu) / tn.sigma).second;
}

double truncnorm_quantile(const TruncatedNormal& tn, double q) {
  if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("truncnorm_quantile: q must lie in (0, 1)");
  const Standardized s = standardize(tn);
  double t = std::numeric_limits<double>::quiet_NaN();
  if (s.a >= 0.0) {
    // Q(t) = (1 - q) Q(a) + q Q(b)
    const double la = normal::log_sf(s.a);
    const double lb = normal::log_sf(s.b);
    if (!(lb < la)) no_mass(tn);
    const double target = la + std::log((1.0 - q) + q * std::exp(lb - la));
    if (target > std::log(kMinClosedFormMass)) t = normal::isf(std::exp(target));
  } else if (s.b <= 0.0) {
    // F(t) = (1 - q) F(a) + q F(b)
    const double la = normal::log_cdf(s.a);
    const double lb = normal::log_cdf(s.b);
    if (!(la < lb)) no_mass(tn);
    const double target = lb + std::log(q + (1.0 - q) * std::exp(la - lb));
    if (target > std::log(kMinClosedFormMass)) t = normal::quantile(std::exp(target));
  } else {
    if (!(normal::cdf(s.b) > normal::cdf(s.a))) no_mass(tn);
    const double f = (1.0 - q) * normal::cdf(s.a) + q * normal::cdf(s.b);
    if (f <= 0.5) {
      t = normal::quantile(f);
    } else {
      t = normal::isf((1.0 - q) * normal::sf(s.a) + q * normal::sf(s.b));
    }
  }
  if (!std::isfinite(t)) t = bisect_quantile(tn, s, q);
  t = std::clamp(t, s.a, s.b);
  return tn.mu + tn.sigma * t;
}

SelectionEvent SelectionEvent::argmin(std::size_t l, std::size_t selected) {
  if (l < 2) throw InvalidArgument("selection event: need at least 2 candidates");
  if (selected >= l) throw InvalidArgument("selection event: selected index out of range");
  SelectionEvent ev;
  ev.selected = selected;
  ev.A = Matrix::Zero(static_cast<Eigen::Index>(l - 1), static_cast<Eigen::Index>(l));
  ev.b = Vector::Zero(static_cast<Eigen::Index>(l - 1));
  Eigen::Index row = 0;
  for (std::size_t s = 0; s < l; ++s) {
    if (s == selected) continue;
    ev.A(row, static_cast<Eigen::Index>(selected)) = 1.0;
    ev.A(row, static_cast<Eigen::Index>(s)) = -1.0;
    ++row;
  }
  return ev;
}

Contrast Contrast::between(std::size_t l, std::size_t target, std::size_t reference) {
  if (target >= l || reference >= l) throw InvalidArgument("contrast: index out of range");
  if (target == reference) throw InvalidArgument("contrast: target and reference must differ");
  Contrast c;
  c.target = target;
  c.reference = reference;
  c.eta = Vector::Zero(static_cast<Eigen::Index>(l));
  c.eta(static_cast<Eigen::Index>(target)) = 1.0;
  c.eta(static_cast<Eigen::Index>(reference)) = -1.0;
  return c;
}

TruncationInterval polyhedral_truncation(const Matrix& A, const Vector& b, const Vector& z,
                                         const Matrix& sigma, const Vector& eta) {
  const Eigen::Index l = z.size();
  if (A.cols() != l || A.rows() != b.size() || sigma.rows() != l || sigma.cols() != l ||
      eta.size() != l) {
    throw DimensionMismatch("polyhedral_truncation: inconsistent shapes");
  }
  const Vector sigma_eta = sigma * eta;
  const double var = eta.dot(sigma_eta);
  if (!(var > 0.0) || !std::isfinite(var)) {
    throw InvalidArgument("polyhedral_truncation: eta^T Sigma eta must be positive");
  }
  const Vector alpha = A * sigma_eta / var;
  const Vector resid = b - A * z;
  const double stat = eta.dot(z);
  const double slack_tol = 1e-12 * std::max(1.0, z.cwiseAbs().maxCoeff());
  const double alpha_tol = 1e-12 * (alpha.size() > 0 ? alpha.cwiseAbs().maxCoeff() : 0.0);

  TruncationInterval out{-kInf, kInf};
  for (Eigen::Index j = 0; j < alpha.size(); ++j) {
    double r = resid(j);
    if (r < -slack_tol) {
      throw InvalidArgument("polyhedral_truncation: z violates the selection event (row " +
                            std::to_string(j) + ")");
    }
    r = std::max(r, 0.0);
    if (std::abs(alpha(j)) <= alpha_tol) continue;
    const double bound = r / alpha(j) + stat;
    if (alpha(j) < 0.0) {
      out.lower = std::max(out.lower, bound);
    } else {
      out.upper = std::min(out.upper, bound);
    }
  }
  return out;
}

TruncationInterval polyhedral_truncation(const SelectionEvent& event, const Vector& z,
                                         const Matrix& sigma, const Contrast& contrast) {
  return polyhedral_truncation(event.A, event.b, z, sigma, contrast.eta);
}

double selective_threshold(double sigma_eta, const TruncationInterval& interval, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  return truncnorm_quantile({0.0, sigma_eta, interval.lower, interval.upper}, 1.0 - alpha);
}

double selective_pvalue(double stat, double sigma_eta, const TruncationInterval& interval) {
  return truncnorm_sf({0.0, sigma_eta, interval.lower, interval.upper}, stat);
}

}  // namespace relcomp
