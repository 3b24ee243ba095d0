#include "relcomp/kernels.hpp"

#include "relcomp/error.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace relcomp {

namespace {

void check_same_dim(const VectorRef& x, const VectorRef& y, const char* op) {
  if (x.size() != y.size() || x.size() == 0) {
    throw DimensionMismatch(std::string(op) + ": dimensions " + std::to_string(x.size()) +
                            " and " + std::to_string(y.size()) + " do not agree");
  }
}

inline double sq_dist_row(const double* a, const double* b, Eigen::Index d) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double t = a[k] - b[k];
    s += t * t;
  }
  return s;
}

}  // namespace

KernelSpec KernelSpec::gaussian(double bandwidth) {
  KernelSpec spec;
  spec.family = KernelFamily::Gaussian;
  spec.bandwidth = bandwidth;
  spec.validate();
  return spec;
}

KernelSpec KernelSpec::imq(double c, double beta) {
  KernelSpec spec;
  spec.family = KernelFamily::IMQ;
  spec.imq_c = c;
  spec.imq_beta = beta;
  spec.validate();
  return spec;
}

void KernelSpec::validate() const {
  switch (family) {
    case KernelFamily::Gaussian:
      if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw InvalidArgument("gaussian kernel: bandwidth must be positive and finite");
      }
      break;
    case KernelFamily::IMQ:
      if (!(imq_c > 0.0) || !std::isfinite(imq_c)) {
        throw InvalidArgument("imq kernel: c must be positive and finite");
      }
      if (!(imq_beta > -1.0 && imq_beta < 0.0)) {
        throw InvalidArgument("imq kernel: beta must lie in (-1, 0)");
      }
      break;
  }
}

std::string KernelSpec::family_name() const {
  return family == KernelFamily::Gaussian ? "gaussian" : "imq";
}

RadialProfile radial_profile(const KernelSpec& spec, double sq_dist) {
  if (spec.family == KernelFamily::Gaussian) {
    const double inv = 1.0 / (2.0 * spec.bandwidth * spec.bandwidth);
    const double v = std::exp(-sq_dist * inv);
    return {v, -inv * v, inv * inv * v};
  }
  const double base = spec.imq_c * spec.imq_c + sq_dist;
  const double beta = spec.imq_beta;
  const double v = std::pow(base, beta);
  const double d1 = beta * v / base;
  const double d2 = (beta - 1.0) * d1 / base;
  return {v, d1, d2};
}

double eval(const KernelSpec& spec, const VectorRef& x, const VectorRef& y) {
  check_same_dim(x, y, "eval");
  return radial_profile(spec, (x - y).squaredNorm()).value;
}

Vector grad_x(const KernelSpec& spec, const VectorRef& x, const VectorRef& y) {
  check_same_dim(x, y, "grad_x");
  const Vector diff = x - y;
  return 2.0 * radial_profile(spec, diff.squaredNorm()).d1 * diff;
}

Vector grad_y(const KernelSpec& spec, const VectorRef& x, const VectorRef& y) {
  check_same_dim(x, y, "grad_y");
  const Vector diff = x - y;
  return -2.0 * radial_profile(spec, diff.squaredNorm()).d1 * diff;
}

double trace_grad_xy(const KernelSpec& spec, const VectorRef& x, const VectorRef& y) {
  check_same_dim(x, y, "trace_grad_xy");
  const double r2 = (x - y).squaredNorm();
  const auto p = radial_profile(spec, r2);
  const auto d = static_cast<double>(x.size());
  return -2.0 * d * p.d1 - 4.0 * r2 * p.d2;
}

Matrix pairwise_sq_dist(const Sample& x, const Sample& y) {
  if (x.cols() != y.cols()) {
    throw DimensionMismatch("pairwise_sq_dist: column counts differ");
  }
  const Eigen::Index n = x.rows();
  const Eigen::Index m = y.rows();
  const Eigen::Index d = x.cols();
  Matrix out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* xi = x.row(i).data();
    for (Eigen::Index j = 0; j < m; ++j) {
      out(i, j) = sq_dist_row(xi, y.row(j).data(), d);
    }
  }
  return out;
}

Matrix gram(const KernelSpec& spec, const Sample& x, const Sample& y) {
  spec.validate();
  Matrix k = pairwise_sq_dist(x, y);
  if (spec.family == KernelFamily::Gaussian) {
    const double inv = 1.0 / (2.0 * spec.bandwidth * spec.bandwidth);
    k = (-inv * k.array()).exp().matrix();
  } else {
    const double c2 = spec.imq_c * spec.imq_c;
    k = (k.array() + c2).pow(spec.imq_beta).matrix();
  }
  return k;
}

double median_heuristic(const Sample& pooled, std::size_t max_points) {
  if (pooled.rows() < 2) {
    throw InvalidArgument("median_heuristic: need at least 2 points");
  }
  Sample points;
  const Sample* use = &pooled;
  const auto n_all = static_cast<std::size_t>(pooled.rows());
  if (max_points >= 2 && n_all > max_points) {
    points.resize(static_cast<Eigen::Index>(max_points), pooled.cols());
    for (std::size_t i = 0; i < max_points; ++i) {
      const std::size_t src = i * n_all / max_points;
      points.row(static_cast<Eigen::Index>(i)) = pooled.row(static_cast<Eigen::Index>(src));
    }
    use = &points;
  }
  const Eigen::Index n = use->rows();
  const Eigen::Index d = use->cols();
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      dists.push_back(sq_dist_row(use->row(i).data(), use->row(j).data(), d));
    }
  }
  // Squared distances share the ordering of distances; take roots at the end.
  const std::size_t m = dists.size();
  const std::size_t mid = m / 2;
  std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid), dists.end());
  double med = std::sqrt(dists[mid]);
  if (m % 2 == 0) {
    const double lower = *std::max_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid));
    med = 0.5 * (med + std::sqrt(lower));
  }
  if (!(med > 0.0) || !std::isfinite(med)) {
    throw InvalidArgument("median_heuristic: median pairwise distance is zero");
  }
  return med;
}

}  // namespace relcomp
