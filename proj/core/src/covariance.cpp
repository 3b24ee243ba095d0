#include "relcomp/covariance.hpp"

#include "relcomp/error.hpp"
#include "summation.hpp"

#include <algorithm>
#include <cmath>

namespace relcomp {

namespace {

Matrix scaled_covariance(const Matrix& cols, double scale) {
  const Eigen::Index n = cols.rows();
  if (n < 1) throw InvalidArgument("covariance: need at least one row");
  const Eigen::Index l = cols.cols();
  Vector mean(l);
  for (Eigen::Index j = 0; j < l; ++j) {
    detail::CompensatedSum s;
    for (Eigen::Index i = 0; i < n; ++i) s.add(cols(i, j));
    mean(j) = s.value() / static_cast<double>(n);
  }
  Matrix cov(l, l);
  for (Eigen::Index a = 0; a < l; ++a) {
    for (Eigen::Index b = a; b < l; ++b) {
      detail::CompensatedSum s;
      for (Eigen::Index i = 0; i < n; ++i) {
        s.add((cols(i, a) - mean(a)) * (cols(i, b) - mean(b)));
      }
      const double v = scale * s.value() / static_cast<double>(n);
      cov(a, b) = v;
      cov(b, a) = v;
    }
  }
  return cov;
}

void check_model_count(std::size_t l, const char* op) {
  if (l == 0) throw InvalidArgument(std::string(op) + ": need at least one model");
}

}  // namespace

Vector ksd_projection_means(const KernelSpec& spec, const ScoreFunction& score, const Sample& x) {
  if (x.rows() < 2) throw InvalidArgument("ksd_projection_means: need at least 2 observations");
  return off_diagonal_row_means(stein_matrix(spec, x, score_rows(score, x)));
}

Vector mmd_projection_means(const KernelSpec& spec, const Sample& x, const Sample& y) {
  if (x.rows() < 2) throw InvalidArgument("mmd_projection_means: need at least 2 observations");
  return off_diagonal_row_means(mmd_h_matrix(spec, x, y));
}

Matrix projection_covariance(const Matrix& g) { return scaled_covariance(g, 4.0); }

Matrix linear_term_covariance(const Matrix& terms) { return scaled_covariance(terms, 2.0); }

Matrix ksd_joint_covariance(const KernelSpec& spec, const std::vector<ScoreFunction>& scores,
                            const Sample& x) {
  check_model_count(scores.size(), "ksd_joint_covariance");
  if (x.rows() < 2) throw InvalidArgument("ksd_joint_covariance: need at least 2 observations");
  Matrix g(x.rows(), static_cast<Eigen::Index>(scores.size()));
  for (std::size_t j = 0; j < scores.size(); ++j) {
    g.col(static_cast<Eigen::Index>(j)) = ksd_projection_means(spec, scores[j], x);
  }
  return projection_covariance(g);
}

Matrix mmd_joint_covariance(const KernelSpec& spec, const std::vector<Sample>& model_samples,
                            const Sample& y) {
  check_model_count(model_samples.size(), "mmd_joint_covariance");
  if (y.rows() < 2) throw InvalidArgument("mmd_joint_covariance: need at least 2 observations");
  const Matrix kyy = gram(spec, y, y);
  Matrix g(y.rows(), static_cast<Eigen::Index>(model_samples.size()));
  for (std::size_t j = 0; j < model_samples.size(); ++j) {
    const Sample& xj = model_samples[j];
    if (xj.rows() != y.rows()) {
      throw InvalidArgument("mmd_joint_covariance: model sample " + std::to_string(j) +
                            " has " + std::to_string(xj.rows()) + " rows, reference has " +
                            std::to_string(y.rows()));
    }
    g.col(static_cast<Eigen::Index>(j)) = off_diagonal_row_means(mmd_h_matrix(spec, xj, y, &kyy));
  }
  return projection_covariance(g);
}

double default_regularization_floor(const Matrix& sigma) {
  if (sigma.rows() == 0) return 1e-8;
  const double avg = sigma.trace() / static_cast<double>(sigma.rows());
  return avg > 0.0 ? 1e-8 * avg : 1e-8;
}

double regularization_shift(const Matrix& sigma, double floor) {
  if (sigma.rows() != sigma.cols()) throw InvalidArgument("regularize: matrix must be square");
  if (!sigma.allFinite()) throw InvalidArgument("regularize: matrix has non-finite entries");
  if (sigma.rows() == 0) return 0.0;
  const Matrix sym = 0.5 * (sigma + sigma.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym, Eigen::EigenvaluesOnly);
  const double min_eig = eig.eigenvalues().minCoeff();
  return min_eig < floor ? floor - min_eig : 0.0;
}

Matrix regularize(const Matrix& sigma, double floor) {
  const double eps = regularization_shift(sigma, floor);
  Matrix out = 0.5 * (sigma + sigma.transpose());
  out.diagonal().array() += eps;
  return out;
}

namespace {

DiscrepancyVector finish(Vector estimates, Matrix raw_sigma, std::size_t n, DiscrepancyKind kind) {
  DiscrepancyVector out;
  out.n = n;
  out.kind = kind;
  out.values = std::sqrt(static_cast<double>(n)) * estimates;
  out.estimates = std::move(estimates);
  const double floor = default_regularization_floor(raw_sigma);
  const double eps = regularization_shift(raw_sigma, floor);
  out.regularized = eps > 0.0;
  out.sigma_hat = regularize(raw_sigma, floor);
  return out;
}

double column_mean(const Vector& v) {
  detail::CompensatedSum s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s.add(v(i));
  return s.value() / static_cast<double>(v.size());
}

}  // namespace

DiscrepancyVector mmd_discrepancy_vector(const KernelSpec& spec, DiscrepancyKind kind,
                                         const std::vector<Sample>& model_samples,
                                         const Sample& y) {
  if (!is_mmd(kind)) throw InvalidArgument("mmd_discrepancy_vector: kind must be an MMD kind");
  check_model_count(model_samples.size(), "mmd_discrepancy_vector");
  if (y.rows() < 2) throw InvalidArgument("mmd_discrepancy_vector: need at least 2 observations");
  const auto l = static_cast<Eigen::Index>(model_samples.size());
  for (std::size_t j = 0; j < model_samples.size(); ++j) {
    if (model_samples[j].rows() != y.rows()) {
      throw InvalidArgument("model sample " + std::to_string(j) + " has " +
                            std::to_string(model_samples[j].rows()) +
                            " rows but the reference sample has " + std::to_string(y.rows()));
    }
    if (model_samples[j].cols() != y.cols()) {
      throw DimensionMismatch("model sample " + std::to_string(j) + " has dimension " +
                              std::to_string(model_samples[j].cols()) +
                              " but the reference sample has " + std::to_string(y.cols()));
    }
  }
  Vector estimates(l);
  if (is_linear(kind)) {
    const Eigen::Index pairs = y.rows() / 2;
    Matrix terms(pairs, l);
    for (Eigen::Index j = 0; j < l; ++j) {
      terms.col(j) = mmd_linear_terms(spec, model_samples[static_cast<std::size_t>(j)], y);
      estimates(j) = column_mean(terms.col(j));
    }
    return finish(std::move(estimates), linear_term_covariance(terms),
                  static_cast<std::size_t>(y.rows()), kind);
  }
  const Matrix kyy = gram(spec, y, y);
  Matrix g(y.rows(), l);
  for (Eigen::Index j = 0; j < l; ++j) {
    const Matrix h = mmd_h_matrix(spec, model_samples[static_cast<std::size_t>(j)], y, &kyy);
    g.col(j) = off_diagonal_row_means(h);
    estimates(j) = off_diagonal_mean(h);
  }
  return finish(std::move(estimates), projection_covariance(g), static_cast<std::size_t>(y.rows()),
                kind);
}

DiscrepancyVector ksd_discrepancy_vector(const KernelSpec& spec, DiscrepancyKind kind,
                                         const std::vector<ScoreFunction>& scores,
                                         const Sample& x) {
  if (is_mmd(kind)) throw InvalidArgument("ksd_discrepancy_vector: kind must be a KSD kind");
  check_model_count(scores.size(), "ksd_discrepancy_vector");
  if (x.rows() < 2) throw InvalidArgument("ksd_discrepancy_vector: need at least 2 observations");
  const auto l = static_cast<Eigen::Index>(scores.size());
  Vector estimates(l);
  if (is_linear(kind)) {
    const Eigen::Index used = 2 * (x.rows() / 2);
    const Sample head = x.topRows(used);
    Matrix terms(used / 2, l);
    for (Eigen::Index j = 0; j < l; ++j) {
      terms.col(j) = ksd_linear_terms(spec, head, score_rows(scores[static_cast<std::size_t>(j)], head));
      estimates(j) = column_mean(terms.col(j));
    }
    return finish(std::move(estimates), linear_term_covariance(terms),
                  static_cast<std::size_t>(x.rows()), kind);
  }
  Matrix g(x.rows(), l);
  for (Eigen::Index j = 0; j < l; ++j) {
    const Matrix u = stein_matrix(spec, x, score_rows(scores[static_cast<std::size_t>(j)], x));
    g.col(j) = off_diagonal_row_means(u);
    estimates(j) = off_diagonal_mean(u);
  }
  return finish(std::move(estimates), projection_covariance(g), static_cast<std::size_t>(x.rows()),
                kind);
}

}  // namespace relcomp
