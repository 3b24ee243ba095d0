#include "relcomp/discrepancy.hpp"

#include "relcomp/error.hpp"
#include "summation.hpp"

#include <cmath>

namespace relcomp {

std::string to_string(DiscrepancyKind kind) {
  switch (kind) {
    case DiscrepancyKind::MmdComplete: return "mmd";
    case DiscrepancyKind::MmdLinear: return "mmd-lin";
    case DiscrepancyKind::KsdComplete: return "ksd";
    case DiscrepancyKind::KsdLinear: return "ksd-lin";
  }
  return "unknown";
}

DiscrepancyKind parse_discrepancy_kind(std::string_view name) {
  if (name == "mmd") return DiscrepancyKind::MmdComplete;
  if (name == "mmd-lin") return DiscrepancyKind::MmdLinear;
  if (name == "ksd") return DiscrepancyKind::KsdComplete;
  if (name == "ksd-lin") return DiscrepancyKind::KsdLinear;
  throw InvalidArgument("unknown discrepancy kind '" + std::string(name) +
                        "' (expected mmd, mmd-lin, ksd or ksd-lin)");
}

namespace {

void check_paired(const Sample& x, const Sample& y, Eigen::Index min_rows, const char* op) {
  if (x.cols() != y.cols()) {
    throw DimensionMismatch(std::string(op) + ": samples have different dimensions");
  }
  if (x.rows() != y.rows()) {
    throw InvalidArgument(std::string(op) + ": samples must have equal size, got " +
                          std::to_string(x.rows()) + " and " + std::to_string(y.rows()));
  }
  if (x.rows() < min_rows) {
    throw InvalidArgument(std::string(op) + ": need at least " + std::to_string(min_rows) +
                          " observations");
  }
}

void check_rows(const Sample& x, Eigen::Index min_rows, const char* op) {
  if (x.rows() < min_rows) {
    throw InvalidArgument(std::string(op) + ": need at least " + std::to_string(min_rows) +
                          " observations");
  }
}

}  // namespace

double h_kernel(const KernelSpec& spec, const VectorRef& x, const VectorRef& y,
                const VectorRef& x2, const VectorRef& y2) {
  if (y.size() != x.size() || x2.size() != x.size() || y2.size() != x.size()) {
    throw DimensionMismatch("h_kernel: all four points must share a dimension");
  }
  return eval(spec, x, x2) + eval(spec, y, y2) - eval(spec, x, y2) - eval(spec, x2, y);
}

Matrix mmd_h_matrix(const KernelSpec& spec, const Sample& x, const Sample& y,
                    const Matrix* reference_gram) {
  check_paired(x, y, 1, "mmd_h_matrix");
  const Matrix kxx = gram(spec, x, x);
  const Matrix kxy = gram(spec, x, y);
  Matrix kyy_local;
  if (reference_gram == nullptr) {
    kyy_local = gram(spec, y, y);
    reference_gram = &kyy_local;
  } else if (reference_gram->rows() != y.rows() || reference_gram->cols() != y.rows()) {
    throw DimensionMismatch("mmd_h_matrix: reference gram has the wrong shape");
  }
  const Matrix& kyy = *reference_gram;
  const Eigen::Index n = x.rows();
  Matrix h(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      h(i, j) = (kxx(i, j) + kyy(i, j)) - (kxy(i, j) + kxy(j, i));
    }
    h(j, j) = 0.0;
  }
  return h;
}

double off_diagonal_mean(const Matrix& m) {
  const Eigen::Index n = m.rows();
  if (n < 2 || m.cols() != n) {
    throw InvalidArgument("off_diagonal_mean: need a square matrix with n >= 2");
  }
  detail::CompensatedSum total;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j) total.add(m(i, j));
    }
  }
  return total.value() / (static_cast<double>(n) * static_cast<double>(n - 1));
}

Vector off_diagonal_row_means(const Matrix& m) {
  const Eigen::Index n = m.rows();
  if (n < 2 || m.cols() != n) {
    throw InvalidArgument("off_diagonal_row_means: need a square matrix with n >= 2");
  }
  Vector g(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    detail::CompensatedSum row;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) row.add(m(i, j));
    }
    g(i) = row.value() / static_cast<double>(n - 1);
  }
  return g;
}

double mmd2_u_complete(const KernelSpec& spec, const Sample& x, const Sample& y) {
  check_paired(x, y, 2, "mmd2_u_complete");
  return off_diagonal_mean(mmd_h_matrix(spec, x, y));
}

Vector mmd_linear_terms(const KernelSpec& spec, const Sample& x, const Sample& y) {
  check_paired(x, y, 2, "mmd2_u_linear");
  spec.validate();
  const Eigen::Index pairs = x.rows() / 2;
  Vector terms(pairs);
  for (Eigen::Index p = 0; p < pairs; ++p) {
    const Eigen::Index a = 2 * p + 1;
    const Eigen::Index b = 2 * p;
    terms(p) = h_kernel(spec, x.row(a).transpose(), y.row(a).transpose(),
                        x.row(b).transpose(), y.row(b).transpose());
  }
  return terms;
}

double mmd2_u_linear(const KernelSpec& spec, const Sample& x, const Sample& y) {
  const Vector terms = mmd_linear_terms(spec, x, y);
  detail::CompensatedSum s;
  for (Eigen::Index i = 0; i < terms.size(); ++i) s.add(terms(i));
  return s.value() / static_cast<double>(terms.size());
}

Sample score_rows(const ScoreFunction& score, const Sample& x) {
  Sample out(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    const Vector s = score(x.row(i).transpose());
    if (s.size() != x.cols()) {
      throw DimensionMismatch("score function returned a vector of length " +
                              std::to_string(s.size()) + " for a point of dimension " +
                              std::to_string(x.cols()));
    }
    if (!s.allFinite()) {
      throw NonFiniteScore(static_cast<std::size_t>(i),
                           "score function is not finite at point " + std::to_string(i));
    }
    out.row(i) = s.transpose();
  }
  return out;
}

namespace {

// u = phi (s . s') + 2 phi' (x - x') . (s' - s) + tr, with tr = -2 d phi' - 4 r2 phi''.
inline double stein_value(const KernelSpec& spec, const double* x, const double* sx,
                          const double* x2, const double* sx2, Eigen::Index d) {
  double r2 = 0.0;
  double ss = 0.0;
  double cross = 0.0;
  for (Eigen::Index k = 0; k < d; ++k) {
    const double diff = x[k] - x2[k];
    r2 += diff * diff;
    ss += sx[k] * sx2[k];
    cross += diff * (sx2[k] - sx[k]);
  }
  const auto p = radial_profile(spec, r2);
  const double trace = -2.0 * static_cast<double>(d) * p.d1 - 4.0 * r2 * p.d2;
  return p.value * ss + 2.0 * p.d1 * cross + trace;
}

}  // namespace

double stein_kernel(const KernelSpec& spec, const VectorRef& x, const VectorRef& sx,
                    const VectorRef& x2, const VectorRef& sx2) {
  const Eigen::Index d = x.size();
  if (sx.size() != d || x2.size() != d || sx2.size() != d || d == 0) {
    throw DimensionMismatch("stein_kernel: points and scores must share a dimension");
  }
  if (!sx.allFinite()) throw NonFiniteScore(0, "stein_kernel: score at x is not finite");
  if (!sx2.allFinite()) throw NonFiniteScore(1, "stein_kernel: score at x' is not finite");
  const Vector a = x, sa = sx, b = x2, sb = sx2;
  return stein_value(spec, a.data(), sa.data(), b.data(), sb.data(), d);
}

double stein_kernel(const KernelSpec& spec, const ScoreFunction& score, const VectorRef& x,
                    const VectorRef& x2) {
  if (x.size() != x2.size()) throw DimensionMismatch("stein_kernel: dimensions differ");
  Sample pts(2, x.size());
  pts.row(0) = x.transpose();
  pts.row(1) = x2.transpose();
  const Sample s = score_rows(score, pts);
  return stein_value(spec, pts.row(0).data(), s.row(0).data(), pts.row(1).data(),
                     s.row(1).data(), x.size());
}

Matrix stein_matrix(const KernelSpec& spec, const Sample& x, const Sample& scores) {
  spec.validate();
  if (scores.rows() != x.rows() || scores.cols() != x.cols()) {
    throw DimensionMismatch("stein_matrix: scores must have the shape of the sample");
  }
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  Matrix u(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = stein_value(spec, x.row(i).data(), scores.row(i).data(),
                                   x.row(j).data(), scores.row(j).data(), d);
      u(i, j) = v;
      u(j, i) = v;
    }
  }
  return u;
}

double ksd2_u_complete(const KernelSpec& spec, const ScoreFunction& score, const Sample& x) {
  check_rows(x, 2, "ksd2_u_complete");
  return off_diagonal_mean(stein_matrix(spec, x, score_rows(score, x)));
}

Vector ksd_linear_terms(const KernelSpec& spec, const Sample& x, const Sample& scores) {
  check_rows(x, 2, "ksd2_u_linear");
  spec.validate();
  if (scores.rows() != x.rows() || scores.cols() != x.cols()) {
    throw DimensionMismatch("ksd_linear_terms: scores must have the shape of the sample");
  }
  const Eigen::Index pairs = x.rows() / 2;
  Vector terms(pairs);
  for (Eigen::Index p = 0; p < pairs; ++p) {
    const Eigen::Index a = 2 * p + 1;
    const Eigen::Index b = 2 * p;
    terms(p) = stein_value(spec, x.row(a).data(), scores.row(a).data(), x.row(b).data(),
                           scores.row(b).data(), x.cols());
  }
  return terms;
}

double ksd2_u_linear(const KernelSpec& spec, const ScoreFunction& score, const Sample& x) {
  check_rows(x, 2, "ksd2_u_linear");
  const Eigen::Index used = 2 * (x.rows() / 2);
  const Sample head = x.topRows(used);
  const Vector terms = ksd_linear_terms(spec, head, score_rows(score, head));
  detail::CompensatedSum s;
  for (Eigen::Index i = 0; i < terms.size(); ++i) s.add(terms(i));
  return s.value() / static_cast<double>(terms.size());
}

}  // namespace relcomp
