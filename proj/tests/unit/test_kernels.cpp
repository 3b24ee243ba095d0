#include <gtest/gtest.h>

#include <relcomp/error.hpp>
#include <relcomp/kernels.hpp>

#include "unit/oracles.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>
#include <random>

using namespace relcomp;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

Vector rand_vec(std::mt19937& rng, int d) {
  std::normal_distribution<double> nd;
  Vector v(d);
  for (int k = 0; k < d; ++k) v(k) = nd(rng);
  return v;
}

KernelSpec rand_spec(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.3, 2.5);
  if (rng() % 2) return KernelSpec::gaussian(u(rng));
  std::uniform_real_distribution<double> beta(-0.9, -0.1);
  return KernelSpec::imq(u(rng), beta(rng));
}

}  // namespace

TEST(Kernels, GaussianAtCoincidentPointsIsOne) {
  EXPECT_DOUBLE_EQ(eval(KernelSpec::gaussian(1.0), v1(0.7), v1(0.7)), 1.0);
}

TEST(Kernels, ImqAtCoincidentPointsIsCToTwoBeta) {
  EXPECT_DOUBLE_EQ(eval(KernelSpec::imq(1.0, -0.5), v1(0), v1(0)), 1.0);
  const auto s = KernelSpec::imq(2.0, -0.3);
  EXPECT_NEAR(eval(s, v1(5), v1(5)), std::pow(2.0, -0.6), 1e-15);
}

TEST(Kernels, GaussianKnownValue) {
  EXPECT_NEAR(eval(KernelSpec::gaussian(1.0), v1(0), v1(2)), std::exp(-2.0), 1e-15);
  EXPECT_NEAR(eval(KernelSpec::gaussian(1.0), v1(0), v1(2)), 0.135335, 1e-6);
}

TEST(Kernels, DimensionMismatchThrows) {
  const auto s = KernelSpec::gaussian(1.0);
  EXPECT_THROW(eval(s, Vector::Zero(2), Vector::Zero(3)), DimensionMismatch);
  EXPECT_THROW(grad_x(s, Vector::Zero(2), Vector::Zero(3)), DimensionMismatch);
  EXPECT_THROW(grad_y(s, Vector::Zero(2), Vector::Zero(3)), DimensionMismatch);
  EXPECT_THROW(trace_grad_xy(s, Vector::Zero(1), Vector::Zero(3)), DimensionMismatch);
}

TEST(Kernels, InvalidSpecsRejected) {
  EXPECT_THROW(KernelSpec::gaussian(0.0), InvalidArgument);
  EXPECT_THROW(KernelSpec::gaussian(-1.0), InvalidArgument);
  EXPECT_THROW(KernelSpec::imq(0.0, -0.5), InvalidArgument);
  EXPECT_THROW(KernelSpec::imq(1.0, 0.0), InvalidArgument);
  EXPECT_THROW(KernelSpec::imq(1.0, -1.0), InvalidArgument);
}

TEST(Kernels, GradientVanishesAtCoincidentPoints) {
  std::mt19937 rng(3);
  for (int t = 0; t < 10; ++t) {
    const auto s = rand_spec(rng);
    const Vector x = rand_vec(rng, 4);
    EXPECT_EQ(grad_x(s, x, x).norm(), 0.0);
  }
}

TEST(Kernels, GradientKnownValues) {
  const Vector gx = grad_x(KernelSpec::gaussian(1.0), v1(1), v1(0));
  EXPECT_NEAR(gx(0), -std::exp(-0.5), 1e-12);
  const auto fd = oracle::central_diff([](const Vector& x) { return std::exp(-x(0) * x(0) / 2); }, v1(1), 0, 1e-6);
  EXPECT_NEAR(gx(0), fd, 1e-6);

  const Vector gi = grad_x(KernelSpec::imq(1.0, -0.5), v1(1), v1(0));
  EXPECT_NEAR(gi(0), -std::pow(2.0, -1.5), 1e-12);
  const auto fdi = oracle::central_diff([](const Vector& x) { return std::pow(1 + x(0) * x(0), -0.5); }, v1(1), 0, 1e-6);
  EXPECT_NEAR(gi(0), fdi, 1e-6);
}

TEST(Kernels, TraceKnownValues) {
  EXPECT_NEAR(trace_grad_xy(KernelSpec::gaussian(1.0), v1(0.3), v1(0.3)), 1.0, 1e-14);
  EXPECT_NEAR(trace_grad_xy(KernelSpec::gaussian(1.0), Vector::Ones(3), Vector::Ones(3)), 3.0, 1e-14);
  EXPECT_NEAR(trace_grad_xy(KernelSpec::imq(1.0, -0.5), v1(0), v1(0)), 1.0, 1e-14);
}

// Mixed second derivative by finite differences of the analytic x-gradient.
TEST(Kernels, TraceMatchesFiniteDifferenceHessian) {
  std::mt19937 rng(11);
  for (int t = 0; t < 40; ++t) {
    const auto s = rand_spec(rng);
    const int d = 1 + static_cast<int>(rng() % 4);
    const Vector x = rand_vec(rng, d), y = rand_vec(rng, d);
    double tr = 0;
    for (int k = 0; k < d; ++k) {
      tr += oracle::central_diff([&](const Vector& yy) { return grad_x(s, x, yy)(k); }, y, k);
    }
    EXPECT_NEAR(trace_grad_xy(s, x, y), tr, 1e-6 * std::max(1.0, std::abs(tr)));
    EXPECT_NEAR(trace_grad_xy(s, x, y), oracle::ktrace(s, x, y), 1e-12);
  }
}

TEST(Kernels, GradientsMatchFiniteDifferencesRandom) {
  std::mt19937 rng(5);
  for (int t = 0; t < 100; ++t) {
    const auto s = rand_spec(rng);
    const int d = 1 + static_cast<int>(rng() % 5);
    const Vector x = rand_vec(rng, d), y = rand_vec(rng, d);
    const Vector gx = grad_x(s, x, y);
    const Vector gy = grad_y(s, x, y);
    for (int k = 0; k < d; ++k) {
      const double fx = oracle::central_diff([&](const Vector& xx) { return eval(s, xx, y); }, x, k);
      const double fy = oracle::central_diff([&](const Vector& yy) { return eval(s, x, yy); }, y, k);
      EXPECT_NEAR(gx(k), fx, 1e-5 * std::max(1.0, std::abs(fx)));
      EXPECT_NEAR(gy(k), fy, 1e-5 * std::max(1.0, std::abs(fy)));
    }
  }
}

TEST(Kernels, SymmetryProperties) {
  std::mt19937 rng(8);
  for (int t = 0; t < 50; ++t) {
    const auto s = rand_spec(rng);
    const Vector x = rand_vec(rng, 3), y = rand_vec(rng, 3);
    EXPECT_EQ(eval(s, x, y), eval(s, y, x));
    EXPECT_NEAR((grad_x(s, x, y) - grad_y(s, y, x)).norm(), 0.0, 1e-15);
    EXPECT_NEAR((grad_x(s, x, y) + grad_y(s, x, y)).norm(), 0.0, 1e-15);
  }
}

TEST(Kernels, GramIsSymmetricPsd) {
  std::mt19937 rng(21);
  for (int t = 0; t < 6; ++t) {
    const auto s = rand_spec(rng);
    const Sample x = oracle::normal_sample(60, 3, 100 + t);
    const Matrix k = gram(s, x, x);
    EXPECT_EQ((k - k.transpose()).cwiseAbs().maxCoeff(), 0.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(k);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8);
    EXPECT_NEAR(k(3, 7), oracle::kern(s, oracle::row(x, 3), oracle::row(x, 7)), 1e-15);
  }
}

TEST(Kernels, PairwiseSquaredDistances) {
  const Sample x = oracle::normal_sample(7, 2, 1);
  const Sample y = oracle::normal_sample(5, 2, 2);
  const Matrix d = pairwise_sq_dist(x, y);
  ASSERT_EQ(d.rows(), 7);
  ASSERT_EQ(d.cols(), 5);
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 5; ++j) EXPECT_NEAR(d(i, j), oracle::sqnorm(oracle::row(x, i), oracle::row(y, j)), 1e-14);
}

TEST(MedianHeuristic, SmallExamples) {
  Sample two(2, 1);
  two << 0, 1;
  EXPECT_DOUBLE_EQ(median_heuristic(two), 1.0);
  Sample three(3, 1);
  three << 0, 1, 2;
  EXPECT_DOUBLE_EQ(median_heuristic(three), 1.0);
  Sample tri(2, 2);
  tri << 0, 0, 3, 4;
  EXPECT_DOUBLE_EQ(median_heuristic(tri), 5.0);
}

TEST(MedianHeuristic, EvenCountAveragesMiddlePair) {
  // distances {1, 3, 4, 2, 3, 1}: sorted 1 1 2 3 3 4 -> (2 + 3) / 2
  Sample s(4, 1);
  s << 0, 1, 4, 3;
  EXPECT_DOUBLE_EQ(median_heuristic(s), 2.5);
}

TEST(MedianHeuristic, Errors) {
  EXPECT_THROW(median_heuristic(Sample(1, 2)), InvalidArgument);
  EXPECT_THROW(median_heuristic(Sample::Zero(5, 2)), InvalidArgument);
}

TEST(MedianHeuristic, MatchesBruteForceAndIsPermutationInvariant) {
  const Sample s = oracle::normal_sample(41, 3, 9);
  std::vector<double> dist;
  for (int i = 0; i < s.rows(); ++i)
    for (int j = i + 1; j < s.rows(); ++j) dist.push_back(std::sqrt(oracle::sqnorm(oracle::row(s, i), oracle::row(s, j))));
  std::sort(dist.begin(), dist.end());
  const std::size_t m = dist.size();
  const double med = m % 2 ? dist[m / 2] : 0.5 * (dist[m / 2 - 1] + dist[m / 2]);
  EXPECT_NEAR(median_heuristic(s), med, 1e-14);

  std::vector<int> perm(s.rows());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937(4));
  Sample p(s.rows(), s.cols());
  for (int i = 0; i < s.rows(); ++i) p.row(i) = s.row(perm[i]);
  EXPECT_DOUBLE_EQ(median_heuristic(p), median_heuristic(s));
}

TEST(MedianHeuristic, SubsampleCapUsesAtMostThatManyRows) {
  const Sample s = oracle::normal_sample(500, 2, 4);
  const double full = median_heuristic(s);
  const double capped = median_heuristic(s, 200);
  EXPECT_NEAR(capped, full, 0.1 * full);
  EXPECT_DOUBLE_EQ(median_heuristic(s, 1000), full);
}
