#include <gtest/gtest.h>

#include <relcomp/discrepancy.hpp>
#include <relcomp/error.hpp>

#include "unit/oracles.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <random>

using namespace relcomp;

namespace {

Vector v1(double a) { return Vector::Constant(1, a); }

ScoreFunction std_normal_score() {
  return [](const VectorRef& x) -> Vector { return -x; };
}

ScoreFunction shifted_score(double mu) {
  return [mu](const VectorRef& x) -> Vector { return -(x.array() - mu).matrix(); };
}

Sample permuted(const Sample& s, unsigned seed) {
  std::vector<int> p(s.rows());
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), std::mt19937(seed));
  Sample out(s.rows(), s.cols());
  for (int i = 0; i < s.rows(); ++i) out.row(i) = s.row(p[i]);
  return out;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(DiscrepancyKindNames, RoundTrip) {
  for (auto k : {DiscrepancyKind::MmdComplete, DiscrepancyKind::MmdLinear, DiscrepancyKind::KsdComplete,
                 DiscrepancyKind::KsdLinear}) {
    EXPECT_EQ(parse_discrepancy_kind(to_string(k)), k);
  }
  EXPECT_EQ(to_string(DiscrepancyKind::MmdLinear), "mmd-lin");
  EXPECT_THROW(parse_discrepancy_kind("mmd2"), InvalidArgument);
}

TEST(HKernel, Examples) {
  const auto s = KernelSpec::gaussian(1.0);
  EXPECT_EQ(h_kernel(s, v1(0.4), v1(0.4), v1(0.4), v1(0.4)), 0.0);
  EXPECT_NEAR(h_kernel(s, v1(0), v1(0), v1(1), v1(1)), 0.0, 1e-15);
  EXPECT_NEAR(h_kernel(s, v1(0), v1(1), v1(0), v1(1)), 2 - 2 * std::exp(-0.5), 1e-15);
  EXPECT_NEAR(h_kernel(s, v1(0), v1(1), v1(0), v1(1)), 0.78694, 1e-5);
}

TEST(HKernel, DimensionMismatch) {
  const auto s = KernelSpec::gaussian(1.0);
  EXPECT_THROW(h_kernel(s, Vector::Zero(2), Vector::Zero(2), Vector::Zero(3), Vector::Zero(2)), DimensionMismatch);
}

TEST(MmdComplete, ExamplesAndErrors) {
  const auto s = KernelSpec::gaussian(1.0);
  Sample x(2, 1);
  x << 0, 2;
  EXPECT_EQ(mmd2_u_complete(s, x, x), 0.0);
  const Sample r = oracle::normal_sample(30, 3, 1);
  EXPECT_EQ(mmd2_u_complete(s, r, Sample(r)), 0.0);
  EXPECT_THROW(mmd2_u_complete(s, Sample::Zero(1, 1), Sample::Zero(1, 1)), InvalidArgument);
  EXPECT_THROW(mmd2_u_complete(s, Sample::Zero(3, 1), Sample::Zero(4, 1)), InvalidArgument);
  EXPECT_THROW(mmd2_u_complete(s, Sample::Zero(3, 1), Sample::Zero(3, 2)), InvalidArgument);
}

TEST(MmdComplete, MatchesDoubleLoopOracle) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Sample x = oracle::normal_sample(20, 2, seed, 0.3);
    const Sample y = oracle::normal_sample(20, 2, seed + 1000);
    for (const auto& s : {KernelSpec::gaussian(0.8), KernelSpec::imq(1.0, -0.5)}) {
      EXPECT_LT(rel_err(mmd2_u_complete(s, x, y), oracle::mmd_complete(s, x, y)), 1e-12);
    }
  }
}

TEST(MmdComplete, HMatrixEntriesMatchOracle) {
  const auto s = KernelSpec::gaussian(1.3);
  const Sample x = oracle::normal_sample(9, 3, 4), y = oracle::normal_sample(9, 3, 5);
  const Matrix h = mmd_h_matrix(s, x, y);
  for (int i = 0; i < 9; ++i) {
    EXPECT_EQ(h(i, i), 0.0);
    for (int j = 0; j < 9; ++j) {
      if (i != j) EXPECT_NEAR(h(i, j), oracle::h(s, oracle::row(x, i), oracle::row(y, i), oracle::row(x, j), oracle::row(y, j)), 1e-14);
    }
  }
}

TEST(MmdComplete, InvariantUnderJointRowPermutation) {
  const auto s = KernelSpec::gaussian(1.0);
  const Sample x = oracle::normal_sample(40, 3, 7, 0.5), y = oracle::normal_sample(40, 3, 8);
  Sample xy(40, 6);
  xy << x, y;
  const Sample p = permuted(xy, 3);
  EXPECT_LT(rel_err(mmd2_u_complete(s, p.leftCols(3), p.rightCols(3)), mmd2_u_complete(s, x, y)), 1e-12);
}

TEST(MmdLinear, SinglePairAndIdenticalSamples) {
  const auto s = KernelSpec::gaussian(1.0);
  const Sample x = oracle::normal_sample(2, 2, 1), y = oracle::normal_sample(2, 2, 2);
  EXPECT_NEAR(mmd2_u_linear(s, x, y), oracle::h(s, oracle::row(x, 1), oracle::row(y, 1), oracle::row(x, 0), oracle::row(y, 0)), 1e-15);
  EXPECT_EQ(mmd2_u_linear(s, x, x), 0.0);
  EXPECT_THROW(mmd2_u_linear(s, Sample::Zero(1, 2), Sample::Zero(1, 2)), InvalidArgument);
}

TEST(MmdLinear, OddRowCountDropsLastRow) {
  const auto s = KernelSpec::gaussian(1.0);
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Sample x = oracle::normal_sample(21, 3, seed, 0.5), y = oracle::normal_sample(21, 3, seed + 50);
    const double v = mmd2_u_linear(s, x, y);
    EXPECT_LT(rel_err(v, oracle::mmd_linear(s, x, y)), 1e-12);
    EXPECT_EQ(v, mmd2_u_linear(s, x.topRows(20), y.topRows(20)));
    EXPECT_EQ(mmd_linear_terms(s, x, y).size(), 10);
  }
}

TEST(MmdLinear, DependsOnRowOrder) {
  const auto s = KernelSpec::gaussian(1.0);
  const Sample x = oracle::normal_sample(6, 2, 1, 1.0), y = oracle::normal_sample(6, 2, 2);
  Sample x2 = x, y2 = y;
  x2.row(1).swap(x2.row(2));
  y2.row(1).swap(y2.row(2));
  EXPECT_NE(mmd2_u_linear(s, x, y), mmd2_u_linear(s, x2, y2));
  EXPECT_NEAR(mmd2_u_complete(s, x, y), mmd2_u_complete(s, x2, y2), 1e-14);
}

TEST(SteinKernel, StandardNormalAtOrigin) {
  const auto s = KernelSpec::gaussian(1.0);
  EXPECT_NEAR(stein_kernel(s, std_normal_score(), v1(0), v1(0)), 1.0, 1e-15);
}

TEST(SteinKernel, CoincidentPointsHaveNoCrossTermForGaussian) {
  const auto s = KernelSpec::gaussian(0.7);
  const Vector x = oracle::normal_sample(1, 3, 2).row(0).transpose();
  const Vector sx = -x;
  const double expected = sx.dot(sx) + 3 / (0.7 * 0.7);
  EXPECT_NEAR(stein_kernel(s, std_normal_score(), x, x), expected, 1e-12);
}

// Compose the Stein kernel from the kernel-module primitives.
TEST(SteinKernel, MatchesCompositionOfKernelPrimitives) {
  std::mt19937 rng(9);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 50; ++t) {
    const auto spec = t % 2 ? KernelSpec::gaussian(0.5 + t * 0.05) : KernelSpec::imq(1.0 + 0.02 * t, -0.5);
    Vector x(3), y(3), sx(3), sy(3);
    for (int k = 0; k < 3; ++k) {
      x(k) = nd(rng);
      y(k) = nd(rng);
      sx(k) = nd(rng);
      sy(k) = nd(rng);
    }
    const double composed = sx.dot(sy) * eval(spec, x, y) + sx.dot(grad_y(spec, x, y)) +
                            grad_x(spec, x, y).dot(sy) + trace_grad_xy(spec, x, y);
    const double v = stein_kernel(spec, x, sx, y, sy);
    EXPECT_LT(rel_err(v, composed), 1e-12);
    EXPECT_LT(rel_err(v, oracle::stein(spec, sx, sy, x, y)), 1e-12);
    EXPECT_LT(rel_err(stein_kernel(spec, y, sy, x, sx), v), 1e-12);
  }
}

TEST(SteinKernel, NonFiniteScoreReportsRowIndex) {
  Sample x = oracle::normal_sample(10, 2, 1);
  x(6, 0) = 1e6;
  const ScoreFunction bad = [](const VectorRef& p) -> Vector {
    Vector out = -p;
    if (p(0) > 1e5) out(0) = std::numeric_limits<double>::quiet_NaN();
    return out;
  };
  try {
    (void)ksd2_u_complete(KernelSpec::gaussian(1.0), bad, x);
    FAIL() << "expected NonFiniteScore";
  } catch (const NonFiniteScore& e) {
    EXPECT_EQ(e.index(), 6u);
  }
  const ScoreFunction wrong_dim = [](const VectorRef&) -> Vector { return Vector::Zero(3); };
  EXPECT_THROW(score_rows(wrong_dim, x), DimensionMismatch);
}

TEST(KsdComplete, MatchesDoubleLoopOracle) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Sample x = oracle::normal_sample(20, 3, seed);
    const auto score = shifted_score(0.4);
    const oracle::Score os = [](const Vector& p) -> Vector { return -(p.array() - 0.4).matrix(); };
    for (const auto& s : {KernelSpec::gaussian(1.1), KernelSpec::imq(1.0, -0.5)}) {
      EXPECT_LT(rel_err(ksd2_u_complete(s, score, x), oracle::ksd_complete(s, os, x)), 1e-12);
    }
  }
}

TEST(KsdComplete, PermutationInvariantAndErrors) {
  const auto s = KernelSpec::gaussian(1.0);
  const Sample x = oracle::normal_sample(40, 2, 3);
  EXPECT_LT(rel_err(ksd2_u_complete(s, shifted_score(1.0), permuted(x, 5)), ksd2_u_complete(s, shifted_score(1.0), x)), 1e-12);
  EXPECT_THROW(ksd2_u_complete(s, std_normal_score(), Sample::Zero(1, 2)), InvalidArgument);
}

TEST(KsdLinear, PairingOracleAndOddRows) {
  const auto s = KernelSpec::gaussian(1.0);
  const oracle::Score os = [](const Vector& p) -> Vector { return -p; };
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Sample x = oracle::normal_sample(21, 3, seed, 0.2);
    const double v = ksd2_u_linear(s, std_normal_score(), x);
    EXPECT_LT(rel_err(v, oracle::ksd_linear(s, os, x)), 1e-12);
    EXPECT_EQ(v, ksd2_u_linear(s, std_normal_score(), x.topRows(20)));
  }
  const Sample two = oracle::normal_sample(2, 2, 1);
  EXPECT_NEAR(ksd2_u_linear(s, std_normal_score(), two),
              stein_kernel(s, std_normal_score(), two.row(1).transpose(), two.row(0).transpose()), 1e-15);
}

TEST(KsdMonteCarlo, TrueScoreHasZeroMean) {
  const auto s = KernelSpec::gaussian(1.0);
  std::vector<double> v;
  for (unsigned t = 0; t < 100; ++t) v.push_back(ksd2_u_complete(s, std_normal_score(), oracle::normal_sample(2000, 1, 500 + t)));
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double ss = 0;
  for (double a : v) ss += (a - mean) * (a - mean);
  const double se = std::sqrt(ss / (v.size() - 1) / v.size());
  EXPECT_LT(std::abs(mean), 3 * se);
}

TEST(KsdMonteCarlo, MismatchedModelIsPositive) {
  const auto s = KernelSpec::gaussian(1.0);
  for (unsigned t = 0; t < 100; ++t) {
    EXPECT_GT(ksd2_u_complete(s, shifted_score(10.0), oracle::normal_sample(2000, 1, 900 + t)), 0.0);
  }
}

TEST(KsdMonteCarlo, LinearAndCompleteAgreeInExpectation) {
  const auto s = KernelSpec::gaussian(1.0);
  std::vector<double> lin, full;
  for (unsigned t = 0; t < 200; ++t) {
    const Sample x = oracle::normal_sample(200, 1, 3000 + t);
    lin.push_back(ksd2_u_linear(s, shifted_score(0.5), x));
    full.push_back(ksd2_u_complete(s, shifted_score(0.5), x));
  }
  auto mean = [](const std::vector<double>& a) { return std::accumulate(a.begin(), a.end(), 0.0) / a.size(); };
  double ss = 0;
  const double ml = mean(lin);
  for (double a : lin) ss += (a - ml) * (a - ml);
  const double se = std::sqrt(ss / (lin.size() - 1) / lin.size());
  EXPECT_LT(std::abs(ml - mean(full)), 3 * se);
}

TEST(OffDiagonal, MeansExcludeDiagonal) {
  Matrix m(3, 3);
  m << 100, 1, 2, 3, 100, 4, 5, 6, 100;
  EXPECT_DOUBLE_EQ(off_diagonal_mean(m), 21.0 / 6);
  const Vector r = off_diagonal_row_means(m);
  EXPECT_DOUBLE_EQ(r(0), 1.5);
  EXPECT_DOUBLE_EQ(r(1), 3.5);
  EXPECT_DOUBLE_EQ(r(2), 5.5);
}
