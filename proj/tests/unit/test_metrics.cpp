#include <gtest/gtest.h>

#include <relcomp/error.hpp>
#include <relcomp/metrics.hpp>

#include <cmath>
#include <random>

using namespace relcomp;

TEST(TrialRates, CountsAgainstGroundTruth) {
  // models 0,1 as good; 2,3,4 worse
  const std::vector<std::size_t> good{0, 1}, worse{2, 3, 4};
  auto r = trial_rates({false, true, true, true, false}, good, worse);
  ASSERT_TRUE(r.tpr && r.fpr);
  EXPECT_DOUBLE_EQ(*r.tpr, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*r.fpr, 0.5);
  EXPECT_DOUBLE_EQ(r.fdr, 1.0 / 3.0);
  EXPECT_TRUE(r.any_positive);

  r = trial_rates({false, false, false, false, false}, good, worse);
  EXPECT_DOUBLE_EQ(*r.tpr, 0.0);
  EXPECT_DOUBLE_EQ(r.fdr, 0.0);
  EXPECT_FALSE(r.any_positive);
}

TEST(TrialRates, NoWorseModels) {
  const auto r = trial_rates({true, false}, {0, 1}, {});
  EXPECT_FALSE(r.tpr);
  EXPECT_DOUBLE_EQ(*r.fpr, 0.5);
  EXPECT_DOUBLE_EQ(r.fdr, 1.0);
}

TEST(TrialRates, RejectsBadPartition) {
  EXPECT_THROW(trial_rates({true, false}, {0}, {0}), InvalidArgument);
  EXPECT_THROW(trial_rates({true, false, true}, {0}, {1}), InvalidArgument);
}

TEST(Summary, MeanAndStandardError) {
  const auto e = mean_and_se({0.0, 1.0, 1.0, 0.0});
  EXPECT_DOUBLE_EQ(e.mean, 0.5);
  // sample sd = sqrt(1/3), se = sd / 2
  EXPECT_NEAR(e.se, std::sqrt(1.0 / 3.0) / 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(mean_and_se({0.3}).se, 0.0);
}

TEST(Summary, FoldsTrials) {
  std::vector<TrialRates> t;
  t.push_back(trial_rates({true, false}, {1}, {0}));
  t.push_back(trial_rates({false, true}, {1}, {0}));
  t.push_back(trial_rates({false, false}, {1}, {0}));
  const auto s = summarize(t);
  EXPECT_EQ(s.trials, 3u);
  EXPECT_NEAR(s.tpr->mean, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.fpr->mean, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.fdr.mean, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(s.reject_rate.mean, 2.0 / 3.0, 1e-15);
}

TEST(KsDistance, KnownValues) {
  EXPECT_DOUBLE_EQ(ks_uniform_distance({0.5}), 0.5);
  EXPECT_NEAR(ks_uniform_distance({0.25, 0.75}), 0.25, 1e-15);
  EXPECT_NEAR(ks_uniform_distance({0.0, 0.0}), 1.0, 1e-15);
  EXPECT_THROW(ks_uniform_distance({}), InvalidArgument);
}

TEST(KsDistance, MatchesBruteForceSupremum) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u;
  std::vector<double> p(200);
  for (auto& v : p) v = u(rng) * u(rng);
  double brute = 0;
  // evaluate |F_n(x) - x| just left and right of every jump
  std::vector<double> s = p;
  std::sort(s.begin(), s.end());
  for (double x : s) {
    for (double at : {x - 1e-13, x}) {
      double f = 0;
      for (double q : s) f += q <= at ? 1.0 : 0.0;
      brute = std::max(brute, std::abs(f / s.size() - at));
    }
  }
  EXPECT_NEAR(ks_uniform_distance(p), brute, 1e-9);
  std::vector<double> unif(2000);
  for (auto& v : unif) v = u(rng);
  EXPECT_LT(ks_uniform_distance(unif), 0.05);
}
