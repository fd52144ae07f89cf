#include <gtest/gtest.h>

#include <cmath>

#include "infousage/classify.hpp"
#include "infousage/errors.hpp"
#include "infousage/rng.hpp"

using namespace infousage;

namespace {

std::vector<double> grid(std::size_t n) {
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = static_cast<double>(i);
  return xs;
}

}  // namespace

TEST(Patterns, ThresholdClassOnDistinctPoints) {
  const auto s = ClassificationSetup::threshold({3.0, 1.0, 2.0}, {0.5, 0.5, 0.5});
  const auto ps = s.patterns();
  ASSERT_EQ(ps.size(), 4u);
  EXPECT_EQ(ps[0], (LabelPattern{1, 1, 1}));
  EXPECT_EQ(ps[1], (LabelPattern{1, -1, 1}));
  EXPECT_EQ(ps[2], (LabelPattern{1, -1, -1}));
  EXPECT_EQ(ps[3], (LabelPattern{-1, -1, -1}));
}

TEST(Patterns, TiedInputsShareLabels) {
  const auto s = ClassificationSetup::threshold({1.0, 1.0, 2.0}, {0.5, 0.5, 0.5});
  EXPECT_EQ(s.patterns().size(), 3u);
}

TEST(Errors, TrainingAndTrueError) {
  const LabelPattern f{1, -1, 1, 1}, y{1, 1, 1, -1};
  EXPECT_DOUBLE_EQ(training_error(f, y), 0.5);
  EXPECT_DOUBLE_EQ(true_error(f, {1.0, 0.0, 0.5, 1.0}), (0 + 0 + 0.5 + 0) / 4.0);
}

TEST(Erm, MatchesBruteForce) {
  const auto s = ClassificationSetup::threshold(grid(10), std::vector<double>(10, 0.5));
  const auto ps = s.patterns();
  CounterRng rng(7, 0, Stream::labels);
  for (int trial = 0; trial < 200; ++trial) {
    LabelPattern y(10);
    for (int& v : y) v = rng.below(2) ? 1 : -1;
    std::size_t best = 0;
    for (std::size_t k = 1; k < ps.size(); ++k)
      if (training_error(ps[k], y) < training_error(ps[best], y)) best = k;
    EXPECT_EQ(erm_train(s, y), best);
    EXPECT_EQ(erm_train(ps, y), best);
  }
}

TEST(VcCap, ThresholdAndFinite) {
  const auto t = ClassificationSetup::threshold(grid(16), std::vector<double>(16, 0.5));
  EXPECT_NEAR(t.vc_cap(), 3.7725887222, 1e-9);
  const auto f = ClassificationSetup::finite(grid(3), {0.5, 0.5, 0.5},
                                             {{1, 1, 1}, {-1, 1, 1}, {1, -1, 1}, {-1, -1, -1}});
  EXPECT_NEAR(f.vc_cap(), std::log(4.0), 1e-15);
}

TEST(Setup, Validation) {
  EXPECT_THROW(ClassificationSetup::threshold({1.0, 2.0}, {0.5}), ConfigError);
  EXPECT_THROW(ClassificationSetup::threshold({1.0}, {1.5}), ConfigError);
  EXPECT_THROW(ClassificationSetup::finite({1.0, 2.0}, {0.5, 0.5}, {{1}}), ConfigError);
}

TEST(Audit, GapBelowInformationBoundBelowVc) {
  const auto s = ClassificationSetup::threshold(grid(16), std::vector<double>(16, 0.5));
  const auto a = overfitting_audit(s, 10000, 1);
  EXPECT_TRUE(a.joint_counted);
  EXPECT_GT(a.gap, 0.0);
  EXPECT_LE(a.gap, a.bound);
  EXPECT_LE(a.bound, a.vc_bound);
  EXPECT_LE(a.I_hat, a.H_pattern + 1e-12);
  EXPECT_NEAR(a.bound, std::sqrt(a.I_hat / 32.0), 1e-15);
}

TEST(Audit, DeterministicLabelsGiveNoGap) {
  const auto s = ClassificationSetup::threshold(grid(8), std::vector<double>(8, 1.0));
  const auto a = overfitting_audit(s, 500, 1);
  EXPECT_NEAR(a.gap, 0.0, 1e-15);
  EXPECT_NEAR(a.I_hat, 0.0, 1e-15);
}
