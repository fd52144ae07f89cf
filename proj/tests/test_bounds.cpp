#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "infousage/bounds.hpp"
#include "infousage/errors.hpp"

using namespace infousage;

TEST(Bounds, NullMaxBound) {
  EXPECT_NEAR(bias_bound(1.0, std::log(1000.0)), 3.7169221888, 1e-9);
  EXPECT_DOUBLE_EQ(bias_bound(2.0, 0.0), 0.0);
  EXPECT_THROW(bias_bound(0.0, 1.0), InputError);
  EXPECT_THROW(bias_bound(1.0, -0.1), InputError);
}

TEST(Bounds, HeteroReducesToHomogeneous) {
  const std::vector<double> sig{2.0, 2.0, 2.0}, pmf{0.2, 0.3, 0.5};
  EXPECT_NEAR(bias_bound_hetero(sig, pmf, 0.7), bias_bound(2.0, 0.7), 1e-14);
  const std::vector<double> alt{1.0, 3.0}, half{0.5, 0.5};
  EXPECT_NEAR(bias_bound_hetero(alt, half, std::log(2.0)), 2.6327688477, 1e-9);
}

TEST(Bounds, SubExponentialBranches) {
  // b >= 1: b I + sigma^2 / (2 b)
  EXPECT_NEAR(bias_bound_subexp(1.0, 1.0, 2.0), 2.5, 1e-15);
  // b < 1 takes the smaller of the two branches
  const double b = 0.25, I = 4.0;
  EXPECT_NEAR(bias_bound_subexp(1.0, b, I), std::min(b * I + 1 / (2 * b), 0.5 * I + 1.0), 1e-15);
  EXPECT_NEAR(bias_bound_subexp(1.0, 2.0, 0.0), 0.25, 1e-15);
  EXPECT_NEAR(bias_bound_subexp(2.0, 4.0, 1.0), 4.5, 1e-15);
  // b branch: 0.25 * 2 + 1 / 0.5 = 2.5; sqrt(b) branch: 0.5 * 2 + 1 = 2
  EXPECT_NEAR(bias_bound_subexp(1.0, 0.25, 2.0), 2.0, 1e-15);
  EXPECT_THROW(bias_bound_subexp(1.0, 0.0, 1.0), InputError);
}

TEST(Bounds, ErrorBounds) {
  EXPECT_NEAR(abs_error_bound(1.0, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(abs_error_bound(1.0, 0.5), 37.0, 1e-12);
  EXPECT_NEAR(sq_error_bound(2.0, 1.0), 5.0 + 40.0, 1e-12);
  EXPECT_NEAR(sq_error_lower_bound(std::log(2.0)), -2.4133566024, 1e-10);
  EXPECT_NEAR(sq_error_upper_bound_prop3(0.0), 1.5, 1e-15);
}

TEST(Bounds, TopK) {
  EXPECT_NEAR(topk_bound(1.0, 4096, 16), 3.3302184446, 1e-9);
  EXPECT_NEAR(0.8 * topk_bound(1.0, 4096, 16), 2.6641747557, 1e-9);
  EXPECT_DOUBLE_EQ(topk_bound(1.0, 10, 10), 0.0);
  EXPECT_THROW(topk_bound(1.0, 10, 11), InputError);
}

TEST(Bounds, PValueRegretVcOverfit) {
  EXPECT_NEAR(pvalue_bound(0.05, std::log(5.0)), 0.8860442598, 1e-9);
  EXPECT_DOUBLE_EQ(pvalue_bound(0.05, 100.0), 1.0);
  EXPECT_THROW(pvalue_bound(0.5, 0.1), InputError);
  EXPECT_NEAR(regret_bound(1.0, std::log(10.0)), 2.1459660263, 1e-9);
  EXPECT_NEAR(vc_info_bound(1, 100), 5.6051701860, 1e-9);
  EXPECT_NEAR(vc_info_bound(1, 16), 3.7725887222, 1e-9);
  EXPECT_DOUBLE_EQ(vc_info_bound(10, 5), 10.0);
  EXPECT_NEAR(overfit_bound(std::log(17.0), 16), 0.2975532171, 1e-9);
}

TEST(Bounds, ThresholdConditions) {
  const double n_hat = 48 * 0.5 * std::erfc(3.5 / std::sqrt(2.0));
  EXPECT_TRUE(threshold_condition_gaussian(3.5, 0.0, n_hat));
  EXPECT_FALSE(threshold_condition_gaussian(2.0, 0.0, n_hat));
  EXPECT_FALSE(threshold_condition_gaussian(1.0, 2.0, 0.0));
  EXPECT_TRUE(threshold_condition_exponential(5.0, 0.0, 48 * std::exp(-5.0)));
  EXPECT_FALSE(threshold_condition_exponential(4.0, 0.0, 1.0));
}

TEST(Schedule, FourthRootBudget) {
  const auto s = NoiseSchedule::fourth_root(1.0);
  EXPECT_NEAR(schedule_budget(1.0, s, 4), 1.3922285252, 1e-10);
  EXPECT_DOUBLE_EQ(schedule_budget(1.0, s, 0), 0.0);
  EXPECT_NEAR(s.omega(16), 2.0, 1e-15);
  EXPECT_TRUE(s.covers(1000000));
}

TEST(Schedule, GenericAndConstant) {
  const auto c = NoiseSchedule::constant(1.0, 5);
  EXPECT_NEAR(schedule_budget(1.0, c, 5), 2.5, 1e-15);
  EXPECT_FALSE(c.covers(6));
  EXPECT_THROW(c.omega(6), InputError);
  EXPECT_THROW(c.omega(0), InputError);
  EXPECT_THROW(NoiseSchedule::generic({1.0, 0.0}), InputError);
}

TEST(Schedule, InfiniteNoiseCarriesNothing) {
  const auto s = NoiseSchedule::generic({std::numeric_limits<double>::infinity(), 1.0});
  EXPECT_DOUBLE_EQ(schedule_budget(1.0, s, 1), 0.0);
}

TEST(Schedule, MultistepBound) {
  const auto s = NoiseSchedule::fourth_root(1.0);
  const double n = 1e4;
  // k = 0: nothing spent
  EXPECT_NEAR(multistep_error_bound(1.0, n, 0, s), 0.01 + std::sqrt(2 / (M_PI * n)), 1e-15);
  const double I = schedule_budget(1.0, s, 100);
  EXPECT_NEAR(multistep_error_bound(1.0, n, 100, s),
              0.01 + std::pow(101.0, 0.25) * std::sqrt(2 / (M_PI * n)) + 36 * std::sqrt(2 * I / n), 1e-12);
}

TEST(Report, CheckUpperLower) {
  const auto u = check_upper("u", 1.0, 1.05, 0.1);
  EXPECT_TRUE(u.satisfied);
  EXPECT_NEAR(u.slack, -0.05, 1e-15);
  EXPECT_FALSE(check_upper("u", 1.0, 1.2, 0.1).satisfied);
  const auto l = check_lower("l", -1.0, 0.0);
  EXPECT_TRUE(l.vacuous);
  EXPECT_TRUE(l.satisfied);
  EXPECT_FALSE(check_lower("l", 2.0, 1.0, 0.5).satisfied);
}
