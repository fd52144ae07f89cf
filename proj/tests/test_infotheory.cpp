#include <gtest/gtest.h>

#include <cmath>

#include "infousage/ensemble.hpp"
#include "infousage/errors.hpp"
#include "infousage/infotheory.hpp"
#include "infousage/selection.hpp"

using namespace infousage;

TEST(Entropy, PluginAndMillerMadow) {
  const std::vector<std::size_t> counts{3, 1};
  EXPECT_NEAR(plugin_entropy(counts), 0.5623351446, 1e-10);
  EXPECT_NEAR(plugin_entropy(counts, Correction::miller_madow), 0.5623351446 + 1.0 / 8, 1e-10);
  const std::vector<std::size_t> with_zero{4, 0, 4};
  EXPECT_NEAR(plugin_entropy(with_zero), std::log(2.0), 1e-15);
  const std::vector<std::size_t> single{7};
  EXPECT_DOUBLE_EQ(plugin_entropy(single), 0.0);
}

TEST(Entropy, LabelEntropyUniform) {
  std::vector<std::uint64_t> labels;
  for (int r = 0; r < 4000; ++r) labels.push_back(static_cast<std::uint64_t>(r % 8) * 1000003u);
  const auto h = label_entropy(labels);
  EXPECT_NEAR(h.H, std::log(8.0), 1e-12);
  EXPECT_EQ(h.support, 8u);
  EXPECT_NEAR(h.se, 0.0, 1e-12);
}

TEST(MutualInformation, IdenticalAndIndependent) {
  std::vector<std::uint64_t> a, b, c;
  CounterRng rng(1, 0, Stream::noise);
  for (int r = 0; r < 20000; ++r) {
    a.push_back(rng.below(4));
    b.push_back(a.back());
    c.push_back(rng.below(4));
  }
  EXPECT_NEAR(plugin_mutual_information(a, b), label_entropy(a).H, 1e-12);
  EXPECT_LT(plugin_mutual_information(a, c), 0.002);
  EXPECT_GE(plugin_mutual_information(a, c), 0.0);
}

TEST(MutualInformation, BinnedGaussianChannel) {
  // I(X; X + W) = 0.5 ln(1 + snr) for X ~ N(0,1), W ~ N(0, 1/snr).
  for (double snr : {0.25, 1.0, 4.0}) {
    CounterRng rng(2, static_cast<std::uint64_t>(snr * 100), Stream::noise);
    std::vector<double> x(100000), y(100000);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.normal();
      y[i] = x[i] + rng.normal() / std::sqrt(snr);
    }
    const double truth = 0.5 * std::log1p(snr);
    EXPECT_NEAR(binned_mutual_information(x, y, 32), truth, 0.1 * truth) << "snr=" << snr;
  }
  std::vector<double> small(10, 0.0);
  EXPECT_THROW(binned_mutual_information(small, small, 32), InputError);
}

TEST(InformationUsage, ArgmaxUsesEntropy) {
  const auto e = StatisticEnsemble::gaussian(std::vector<double>(4, 0.0));
  const auto info = estimate_information_usage(sample_batch(e, SelectionRule::argmax(), 40000, 1));
  EXPECT_NEAR(info.H_T, std::log(4.0), 0.01);
  EXPECT_DOUBLE_EQ(info.H_T_given_phi, 0.0);
  EXPECT_DOUBLE_EQ(info.I, info.H_T);
  EXPECT_EQ(info.support_size, 4u);
}

TEST(InformationUsage, RandomRuleCarriesNoInformation) {
  const auto e = StatisticEnsemble::gaussian(std::vector<double>(4, 0.0));
  const auto info = estimate_information_usage(
      sample_batch(e, SelectionRule::gibbs(0.0), 40000, 1), Correction::miller_madow);
  EXPECT_NEAR(info.H_T_given_phi, std::log(4.0), 1e-9);
  EXPECT_NEAR(info.I, 0.0, 0.002);
}

TEST(PValues, IndependentUniformsOfFive) {
  const auto e = StatisticEnsemble::uniform_pvalues(5);
  const auto b = sample_batch(e, SelectionRule::argmin(), 40000, 4);
  const auto pv = pvalue_information(b, e, 0.05);
  EXPECT_NEAR(pv.P_small, 0.2262190625, 4 * pv.P_small_se);
  EXPECT_NEAR(pv.mean_selected, 1.0 / 6, 4 * pv.mean_selected_se);
  EXPECT_GT(pv.I_TZ, 0.0);
  EXPECT_FALSE(pv.pattern_lower_bound);
  const auto Z = make_pvalue_indicator(b, 0.05);
  for (std::size_t r = 0; r < 100; ++r) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < 5; ++i) bits |= std::uint64_t{Z.Z[r * 5 + i]} << i;
    EXPECT_EQ(Z.pattern(r), bits);
  }
}

TEST(MaxInformation, RankSelection) {
  const std::vector<double> pmf{0.7, 0.1, 0.1, 0.1, 0.0};
  const auto mi = max_information_rank(pmf, 0);
  EXPECT_NEAR(mi.I_inf, std::log(10.0), 1e-12);
  ASSERT_TRUE(mi.single_signal.has_value());
  EXPECT_NEAR(*mi.single_signal, std::log(4.0 / 0.3), 1e-12);
  const auto approx = approx_max_information_lower(pmf, 0.05);
  ASSERT_TRUE(approx.has_value());
  EXPECT_NEAR(*approx, std::log(10.0) - std::log(2.0), 1e-12);
  EXPECT_FALSE(approx_max_information_lower(pmf, 0.4).has_value());
}

TEST(KL, GaussianClosedForm) {
  EXPECT_DOUBLE_EQ(gaussian_kl(1.0, 2.0, 1.0, 2.0), 0.0);
  // KL(N(1,1) || N(0,1)) = 1/2
  EXPECT_NEAR(gaussian_kl(1.0, 1.0, 0.0, 1.0), 0.5, 1e-15);
  EXPECT_NEAR(gaussian_kl(0.0, 1.0, 0.0, 4.0), 0.5 * (0.25 - 1 + std::log(4.0)), 1e-15);
}

TEST(KL, DecompositionBelowInformation) {
  const auto e = StatisticEnsemble::gaussian({0.0, 0.0});
  const auto b = sample_batch(e, SelectionRule::argmax(), 40000, 8);
  const auto kl = kl_selection_decomposition(b, e);
  const auto info = estimate_information_usage(b);
  EXPECT_LE(kl.weighted_kl, info.I + 0.05);
  EXPECT_LE(kl.weighted_delta_sq, 2 * info.I + 0.05);
  EXPECT_EQ(kl.terms.size(), 2u);
  // delta = E[phi_i | i is the max of two] = 1/sqrt(pi)
  EXPECT_NEAR(kl.terms[0].delta, 0.5641896, 0.02);
  EXPECT_FALSE(kl.omitted);
}
