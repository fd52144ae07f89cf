#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "infousage/rng.hpp"
#include "infousage/selection.hpp"

namespace infousage {

enum class NoiseKind {
  gaussian_iid,
  gaussian_correlated,
  shifted_exponential,
  bernoulli_uniform_pvalue,
};

std::string to_string(NoiseKind kind);

/// Generative model for the candidate-statistic vector phi.
///
/// `sigmas` holds one shared scale or one scale per statistic; the effective
/// standard deviation of phi_i is sigmas[i] / sqrt(n) when `n` is set. With
/// `raw_data` the model draws an m x n sample matrix and phi is its row means,
/// which is what the variance-filter rule needs.
struct StatisticEnsemble {
  std::vector<double> means;
  NoiseKind noise = NoiseKind::gaussian_iid;
  std::vector<double> sigmas{1.0};
  std::optional<Eigen::MatrixXd> covariance;
  std::optional<std::size_t> n;
  bool raw_data = false;

  std::size_t m() const { return means.size(); }
  /// Standard deviation of phi_i (sigma_i / sqrt(n)).
  double stddev(std::size_t i) const;
  /// Throws ConfigError on a broken invariant.
  void validate() const;
  std::string describe() const;

  static StatisticEnsemble gaussian(std::vector<double> means, double sigma = 1.0);
  static StatisticEnsemble gaussian_hetero(std::vector<double> means, std::vector<double> sigmas);
  /// m iid N(0, sigma^2) statistics except phi[signal_index] ~ N(mu, sigma^2).
  static StatisticEnsemble single_signal(std::size_t m, std::size_t signal_index, double mu,
                                         double sigma = 1.0);
  static StatisticEnsemble correlated(std::vector<double> means, Eigen::MatrixXd covariance);
  /// phi_i = lambda_i + Exp(1); mean lambda_i + 1.
  static StatisticEnsemble shifted_exponential(const std::vector<double>& lambdas);
  /// Uniform(0,1) p-values; with a covariance they are coupled via a Gaussian
  /// copula (still marginally uniform).
  static StatisticEnsemble uniform_pvalues(std::size_t m);
  /// X[i,j] ~ N(means[i], sigma^2) for j < n; phi = row means.
  static StatisticEnsemble raw_gaussian(std::vector<double> means, std::size_t n,
                                        double sigma = 1.0);
};

/// Draws phi vectors for one ensemble. Holds the covariance factor, so build it
/// once and share it read-only across workers.
class EnsembleSampler {
 public:
  explicit EnsembleSampler(const StatisticEnsemble& ensemble);

  std::size_t m() const { return m_; }
  std::size_t raw_width() const { return raw_n_; }

  /// Fills phi (length m). When the ensemble has raw data, `raw` must hold
  /// m * n doubles and receives the sample matrix.
  void draw(CounterRng& rng, std::span<double> phi, std::span<double> raw = {}) const;

 private:
  StatisticEnsemble ensemble_;
  std::size_t m_;
  std::size_t raw_n_ = 0;
  Eigen::MatrixXd factor_;  // lower-triangular factor of the covariance
};

/// Lower factor L with L L^T = cov. Throws ConfigError when cov is not
/// symmetric PSD within 1e-10 on eigenvalues.
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& cov);

/// R replications of (phi, T). Selection sentinel for a threshold fallback is m.
struct ReplicationBatch {
  std::size_t R = 0;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::vector<double> phi;  // R x m row-major; empty if not stored
  std::vector<std::size_t> selections;
  std::vector<double> selected_value;  // phi_T (fallback statistic's value for the sentinel)
  std::vector<double> rule_conditional_entropy;
  std::optional<std::size_t> fallback_index;

  std::size_t sentinel() const { return m; }
  bool has_phi() const { return !phi.empty(); }
  std::span<const double> row(std::size_t r) const { return {phi.data() + r * m, m}; }
  /// Statistic index a selection refers to (maps the sentinel to the fallback).
  std::size_t statistic_of(std::size_t r) const;
};

struct BatchOptions {
  bool store_phi = true;
};

/// Replication r uses CounterRng(seed, r, Stream::noise) for phi and
/// CounterRng(seed, r, Stream::selection) for the rule, so the batch is a pure
/// function of its inputs regardless of thread count.
ReplicationBatch sample_batch(const StatisticEnsemble& ensemble, const SelectionRule& rule,
                              std::size_t R, std::uint64_t seed, BatchOptions options = {});

namespace reference {
/// Single-threaded reference for sample_batch; must agree bit-for-bit.
ReplicationBatch sample_batch(const StatisticEnsemble& ensemble, const SelectionRule& rule,
                              std::size_t R, std::uint64_t seed, BatchOptions options = {});
}  // namespace reference

struct BiasSummary {
  double bias = 0.0;
  double abs_error = 0.0;
  double sq_error = 0.0;
  double std_error = 0.0;  // Monte Carlo standard error of `bias`
  double mean_selected = 0.0;
  std::size_t R = 0;
};

BiasSummary empirical_bias(const ReplicationBatch& batch, const StatisticEnsemble& ensemble);

/// Mean and standard error of a sample.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};
MeanSe mean_and_se(std::span<const double> xs);

}  // namespace infousage
