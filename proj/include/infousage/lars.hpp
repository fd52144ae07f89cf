#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace infousage {

struct LarsExperimentConfig {
  std::size_t n_rows = 100;
  std::size_t n_features = 1000;
  std::size_t n_signals = 20;
  double signal_strength = 0.04;
  double noise_variance = 0.1;
  std::size_t n_steps = 30;
  std::size_t replications = 200;
  std::uint64_t seed = 0;

  void validate() const;
};

struct LarsData {
  Eigen::MatrixXd X;  // rows standardized to mean 0, unit (population) variance
  Eigen::VectorXd y;
  Eigen::VectorXd y_star;
  Eigen::VectorXd beta;
};

/// Design from Stream::design, noise from Stream::noise (replication 0).
LarsData generate_lars_data(const LarsExperimentConfig& config, std::uint64_t seed);

/// Columns centered and scaled to unit norm. Throws InputError on a constant column.
Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& X);

struct LarsPath {
  std::vector<std::size_t> entry_order;
  bool rank_deficient = false;  // stopped early: active Gram matrix not positive definite
};

/// Least angle regression (no lasso modification) on a design whose columns
/// are already centered and unit-norm, with y centered.
LarsPath lars_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::size_t n_steps);

/// beta_j = <x_j, target> / <x_j, x_j>.
Eigen::VectorXd univariate_coefficients(const Eigen::MatrixXd& X, const Eigen::VectorXd& target);

struct LarsStepRow {
  std::size_t step = 0;
  double I_hat = 0.0;
  double bound = 0.0;      // sqrt(sum p_j sigma_j^2) sqrt(2 I_hat)
  double mean_bias = 0.0;  // running average over steps 1..step
  double bias_se = 0.0;
  double step_bias = 0.0;  // bias at this step alone
  double step_bias_se = 0.0;
};

struct LarsCurve {
  double signal_strength = 0.0;
  std::vector<LarsStepRow> rows;
  std::size_t rank_deficient_paths = 0;
  std::size_t replications = 0;
};

/// Parametric bootstrap with X fixed. Step i's information estimate is
/// Miller-Madow plug-in entropy of the signed entries (2j + [beta_hat_j < 0])
/// pooled over steps 1..i, less the corrected entropy ln i of i distinct
/// entries; bias is sign-adjusted, sign(beta_hat_T)(beta_hat_T - beta*_T).
LarsCurve lars_information_curve(const LarsExperimentConfig& config);

}  // namespace infousage
