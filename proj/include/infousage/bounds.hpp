#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace infousage {

/// sigma * sqrt(2 I).
double bias_bound(double sigma, double I);

/// sqrt(sum_i p_i sigma_i^2) * sqrt(2 I).
double bias_bound_hetero(std::span<const double> sigmas, std::span<const double> pmf, double I);

/// Sub-exponential (sigma, b): min of b I + sigma^2/(2b) and, when b < 1,
/// sqrt(b) I + sigma^2/(2 sqrt(b)).
double bias_bound_subexp(double sigma, double b, double I);

/// sigma + 36 sigma sqrt(2 I).
double abs_error_bound(double sigma, double I);
/// 1.25 sigma^2 + 10 sigma^2 I.
double sq_error_bound(double sigma, double I);

/// H/8 - 2.5; may be negative (vacuous).
double sq_error_lower_bound(double H);
/// 10 H + 1.5.
double sq_error_upper_bound_prop3(double H);

/// Unit-variance Gaussians: E[(phi_T - mu_T)^2] >= H(T) for the threshold-M
/// rule once M - max mu >= sqrt(2 ln(2 pi (1 + n_hat)(M - max mu)) + 3), where
/// n_hat = max_i E[#other exceedances | phi_i >= M].
bool threshold_condition_gaussian(double M, double max_mu, double n_hat);
/// Shifted exponentials: E[phi_T - mu_T] >= H(T)/2 once
/// M - max lambda >= 4 + 2 ln(1 + n_hat).
bool threshold_condition_exponential(double M, double max_lambda, double n_hat);

/// sigma sqrt(2 ln(m/m0)).
double topk_bound(double sigma, std::size_t m, std::size_t m0);

/// epsilon + sqrt(I / ln(1/(2 epsilon))), capped at 1.
double pvalue_bound(double epsilon, double I_TZ);

/// sigma sqrt(2 H(X*)).
double regret_bound(double sigma, double H_xstar);

/// d * max(1, ln(n e / d)).
double vc_info_bound(double d, double n);
/// sqrt(I / (2 n)).
double overfit_bound(double I, double n);

/// Noise standard deviations omega_j, j = 1, 2, ...
struct NoiseSchedule {
  enum class Kind { generic, fourth_root };
  Kind kind = Kind::fourth_root;
  double sigma = 1.0;          // fourth_root: omega_j = sigma j^(1/4)
  std::vector<double> omegas;  // generic

  static NoiseSchedule fourth_root(double sigma);
  static NoiseSchedule generic(std::vector<double> omegas);
  static NoiseSchedule constant(double omega, std::size_t length);

  /// omega_j for j >= 1.
  double omega(std::size_t j) const;
  /// Number of omegas available (unbounded for fourth_root).
  bool covers(std::size_t j) const;
  std::string describe() const;
};

/// Information budget after k queries: (sigma^2 / 2) sum_{j<=k} omega_j^-2.
double schedule_budget(double sigma, const NoiseSchedule& schedule, std::size_t k);

constexpr double kAbsErrorConstant = 36.0;

/// sigma/sqrt(n) + omega_{k+1} sqrt(2/(pi n)) + 36 sigma sqrt(2 I_k / n),
/// with I_k = schedule_budget(sigma, schedule, k).
double multistep_error_bound(double sigma, double n, std::size_t k, const NoiseSchedule& schedule);

/// Pairs a bound with the empirical quantity it constrains.
struct BoundReport {
  std::string name;
  double value = 0.0;
  double empirical = 0.0;
  double tolerance = 0.0;
  bool lower = false;  // value is a lower bound on empirical
  bool satisfied = false;
  bool vacuous = false;
  double slack = 0.0;  // value - empirical (empirical - value for lower bounds)
};

BoundReport check_upper(std::string name, double bound, double empirical, double tolerance = 0.0);
/// A negative lower bound is flagged vacuous but still compared.
BoundReport check_lower(std::string name, double bound, double empirical, double tolerance = 0.0);

}  // namespace infousage
