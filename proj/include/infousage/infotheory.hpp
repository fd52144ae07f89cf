#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infousage/ensemble.hpp"

namespace infousage {

enum class Correction { none, miller_madow };

std::string to_string(Correction c);

/// -sum p ln p over nonzero cells, in nats. Miller-Madow adds (support-1)/(2R).
double plugin_entropy(std::span<const std::size_t> counts, Correction correction = Correction::none);

struct LabelEntropy {
  double H = 0.0;
  double se = 0.0;  // delta-method standard error, sqrt(Var[-ln p(X)] / R)
  std::size_t support = 0;
};

/// Plug-in entropy of a sample of discrete labels.
LabelEntropy label_entropy(std::span<const std::uint64_t> labels,
                           Correction correction = Correction::none);

/// Plug-in I(A;B) = H(A) + H(B) - H(A,B) from paired labels, floored at 0.
double plugin_mutual_information(std::span<const std::uint64_t> a,
                                 std::span<const std::uint64_t> b,
                                 Correction correction = Correction::none);

struct InfoEstimate {
  double H_T = 0.0;
  double H_T_given_phi = 0.0;
  double I = 0.0;
  double H_T_se = 0.0;
  std::size_t R = 0;
  Correction correction = Correction::none;
  std::size_t support_size = 0;
};

/// H(T) by plug-in over the selections (sentinel counted as its own cell);
/// H(T|phi) is the batch mean of the exact per-replication conditional entropy.
InfoEstimate estimate_information_usage(const ReplicationBatch& batch,
                                        Correction correction = Correction::none);

/// Plug-in MI of the (bins x bins) histogram after equal-probability
/// (rank-quantile) binning of each marginal.
double binned_mutual_information(std::span<const double> x, std::span<const double> y,
                                 std::size_t bins);

/// Z[r, i] = 1(phi_i < epsilon), row-major R x m.
struct PValueIndicator {
  double epsilon = 0.0;
  std::size_t R = 0;
  std::size_t m = 0;
  std::vector<std::uint8_t> Z;

  std::uint64_t pattern(std::size_t r) const;
};

PValueIndicator make_pvalue_indicator(const ReplicationBatch& batch, double epsilon);

struct PValueInformation {
  double I_TZ = 0.0;
  double P_small = 0.0;
  double P_small_se = 0.0;
  double mean_selected = 0.0;
  double mean_selected_se = 0.0;
  /// Set when m > 20: rows are hashed and the pattern entropy may be undercounted.
  bool pattern_lower_bound = false;
};

/// Needs a batch with stored phi drawn from a p-value ensemble.
PValueInformation pvalue_information(const ReplicationBatch& batch,
                                     const StatisticEnsemble& ensemble, double epsilon);

struct MaxInformation {
  double I_inf = 0.0;
  std::optional<double> single_signal;  // ln((m-1) / P(T != signal))
};

/// max over the support of -ln P(T=i). Zero cells are skipped.
MaxInformation max_information_rank(std::span<const double> pmf,
                                    std::optional<std::size_t> signal_index = std::nullopt);

/// Lower bound on approximate max-information at level beta for a
/// deterministic rule: max over {i : P(T=i) >= 2 beta} of -ln P(T=i), minus ln 2.
/// Returns nullopt when no cell is heavy enough.
std::optional<double> approx_max_information_lower(std::span<const double> pmf, double beta);

/// Empirical selection pmf over the m statistics (sentinel mapped to its fallback).
std::vector<double> selection_pmf(const ReplicationBatch& batch);

struct KlTerm {
  std::size_t index = 0;
  double p = 0.0;       // P(T = i)
  double D = 0.0;       // KL(N fit of phi_i | T=i  ||  N fit of phi_i)
  double delta = 0.0;   // E[phi_i | T=i] - mu_i
  std::size_t count = 0;
};

struct KlDecomposition {
  std::vector<KlTerm> terms;
  double weighted_kl = 0.0;        // sum p_i D_i over retained indices
  double weighted_delta_sq = 0.0;  // sum p_i delta_i^2 over retained indices
  double omitted_mass = 0.0;       // selection mass of indices below min_count
  bool omitted = false;
};

/// Gaussian fits per selected index. Needs stored phi and a Gaussian ensemble.
KlDecomposition kl_selection_decomposition(const ReplicationBatch& batch,
                                           const StatisticEnsemble& ensemble,
                                           std::size_t min_count = 30);

/// Closed-form KL(N(m1, v1) || N(m0, v0)).
double gaussian_kl(double m1, double v1, double m0, double v0);

}  // namespace infousage
