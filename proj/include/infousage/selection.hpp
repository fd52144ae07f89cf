#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "infousage/rng.hpp"

namespace infousage {

enum class RuleKind {
  argmax,
  argmin,
  top_k_uniform,
  threshold,
  gibbs,
  variance_filter,
  grouped_max,
};

std::string to_string(RuleKind kind);
RuleKind rule_kind_from_string(const std::string& name);

/// Immutable description of a selection rule T and its parameters.
struct SelectionRule {
  RuleKind kind = RuleKind::argmax;
  std::size_t m0 = 1;              // top_k_uniform, grouped_max
  double threshold = 0.0;          // threshold (M)
  std::size_t fallback_index = 0;  // threshold
  double beta = 0.0;               // gibbs inverse temperature
  std::size_t K = 1;               // gibbs draws without replacement

  static SelectionRule argmax() { return {RuleKind::argmax}; }
  static SelectionRule argmin() { return {RuleKind::argmin}; }
  static SelectionRule top_k_uniform(std::size_t m0);
  static SelectionRule threshold_rule(double M, std::size_t fallback_index);
  static SelectionRule gibbs(double beta, std::size_t K = 1);
  static SelectionRule variance_filter() { return {RuleKind::variance_filter}; }
  static SelectionRule grouped_max(std::size_t m0);

  bool randomized() const;
  bool needs_raw_data() const { return kind == RuleKind::variance_filter; }
  /// Throws InputError when the parameters are invalid for m candidates.
  void validate(std::size_t m) const;
  std::string describe() const;
};

/// Raw per-feature samples X (m rows of n samples, row-major).
struct RawDataEnsembleView {
  std::size_t m = 0;
  std::size_t n = 0;
  std::span<const double> X;

  std::span<const double> row(std::size_t i) const { return X.subspan(i * n, n); }
  /// phi[i]: row mean.
  std::vector<double> means() const;
  /// V[i] = sum_j (X[i,j] - phi[i])^2 (unnormalized).
  std::vector<double> variances() const;
};

/// Smallest index attaining the maximum.
std::size_t argmax_select(std::span<const double> phi);
/// Smallest index attaining the minimum.
std::size_t argmin_select(std::span<const double> phi);

/// Indices of the m0 largest entries, ties ordered by index.
std::vector<std::size_t> top_indices(std::span<const double> phi, std::size_t m0);

std::size_t top_k_uniform_select(std::span<const double> phi, std::size_t m0, CounterRng& rng);

/// Uniform draw from {i != fallback : phi_i >= M}; returns fallback_index when
/// that set is empty.
std::size_t threshold_select(std::span<const double> phi, double M, std::size_t fallback_index,
                             CounterRng& rng);

/// Softmax with inverse temperature beta, computed with max-subtraction.
std::vector<double> gibbs_pmf(std::span<const double> phi, double beta);

/// K indices drawn without replacement, each draw from the Gibbs weights
/// renormalized over the indices not yet drawn (Plackett-Luce).
std::vector<std::size_t> gibbs_select(std::span<const double> phi, double beta, std::size_t K,
                                      CounterRng& rng);

/// Inverse temperature whose Gibbs mean sum_i pi_i phi_i equals b, by monotone
/// bisection. Requires mean(phi) <= b < max(phi).
double solve_gibbs_beta(std::span<const double> phi, double b);

/// Index of the feature with the largest sample variance.
std::size_t variance_filter_select(const RawDataEnsembleView& view);

/// Random partition into m0 groups of m/m0, then a uniform pick among the
/// group winners.
std::size_t grouped_max_select(std::span<const double> phi, std::size_t m0, CounterRng& rng);

/// P(T = i | phi) for every rule except variance_filter (which needs raw data;
/// its pmf is the point mass at variance_filter_select).
std::vector<double> conditional_pmf(const SelectionRule& rule, std::span<const double> phi);

/// H(T | phi) for grouped_max. Ties are broken by index, so the ranks always
/// form a permutation and the value does not depend on phi.
double grouped_max_conditional_entropy(std::size_t m, std::size_t m0);

/// H(T | phi = phi) in nats; closed forms where they exist.
double conditional_entropy(const SelectionRule& rule, std::span<const double> phi);

struct SelectionOutcome {
  std::size_t index = 0;
  double conditional_entropy = 0.0;
  bool fell_back = false;  // threshold rule returned its fallback
};

/// Runs one selection. `raw` must be non-null for variance_filter.
SelectionOutcome apply_rule(const SelectionRule& rule, std::span<const double> phi,
                            const RawDataEnsembleView* raw, CounterRng& rng);

}  // namespace infousage
