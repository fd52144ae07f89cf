#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace infousage {

using LabelPattern = std::vector<int>;  // entries in {-1, +1}

struct ClassificationSetup {
  enum class ClassKind { threshold_1d, explicit_finite };

  std::vector<double> xs;
  std::vector<double> label_probs;  // P(Y_i = +1)
  ClassKind kind = ClassKind::threshold_1d;
  std::vector<LabelPattern> explicit_patterns;

  static ClassificationSetup threshold(std::vector<double> xs, std::vector<double> label_probs);
  static ClassificationSetup finite(std::vector<double> xs, std::vector<double> label_probs,
                                    std::vector<LabelPattern> patterns);

  std::size_t n() const { return xs.size(); }
  void validate() const;
  /// Distinct label patterns the class realizes on xs. For thresholds,
  /// pattern k marks the k smallest inputs -1 and the rest +1 (duplicates
  /// from tied inputs removed).
  std::vector<LabelPattern> patterns() const;
  /// VC dimension for thresholds (1); for a finite class, the cap ln|F| is
  /// used instead (see vc_cap).
  double vc_cap() const;
};

/// Fraction of training labels the pattern gets wrong.
double training_error(const LabelPattern& f, const LabelPattern& labels);
/// (1/n) sum_i P(Y_i != f(x_i)).
double true_error(const LabelPattern& f, const std::vector<double>& label_probs);

/// Index into `patterns` with minimal training error, smallest index on ties.
std::size_t erm_train(const std::vector<LabelPattern>& patterns, const LabelPattern& labels);
std::size_t erm_train(const ClassificationSetup& setup, const LabelPattern& labels);

struct OverfitAudit {
  double gap = 0.0;  // mean of L(f_hat) - L_hat(f_hat)
  double gap_se = 0.0;
  double I_hat = 0.0;
  double H_pattern = 0.0;
  double bound = 0.0;     // sqrt(I_hat / (2n))
  double vc_cap = 0.0;
  double vc_bound = 0.0;  // sqrt(vc_cap / (2n))
  bool joint_counted = false;  // false: I_hat is the H(pattern) relaxation
  std::size_t R = 0;
  std::size_t n = 0;
};

/// Resamples labels R times (Stream::labels), trains by ERM, and estimates
/// I(f_hat(x); Y). With n <= 16 the joint (pattern, labels) histogram is counted.
OverfitAudit overfitting_audit(const ClassificationSetup& setup, std::size_t R,
                               std::uint64_t seed);

}  // namespace infousage
