#include "infousage/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "infousage/bounds.hpp"
#include "infousage/ensemble.hpp"
#include "infousage/errors.hpp"
#include "infousage/infotheory.hpp"
#include "infousage/rng.hpp"

namespace infousage {

ClassificationSetup ClassificationSetup::threshold(std::vector<double> xs,
                                                   std::vector<double> label_probs) {
  ClassificationSetup s;
  s.xs = std::move(xs);
  s.label_probs = std::move(label_probs);
  s.validate();
  return s;
}

ClassificationSetup ClassificationSetup::finite(std::vector<double> xs,
                                                std::vector<double> label_probs,
                                                std::vector<LabelPattern> patterns) {
  ClassificationSetup s;
  s.kind = ClassKind::explicit_finite;
  s.xs = std::move(xs);
  s.label_probs = std::move(label_probs);
  s.explicit_patterns = std::move(patterns);
  s.validate();
  return s;
}

void ClassificationSetup::validate() const {
  if (xs.empty()) throw ConfigError("classification setup needs at least one input");
  if (label_probs.size() != xs.size()) throw ConfigError("label_probs must match xs in length");
  for (double p : label_probs)
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("label probabilities must lie in [0, 1]");
  if (kind == ClassKind::explicit_finite) {
    if (explicit_patterns.empty()) throw ConfigError("finite class without patterns");
    for (const auto& f : explicit_patterns) {
      if (f.size() != xs.size()) throw ConfigError("pattern length differs from n");
      for (int v : f)
        if (v != 1 && v != -1) throw ConfigError("patterns take values in {-1, +1}");
    }
  }
}

std::vector<LabelPattern> ClassificationSetup::patterns() const {
  if (kind == ClassKind::explicit_finite) return explicit_patterns;
  const std::size_t N = xs.size();
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<LabelPattern> out;
  LabelPattern f(N, 1);
  out.push_back(f);
  for (std::size_t k = 0; k < N; ++k) {
    f[order[k]] = -1;
    // A threshold cannot separate tied inputs.
    if (k + 1 < N && xs[order[k + 1]] == xs[order[k]]) continue;
    out.push_back(f);
  }
  return out;
}

double ClassificationSetup::vc_cap() const {
  const double nn = static_cast<double>(n());
  if (kind == ClassKind::threshold_1d) return vc_info_bound(1.0, nn);
  return std::log(static_cast<double>(patterns().size()));
}

double training_error(const LabelPattern& f, const LabelPattern& labels) {
  if (f.size() != labels.size()) throw InputError("pattern and labels differ in length");
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < f.size(); ++i) wrong += f[i] != labels[i];
  return static_cast<double>(wrong) / static_cast<double>(f.size());
}

double true_error(const LabelPattern& f, const std::vector<double>& label_probs) {
  if (f.size() != label_probs.size()) throw InputError("pattern and probabilities differ in length");
  double e = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) e += f[i] == 1 ? 1.0 - label_probs[i] : label_probs[i];
  return e / static_cast<double>(f.size());
}

std::size_t erm_train(const std::vector<LabelPattern>& patterns, const LabelPattern& labels) {
  if (patterns.empty()) throw InputError("ERM over an empty class");
  for (int v : labels)
    if (v != 1 && v != -1) throw InputError("labels take values in {-1, +1}");
  std::size_t best = 0;
  double best_err = 2.0;
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    const double e = training_error(patterns[k], labels);
    if (e < best_err) {
      best_err = e;
      best = k;
    }
  }
  return best;
}

std::size_t erm_train(const ClassificationSetup& setup, const LabelPattern& labels) {
  return erm_train(setup.patterns(), labels);
}

OverfitAudit overfitting_audit(const ClassificationSetup& setup, std::size_t R,
                               std::uint64_t seed) {
  setup.validate();
  if (R < 2) throw InputError("overfitting audit needs at least 2 replications");
  const auto F = setup.patterns();
  const std::size_t n = setup.n();
  std::vector<double> gap(R);
  std::vector<std::uint64_t> pick(R), labels_code(R);

  std::vector<double> L(F.size());
  for (std::size_t k = 0; k < F.size(); ++k) L[k] = true_error(F[k], setup.label_probs);

  const auto total = static_cast<std::int64_t>(R);
#pragma omp parallel for schedule(static)
  for (std::int64_t rr = 0; rr < total; ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    CounterRng rng(seed, r, Stream::labels);
    LabelPattern y(n);
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = rng.uniform() < setup.label_probs[i] ? 1 : -1;
      code = n <= 64 ? (code | (static_cast<std::uint64_t>(y[i] == 1) << i))
                     : mix64(code, static_cast<std::uint64_t>(y[i] == 1));
    }
    const std::size_t k = erm_train(F, y);
    pick[r] = k;
    labels_code[r] = code;
    gap[r] = L[k] - training_error(F[k], y);
  }

  OverfitAudit a;
  a.R = R;
  a.n = n;
  const MeanSe g = mean_and_se(gap);
  a.gap = g.mean;
  a.gap_se = g.se;
  a.H_pattern = label_entropy(pick).H;
  a.joint_counted = n <= 16;
  a.I_hat = a.joint_counted ? plugin_mutual_information(pick, labels_code) : a.H_pattern;
  const double nn = static_cast<double>(n);
  a.bound = overfit_bound(a.I_hat, nn);
  a.vc_cap = setup.vc_cap();
  a.vc_bound = overfit_bound(a.vc_cap, nn);
  return a;
}

}  // namespace infousage
