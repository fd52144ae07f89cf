#include "infousage/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "infousage/errors.hpp"

namespace infousage {

namespace {

std::vector<std::size_t> histogram(std::span<const std::uint64_t> labels) {
  std::vector<std::uint64_t> sorted(labels.begin(), labels.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    counts.push_back(j - i);
    i = j;
  }
  return counts;
}

std::uint64_t pair_label(std::uint64_t a, std::uint64_t b) { return mix64(a, b); }

}  // namespace

std::string to_string(Correction c) {
  return c == Correction::miller_madow ? "miller_madow" : "none";
}

double plugin_entropy(std::span<const std::size_t> counts, Correction correction) {
  std::size_t total = 0, support = 0;
  for (std::size_t c : counts) {
    total += c;
    if (c > 0) ++support;
  }
  if (total == 0) throw InputError("entropy of an empty histogram");
  const double R = static_cast<double>(total);
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / R;
    h -= p * std::log(p);
  }
  if (correction == Correction::miller_madow) h += static_cast<double>(support - 1) / (2.0 * R);
  return h;
}

LabelEntropy label_entropy(std::span<const std::uint64_t> labels, Correction correction) {
  if (labels.empty()) throw InputError("entropy of an empty sample");
  const auto counts = histogram(labels);
  LabelEntropy out;
  out.support = counts.size();
  out.H = plugin_entropy(counts, correction);
  const double R = static_cast<double>(labels.size());
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / R;
    const double s = -std::log(p);
    m1 += p * s;
    m2 += p * s * s;
  }
  out.se = std::sqrt(std::max(0.0, m2 - m1 * m1) / R);
  return out;
}

double plugin_mutual_information(std::span<const std::uint64_t> a,
                                 std::span<const std::uint64_t> b, Correction correction) {
  if (a.size() != b.size()) throw InputError("paired samples differ in length");
  std::vector<std::uint64_t> joint(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) joint[i] = pair_label(a[i], b[i]);
  const double I = label_entropy(a, correction).H + label_entropy(b, correction).H -
                   label_entropy(joint, correction).H;
  return std::max(0.0, I);
}

InfoEstimate estimate_information_usage(const ReplicationBatch& batch, Correction correction) {
  if (batch.R == 0) throw InputError("information estimate from an empty batch");
  std::vector<std::uint64_t> labels(batch.selections.begin(), batch.selections.end());
  const LabelEntropy h = label_entropy(labels, correction);
  InfoEstimate est;
  est.R = batch.R;
  est.correction = correction;
  est.support_size = h.support;
  est.H_T = h.H;
  est.H_T_se = h.se;
  double hc = 0.0;
  for (double v : batch.rule_conditional_entropy) hc += v;
  est.H_T_given_phi = hc / static_cast<double>(batch.R);
  est.I = std::max(0.0, est.H_T - est.H_T_given_phi);
  return est;
}

double binned_mutual_information(std::span<const double> x, std::span<const double> y,
                                 std::size_t bins) {
  if (x.size() != y.size()) throw InputError("binned MI: length mismatch");
  if (x.size() < 1000) throw InputError("binned MI needs at least 1000 samples");
  if (bins < 4) throw InputError("binned MI needs at least 4 bins");
  const std::size_t R = x.size();

  auto quantile_bins = [&](std::span<const double> v) {
    std::vector<std::size_t> order(R);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return v[a] < v[b] || (v[a] == v[b] && a < b);
    });
    std::vector<std::size_t> bin(R);
    for (std::size_t rank = 0; rank < R; ++rank) bin[order[rank]] = rank * bins / R;
    return bin;
  };
  const auto bx = quantile_bins(x);
  const auto by = quantile_bins(y);

  std::vector<std::size_t> joint(bins * bins, 0), cx(bins, 0), cy(bins, 0);
  for (std::size_t r = 0; r < R; ++r) {
    ++joint[bx[r] * bins + by[r]];
    ++cx[bx[r]];
    ++cy[by[r]];
  }
  const double I = plugin_entropy(cx) + plugin_entropy(cy) - plugin_entropy(joint);
  return std::max(0.0, I);
}

std::uint64_t PValueIndicator::pattern(std::size_t r) const {
  const std::uint8_t* row = Z.data() + r * m;
  if (m <= 64) {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < m; ++i) bits |= static_cast<std::uint64_t>(row[i]) << i;
    return bits;
  }
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  for (std::size_t i = 0; i < m; ++i) h = mix64(h, row[i]);
  return h;
}

PValueIndicator make_pvalue_indicator(const ReplicationBatch& batch, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw InputError("epsilon must lie in (0, 1/2)");
  if (!batch.has_phi()) throw InputError("p-value indicator needs a batch with stored phi");
  PValueIndicator z;
  z.epsilon = epsilon;
  z.R = batch.R;
  z.m = batch.m;
  z.Z.resize(batch.phi.size());
  for (std::size_t k = 0; k < batch.phi.size(); ++k) z.Z[k] = batch.phi[k] < epsilon ? 1 : 0;
  return z;
}

PValueInformation pvalue_information(const ReplicationBatch& batch,
                                     const StatisticEnsemble& ensemble, double epsilon) {
  if (ensemble.noise != NoiseKind::bernoulli_uniform_pvalue)
    throw InputError("pvalue_information needs a p-value ensemble");
  const PValueIndicator Z = make_pvalue_indicator(batch, epsilon);
  std::vector<std::uint64_t> t(batch.R), z(batch.R);
  std::vector<double> small(batch.R);
  for (std::size_t r = 0; r < batch.R; ++r) {
    t[r] = batch.selections[r];
    z[r] = Z.pattern(r);
    small[r] = batch.selected_value[r] < epsilon ? 1.0 : 0.0;
  }
  PValueInformation out;
  out.I_TZ = plugin_mutual_information(t, z);
  const MeanSe ps = mean_and_se(small);
  out.P_small = ps.mean;
  out.P_small_se = ps.se;
  const MeanSe ms = mean_and_se(batch.selected_value);
  out.mean_selected = ms.mean;
  out.mean_selected_se = ms.se;
  out.pattern_lower_bound = batch.m > 20;
  return out;
}

MaxInformation max_information_rank(std::span<const double> pmf,
                                    std::optional<std::size_t> signal_index) {
  if (pmf.empty()) throw InputError("max-information of an empty pmf");
  double total = 0.0;
  for (double p : pmf) {
    if (p < 0.0) throw InputError("negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) throw InputError("pmf does not sum to 1");
  MaxInformation out;
  out.I_inf = 0.0;
  for (double p : pmf)
    if (p > 0.0) out.I_inf = std::max(out.I_inf, -std::log(p));
  if (signal_index) {
    if (*signal_index >= pmf.size()) throw InputError("signal index out of range");
    const double miss = 1.0 - pmf[*signal_index];
    if (pmf.size() >= 2 && miss > 0.0)
      out.single_signal = std::log(static_cast<double>(pmf.size() - 1) / miss);
  }
  return out;
}

std::optional<double> approx_max_information_lower(std::span<const double> pmf, double beta) {
  if (!(beta >= 0.0)) throw InputError("beta must be >= 0");
  std::optional<double> best;
  for (double p : pmf) {
    if (p <= 0.0 || p < 2.0 * beta) continue;
    const double v = -std::log(p) - std::log(2.0);
    if (!best || v > *best) best = v;
  }
  return best;
}

std::vector<double> selection_pmf(const ReplicationBatch& batch) {
  if (batch.R == 0) throw InputError("pmf of an empty batch");
  std::vector<double> pmf(batch.m, 0.0);
  for (std::size_t r = 0; r < batch.R; ++r) pmf[batch.statistic_of(r)] += 1.0;
  for (double& p : pmf) p /= static_cast<double>(batch.R);
  return pmf;
}

double gaussian_kl(double m1, double v1, double m0, double v0) {
  if (!(v1 > 0.0 && v0 > 0.0)) throw InputError("gaussian_kl needs positive variances");
  return 0.5 * (std::log(v0 / v1) + (v1 + (m1 - m0) * (m1 - m0)) / v0 - 1.0);
}

KlDecomposition kl_selection_decomposition(const ReplicationBatch& batch,
                                           const StatisticEnsemble& ensemble,
                                           std::size_t min_count) {
  if (ensemble.noise != NoiseKind::gaussian_iid && ensemble.noise != NoiseKind::gaussian_correlated)
    throw InputError("KL decomposition needs a Gaussian ensemble");
  if (!batch.has_phi()) throw InputError("KL decomposition needs stored phi");
  if (batch.m != ensemble.m()) throw InputError("batch and ensemble disagree on m");
  const std::size_t m = batch.m;
  const double R = static_cast<double>(batch.R);

  std::vector<double> s1(m, 0.0), s2(m, 0.0), c1(m, 0.0), c2(m, 0.0);
  std::vector<std::size_t> cnt(m, 0);
  for (std::size_t r = 0; r < batch.R; ++r) {
    const auto row = batch.row(r);
    for (std::size_t i = 0; i < m; ++i) {
      s1[i] += row[i];
      s2[i] += row[i] * row[i];
    }
    const std::size_t t = batch.statistic_of(r);
    const double v = row[t];
    ++cnt[t];
    c1[t] += v;
    c2[t] += v * v;
  }

  KlDecomposition out;
  for (std::size_t i = 0; i < m; ++i) {
    if (cnt[i] == 0) continue;
    const double p = static_cast<double>(cnt[i]) / R;
    if (cnt[i] < min_count) {
      out.omitted = true;
      out.omitted_mass += p;
      continue;
    }
    const double k = static_cast<double>(cnt[i]);
    const double mc = c1[i] / k;
    const double vc = std::max(1e-300, (c2[i] - k * mc * mc) / (k - 1.0));
    const double mm = s1[i] / R;
    const double vm = std::max(1e-300, (s2[i] - R * mm * mm) / (R - 1.0));
    KlTerm term;
    term.index = i;
    term.p = p;
    term.count = cnt[i];
    term.D = gaussian_kl(mc, vc, mm, vm);
    term.delta = mc - ensemble.means[i];
    out.weighted_kl += p * term.D;
    out.weighted_delta_sq += p * term.delta * term.delta;
    out.terms.push_back(term);
  }
  return out;
}

}  // namespace infousage
