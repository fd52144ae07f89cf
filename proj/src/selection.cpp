#include "infousage/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "infousage/errors.hpp"

namespace infousage {

namespace {

void require_nonempty(std::span<const double> phi) {
  if (phi.empty()) throw InputError("selection over an empty statistic vector");
}

double log_binomial(double a, double b) {
  return std::lgamma(a + 1.0) - std::lgamma(b + 1.0) - std::lgamma(a - b + 1.0);
}

double entropy_of(const std::vector<double>& pmf) {
  double h = 0.0;
  for (double p : pmf) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

// Binary indexed tree over nonnegative weights, supporting weighted draws
// with removal in O(log m).
class WeightTree {
 public:
  explicit WeightTree(const std::vector<double>& w) : tree_(w.size() + 1, 0.0) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::size_t j = i + 1;
      tree_[j] += w[i];
      const std::size_t parent = j + (j & (~j + 1));
      if (parent < tree_.size()) tree_[parent] += tree_[j];
    }
    std::size_t top = 1;
    while (top * 2 < tree_.size()) top *= 2;
    top_ = top;
  }

  double total() const {
    double s = 0.0;
    for (std::size_t j = tree_.size() - 1; j > 0; j -= j & (~j + 1)) s += tree_[j];
    return s;
  }

  void add(std::size_t i, double delta) {
    for (std::size_t j = i + 1; j < tree_.size(); j += j & (~j + 1)) tree_[j] += delta;
  }

  // Smallest index whose prefix sum exceeds target.
  std::size_t find(double target) const {
    std::size_t pos = 0;
    for (std::size_t step = top_; step > 0; step /= 2) {
      const std::size_t next = pos + step;
      if (next < tree_.size() && tree_[next] <= target) {
        pos = next;
        target -= tree_[next];
      }
    }
    return std::min(pos, tree_.size() - 2);
  }

 private:
  std::vector<double> tree_;
  std::size_t top_ = 1;
};

std::vector<double> gibbs_weights(std::span<const double> phi, double beta,
                                  const std::vector<char>* taken) {
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (taken && (*taken)[i]) continue;
    hi = std::max(hi, phi[i]);
  }
  std::vector<double> w(phi.size(), 0.0);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (taken && (*taken)[i]) continue;
    w[i] = std::exp(beta * (phi[i] - hi));
  }
  return w;
}

}  // namespace

std::string to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::argmax: return "argmax";
    case RuleKind::argmin: return "argmin";
    case RuleKind::top_k_uniform: return "top_k_uniform";
    case RuleKind::threshold: return "threshold";
    case RuleKind::gibbs: return "gibbs";
    case RuleKind::variance_filter: return "variance_filter";
    case RuleKind::grouped_max: return "grouped_max";
  }
  return "unknown";
}

RuleKind rule_kind_from_string(const std::string& name) {
  for (RuleKind k : {RuleKind::argmax, RuleKind::argmin, RuleKind::top_k_uniform,
                     RuleKind::threshold, RuleKind::gibbs, RuleKind::variance_filter,
                     RuleKind::grouped_max}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown selection rule '" + name + "'");
}

SelectionRule SelectionRule::top_k_uniform(std::size_t m0) {
  SelectionRule r{RuleKind::top_k_uniform};
  r.m0 = m0;
  return r;
}

SelectionRule SelectionRule::threshold_rule(double M, std::size_t fallback_index) {
  SelectionRule r{RuleKind::threshold};
  r.threshold = M;
  r.fallback_index = fallback_index;
  return r;
}

SelectionRule SelectionRule::gibbs(double beta, std::size_t K) {
  SelectionRule r{RuleKind::gibbs};
  r.beta = beta;
  r.K = K;
  return r;
}

SelectionRule SelectionRule::grouped_max(std::size_t m0) {
  SelectionRule r{RuleKind::grouped_max};
  r.m0 = m0;
  return r;
}

bool SelectionRule::randomized() const {
  switch (kind) {
    case RuleKind::top_k_uniform:
    case RuleKind::threshold:
    case RuleKind::gibbs:
    case RuleKind::grouped_max:
      return true;
    default:
      return false;
  }
}

void SelectionRule::validate(std::size_t m) const {
  if (m == 0) throw InputError("selection over zero candidates");
  switch (kind) {
    case RuleKind::top_k_uniform:
      if (m0 < 1 || m0 > m) throw InputError("top_k_uniform requires 1 <= m0 <= m");
      break;
    case RuleKind::grouped_max:
      if (m0 < 1 || m0 > m || m % m0 != 0)
        throw InputError("grouped_max requires m divisible by m0 (m=" + std::to_string(m) +
                         ", m0=" + std::to_string(m0) + ")");
      break;
    case RuleKind::threshold:
      if (fallback_index >= m) throw InputError("threshold fallback_index out of range");
      break;
    case RuleKind::gibbs:
      if (!(beta >= 0.0)) throw InputError("gibbs requires beta >= 0");
      if (K < 1 || K > m) throw InputError("gibbs requires 1 <= K <= m");
      break;
    default:
      break;
  }
}

std::string SelectionRule::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  switch (kind) {
    case RuleKind::top_k_uniform:
    case RuleKind::grouped_max:
      os << "(m0=" << m0 << ")";
      break;
    case RuleKind::threshold:
      os << "(M=" << threshold << ", fallback=" << fallback_index << ")";
      break;
    case RuleKind::gibbs:
      os << "(beta=" << beta << ", K=" << K << ")";
      break;
    default:
      break;
  }
  return os.str();
}

std::vector<double> RawDataEnsembleView::means() const {
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto r = row(i);
    out[i] = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(n);
  }
  return out;
}

std::vector<double> RawDataEnsembleView::variances() const {
  const auto mu = means();
  std::vector<double> out(m);
  for (std::size_t i = 0; i < m; ++i) {
    double s = 0.0;
    for (double x : row(i)) s += (x - mu[i]) * (x - mu[i]);
    out[i] = s;
  }
  return out;
}

std::size_t argmax_select(std::span<const double> phi) {
  require_nonempty(phi);
  return static_cast<std::size_t>(std::max_element(phi.begin(), phi.end()) - phi.begin());
}

std::size_t argmin_select(std::span<const double> phi) {
  require_nonempty(phi);
  return static_cast<std::size_t>(std::min_element(phi.begin(), phi.end()) - phi.begin());
}

std::vector<std::size_t> top_indices(std::span<const double> phi, std::size_t m0) {
  if (m0 < 1 || m0 > phi.size()) throw InputError("top-m0 requires 1 <= m0 <= m");
  std::vector<std::size_t> idx(phi.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  auto before = [&](std::size_t a, std::size_t b) {
    return phi[a] > phi[b] || (phi[a] == phi[b] && a < b);
  };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(m0), idx.end(), before);
  idx.resize(m0);
  return idx;
}

std::size_t top_k_uniform_select(std::span<const double> phi, std::size_t m0, CounterRng& rng) {
  require_nonempty(phi);
  const auto top = top_indices(phi, m0);
  return top[rng.below(m0)];
}

std::size_t threshold_select(std::span<const double> phi, double M, std::size_t fallback_index,
                             CounterRng& rng) {
  require_nonempty(phi);
  if (fallback_index >= phi.size()) throw InputError("threshold fallback_index out of range");
  std::vector<std::size_t> exceed;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (i != fallback_index && phi[i] >= M) exceed.push_back(i);
  }
  if (exceed.empty()) return fallback_index;
  return exceed[rng.below(exceed.size())];
}

std::vector<double> gibbs_pmf(std::span<const double> phi, double beta) {
  require_nonempty(phi);
  if (!(beta >= 0.0)) throw InputError("gibbs requires beta >= 0");
  auto w = gibbs_weights(phi, beta, nullptr);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& x : w) x /= total;
  return w;
}

std::vector<std::size_t> gibbs_select(std::span<const double> phi, double beta, std::size_t K,
                                      CounterRng& rng) {
  require_nonempty(phi);
  if (!(beta >= 0.0)) throw InputError("gibbs requires beta >= 0; use an argmin framing instead");
  if (K < 1 || K > phi.size()) throw InputError("gibbs requires 1 <= K <= m");

  std::vector<char> taken(phi.size(), 0);
  auto w = gibbs_weights(phi, beta, nullptr);
  WeightTree tree(w);
  std::vector<std::size_t> out;
  out.reserve(K);
  for (std::size_t k = 0; k < K; ++k) {
    double total = tree.total();
    if (!(total > 0.0) || !std::isfinite(total)) {
      // Remaining weights underflowed; rescale against the remaining maximum.
      w = gibbs_weights(phi, beta, &taken);
      tree = WeightTree(w);
      total = tree.total();
    }
    std::size_t pick = tree.find(rng.uniform() * total);
    if (taken[pick] || w[pick] <= 0.0) {
      // Rounding at a cell boundary; take the nearest live index.
      std::size_t lo = pick, hi = pick;
      while (true) {
        if (lo > 0) --lo;
        if (hi + 1 < phi.size()) ++hi;
        if (!taken[lo] && w[lo] > 0.0) { pick = lo; break; }
        if (!taken[hi] && w[hi] > 0.0) { pick = hi; break; }
      }
    }
    out.push_back(pick);
    taken[pick] = 1;
    tree.add(pick, -w[pick]);
    w[pick] = 0.0;
  }
  return out;
}

double solve_gibbs_beta(std::span<const double> phi, double b) {
  require_nonempty(phi);
  const double hi_val = *std::max_element(phi.begin(), phi.end());
  const double mean0 =
      std::accumulate(phi.begin(), phi.end(), 0.0) / static_cast<double>(phi.size());
  if (b < mean0 || b >= hi_val)
    throw InputError("gibbs target b must satisfy mean(phi) <= b < max(phi)");
  auto gibbs_mean = [&](double beta) {
    const auto p = gibbs_pmf(phi, beta);
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * phi[i];
    return s;
  };
  double lo = 0.0, hi = 1.0;
  while (gibbs_mean(hi) < b) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw InputError("gibbs target b not reachable");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (gibbs_mean(mid) < b) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::size_t variance_filter_select(const RawDataEnsembleView& view) {
  if (view.n < 2) throw InputError("variance filter needs at least 2 samples per feature");
  if (view.m == 0) throw InputError("variance filter over zero features");
  const auto v = view.variances();
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

std::size_t grouped_max_select(std::span<const double> phi, std::size_t m0, CounterRng& rng) {
  require_nonempty(phi);
  const std::size_t m = phi.size();
  if (m0 < 1 || m0 > m || m % m0 != 0)
    throw InputError("grouped_max requires m divisible by m0");
  // The group whose winner is reported is uniform among the m0 groups of a
  // uniform partition, so its members are a uniform (m/m0)-subset.
  const std::size_t g = m / m0;
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::size_t best = m;
  for (std::size_t j = 0; j < g; ++j) {
    const std::size_t k = j + rng.below(m - j);
    std::swap(idx[j], idx[k]);
    const std::size_t c = idx[j];
    if (best == m || phi[c] > phi[best] || (phi[c] == phi[best] && c < best)) best = c;
  }
  return best;
}

std::vector<double> conditional_pmf(const SelectionRule& rule, std::span<const double> phi) {
  require_nonempty(phi);
  rule.validate(phi.size());
  const std::size_t m = phi.size();
  std::vector<double> pmf(m, 0.0);
  switch (rule.kind) {
    case RuleKind::argmax:
      pmf[argmax_select(phi)] = 1.0;
      break;
    case RuleKind::argmin:
      pmf[argmin_select(phi)] = 1.0;
      break;
    case RuleKind::top_k_uniform:
      for (std::size_t i : top_indices(phi, rule.m0)) pmf[i] = 1.0 / static_cast<double>(rule.m0);
      break;
    case RuleKind::threshold: {
      std::size_t count = 0;
      for (std::size_t i = 0; i < m; ++i)
        if (i != rule.fallback_index && phi[i] >= rule.threshold) ++count;
      if (count == 0) {
        pmf[rule.fallback_index] = 1.0;
      } else {
        for (std::size_t i = 0; i < m; ++i)
          if (i != rule.fallback_index && phi[i] >= rule.threshold)
            pmf[i] = 1.0 / static_cast<double>(count);
      }
      break;
    }
    case RuleKind::gibbs:
      pmf = gibbs_pmf(phi, rule.beta);
      break;
    case RuleKind::grouped_max: {
      // Rank r (1 = largest) leads its group iff the other g-1 members all rank
      // below it: C(m-r, g-1) / C(m-1, g-1).
      const std::size_t g = m / rule.m0;
      const auto order = top_indices(phi, m);
      const double denom = log_binomial(static_cast<double>(m - 1), static_cast<double>(g - 1));
      for (std::size_t r = 1; r <= m; ++r) {
        if (m - r < g - 1) break;
        const double lead = std::exp(
            log_binomial(static_cast<double>(m - r), static_cast<double>(g - 1)) - denom);
        pmf[order[r - 1]] = lead / static_cast<double>(rule.m0);
      }
      break;
    }
    case RuleKind::variance_filter:
      throw InputError("variance_filter pmf needs raw data; it is a point mass at the selection");
  }
  return pmf;
}

double conditional_entropy(const SelectionRule& rule, std::span<const double> phi) {
  switch (rule.kind) {
    case RuleKind::argmax:
    case RuleKind::argmin:
    case RuleKind::variance_filter:
      return 0.0;
    case RuleKind::top_k_uniform:
      return std::log(static_cast<double>(rule.m0));
    case RuleKind::threshold: {
      std::size_t count = 0;
      for (std::size_t i = 0; i < phi.size(); ++i)
        if (i != rule.fallback_index && phi[i] >= rule.threshold) ++count;
      return count > 1 ? std::log(static_cast<double>(count)) : 0.0;
    }
    case RuleKind::gibbs:
      return entropy_of(conditional_pmf(rule, phi));
    case RuleKind::grouped_max:
      rule.validate(phi.size());
      return grouped_max_conditional_entropy(phi.size(), rule.m0);
  }
  return 0.0;
}

double grouped_max_conditional_entropy(std::size_t m, std::size_t m0) {
  if (m0 < 1 || m0 > m || m % m0 != 0)
    throw InputError("grouped_max requires m divisible by m0");
  thread_local std::size_t cached_m = 0, cached_m0 = 0;
  thread_local double cached_h = 0.0;
  if (cached_m == m && cached_m0 == m0) return cached_h;
  const std::size_t g = m / m0;
  const double denom = log_binomial(static_cast<double>(m - 1), static_cast<double>(g - 1));
  double h = 0.0;
  for (std::size_t r = 1; r <= m && m - r >= g - 1; ++r) {
    const double p =
        std::exp(log_binomial(static_cast<double>(m - r), static_cast<double>(g - 1)) - denom) /
        static_cast<double>(m0);
    if (p > 0.0) h -= p * std::log(p);
  }
  cached_m = m;
  cached_m0 = m0;
  cached_h = h;
  return h;
}

SelectionOutcome apply_rule(const SelectionRule& rule, std::span<const double> phi,
                            const RawDataEnsembleView* raw, CounterRng& rng) {
  SelectionOutcome out;
  switch (rule.kind) {
    case RuleKind::argmax:
      out.index = argmax_select(phi);
      break;
    case RuleKind::argmin:
      out.index = argmin_select(phi);
      break;
    case RuleKind::top_k_uniform:
      out.index = top_k_uniform_select(phi, rule.m0, rng);
      out.conditional_entropy = std::log(static_cast<double>(rule.m0));
      break;
    case RuleKind::threshold: {
      out.index = threshold_select(phi, rule.threshold, rule.fallback_index, rng);
      out.conditional_entropy = conditional_entropy(rule, phi);
      out.fell_back = out.index == rule.fallback_index;
      break;
    }
    case RuleKind::gibbs: {
      const auto pmf = gibbs_pmf(phi, rule.beta);
      out.index = gibbs_select(phi, rule.beta, 1, rng).front();
      out.conditional_entropy = entropy_of(pmf);
      break;
    }
    case RuleKind::variance_filter:
      if (raw == nullptr) throw ConfigError("variance_filter rule needs a raw-data ensemble");
      out.index = variance_filter_select(*raw);
      break;
    case RuleKind::grouped_max:
      out.index = grouped_max_select(phi, rule.m0, rng);
      out.conditional_entropy = grouped_max_conditional_entropy(phi.size(), rule.m0);
      break;
  }
  return out;
}

}  // namespace infousage
