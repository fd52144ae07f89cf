#include "infousage/ensemble.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "infousage/errors.hpp"

namespace infousage {

namespace {

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

bool rule_fits(const StatisticEnsemble& e, const SelectionRule& rule) {
  if (rule.needs_raw_data()) return e.raw_data;
  return true;
}

struct Workspace {
  std::vector<double> phi;
  std::vector<double> raw;
};

// One replication: everything it draws comes from its own two counters.
void replicate(const EnsembleSampler& sampler, const SelectionRule& rule, std::uint64_t seed,
               std::size_t r, Workspace& ws, ReplicationBatch& out, bool store_phi) {
  const std::size_t m = sampler.m();
  CounterRng noise(seed, r, Stream::noise);
  sampler.draw(noise, ws.phi, ws.raw);

  RawDataEnsembleView view;
  const RawDataEnsembleView* raw = nullptr;
  if (sampler.raw_width() > 0) {
    view = {m, sampler.raw_width(), ws.raw};
    raw = &view;
  }
  CounterRng pick(seed, r, Stream::selection);
  const SelectionOutcome o = apply_rule(rule, ws.phi, raw, pick);

  out.selections[r] = o.fell_back ? m : o.index;
  out.selected_value[r] = ws.phi[o.index];
  out.rule_conditional_entropy[r] = o.conditional_entropy;
  if (store_phi) std::copy(ws.phi.begin(), ws.phi.end(), out.phi.begin() + r * m);
}

ReplicationBatch prepare(const StatisticEnsemble& ensemble, const SelectionRule& rule,
                         std::size_t R, std::uint64_t seed, const BatchOptions& options) {
  ensemble.validate();
  if (R < 1) throw InputError("sample_batch needs R >= 1");
  if (!rule_fits(ensemble, rule))
    throw ConfigError("rule '" + to_string(rule.kind) + "' is incompatible with ensemble '" +
                      ensemble.describe() + "'");
  rule.validate(ensemble.m());

  ReplicationBatch b;
  b.R = R;
  b.m = ensemble.m();
  b.seed = seed;
  if (options.store_phi) b.phi.assign(R * b.m, 0.0);
  b.selections.assign(R, 0);
  b.selected_value.assign(R, 0.0);
  b.rule_conditional_entropy.assign(R, 0.0);
  if (rule.kind == RuleKind::threshold) b.fallback_index = rule.fallback_index;
  return b;
}

Workspace make_workspace(const EnsembleSampler& s) {
  return {std::vector<double>(s.m()), std::vector<double>(s.m() * s.raw_width())};
}

}  // namespace

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::gaussian_iid: return "gaussian_iid";
    case NoiseKind::gaussian_correlated: return "gaussian_correlated";
    case NoiseKind::shifted_exponential: return "shifted_exponential";
    case NoiseKind::bernoulli_uniform_pvalue: return "bernoulli_uniform_pvalue";
  }
  return "unknown";
}

double StatisticEnsemble::stddev(std::size_t i) const {
  if (noise == NoiseKind::gaussian_correlated && covariance) return std::sqrt((*covariance)(i, i));
  if (noise == NoiseKind::bernoulli_uniform_pvalue) return std::sqrt(1.0 / 12.0);
  const double s = sigmas.size() == 1 ? sigmas[0] : sigmas[i];
  return n ? s / std::sqrt(static_cast<double>(*n)) : s;
}

void StatisticEnsemble::validate() const {
  const std::size_t M = means.size();
  if (M < 1) throw ConfigError("ensemble needs m >= 1");
  if (sigmas.size() != 1 && sigmas.size() != M)
    throw ConfigError("sigmas must have length 1 or m");
  for (double s : sigmas)
    if (!(s > 0.0)) throw ConfigError("every sigma must be > 0");
  if (n && *n < 1) throw ConfigError("n must be >= 1");
  if (covariance) {
    if (covariance->rows() != static_cast<Eigen::Index>(M) ||
        covariance->cols() != static_cast<Eigen::Index>(M))
      throw ConfigError("covariance must be m x m");
  }
  if (noise == NoiseKind::gaussian_correlated && !covariance)
    throw ConfigError("gaussian_correlated ensemble without a covariance");
  if (raw_data) {
    if (noise != NoiseKind::gaussian_iid) throw ConfigError("raw data is only drawn for gaussian_iid");
    if (!n || *n < 2) throw ConfigError("raw-data ensemble needs n >= 2");
  }
}

std::string StatisticEnsemble::describe() const {
  std::ostringstream os;
  os << to_string(noise) << "(m=" << means.size();
  if (n) os << ", n=" << *n;
  if (raw_data) os << ", raw";
  os << ")";
  return os.str();
}

StatisticEnsemble StatisticEnsemble::gaussian(std::vector<double> means, double sigma) {
  StatisticEnsemble e;
  e.means = std::move(means);
  e.sigmas = {sigma};
  return e;
}

StatisticEnsemble StatisticEnsemble::gaussian_hetero(std::vector<double> means,
                                                     std::vector<double> sigmas) {
  StatisticEnsemble e;
  e.means = std::move(means);
  e.sigmas = std::move(sigmas);
  return e;
}

StatisticEnsemble StatisticEnsemble::single_signal(std::size_t m, std::size_t signal_index,
                                                   double mu, double sigma) {
  if (signal_index >= m) throw InputError("signal index out of range");
  std::vector<double> means(m, 0.0);
  means[signal_index] = mu;
  return gaussian(std::move(means), sigma);
}

StatisticEnsemble StatisticEnsemble::correlated(std::vector<double> means,
                                                Eigen::MatrixXd covariance) {
  StatisticEnsemble e;
  e.means = std::move(means);
  e.noise = NoiseKind::gaussian_correlated;
  e.covariance = std::move(covariance);
  return e;
}

StatisticEnsemble StatisticEnsemble::shifted_exponential(const std::vector<double>& lambdas) {
  StatisticEnsemble e;
  e.noise = NoiseKind::shifted_exponential;
  e.means.reserve(lambdas.size());
  for (double l : lambdas) e.means.push_back(l + 1.0);
  return e;
}

StatisticEnsemble StatisticEnsemble::uniform_pvalues(std::size_t m) {
  StatisticEnsemble e;
  e.noise = NoiseKind::bernoulli_uniform_pvalue;
  e.means.assign(m, 0.5);
  return e;
}

StatisticEnsemble StatisticEnsemble::raw_gaussian(std::vector<double> means, std::size_t n,
                                                  double sigma) {
  StatisticEnsemble e = gaussian(std::move(means), sigma);
  e.n = n;
  e.raw_data = true;
  return e;
}

Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& cov) {
  if (cov.rows() != cov.cols()) throw ConfigError("covariance is not square");
  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw ConfigError("covariance is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  if (lo < -1e-10)
    throw ConfigError("covariance is not positive semidefinite (min eigenvalue " +
                      std::to_string(lo) + ")");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  // Singular but PSD: LDLT with pivoting, then undo the permutation.
  Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
  if (ldlt.info() != Eigen::Success) throw ConfigError("covariance factorization failed");
  Eigen::VectorXd d = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd L = ldlt.matrixL();
  Eigen::MatrixXd F = ldlt.transpositionsP().transpose() * (L * d.asDiagonal());
  return F;
}

EnsembleSampler::EnsembleSampler(const StatisticEnsemble& ensemble)
    : ensemble_(ensemble), m_(ensemble.m()) {
  ensemble_.validate();
  if (ensemble_.raw_data) raw_n_ = *ensemble_.n;
  if (ensemble_.covariance) factor_ = covariance_factor(*ensemble_.covariance);
}

void EnsembleSampler::draw(CounterRng& rng, std::span<double> phi, std::span<double> raw) const {
  const auto& e = ensemble_;
  switch (e.noise) {
    case NoiseKind::gaussian_iid:
      if (raw_n_ > 0) {
        if (raw.size() < m_ * raw_n_) throw InputError("raw buffer too small");
        for (std::size_t i = 0; i < m_; ++i) {
          const double s = e.sigmas.size() == 1 ? e.sigmas[0] : e.sigmas[i];
          double sum = 0.0;
          for (std::size_t j = 0; j < raw_n_; ++j) {
            const double x = e.means[i] + s * rng.normal();
            raw[i * raw_n_ + j] = x;
            sum += x;
          }
          phi[i] = sum / static_cast<double>(raw_n_);
        }
      } else {
        for (std::size_t i = 0; i < m_; ++i) phi[i] = e.means[i] + e.stddev(i) * rng.normal();
      }
      break;
    case NoiseKind::gaussian_correlated: {
      Eigen::VectorXd z(static_cast<Eigen::Index>(m_));
      for (std::size_t i = 0; i < m_; ++i) z[static_cast<Eigen::Index>(i)] = rng.normal();
      const Eigen::VectorXd x = factor_ * z;
      for (std::size_t i = 0; i < m_; ++i) phi[i] = e.means[i] + x[static_cast<Eigen::Index>(i)];
      break;
    }
    case NoiseKind::shifted_exponential:
      for (std::size_t i = 0; i < m_; ++i) {
        // 1 - u lies in (0, 1], so the draw is never below lambda_i.
        const double ex = -std::log1p(-rng.uniform());
        phi[i] = (e.means[i] - 1.0) + ex;
      }
      break;
    case NoiseKind::bernoulli_uniform_pvalue:
      if (e.covariance) {
        Eigen::VectorXd z(static_cast<Eigen::Index>(m_));
        for (std::size_t i = 0; i < m_; ++i) z[static_cast<Eigen::Index>(i)] = rng.normal();
        const Eigen::VectorXd x = factor_ * z;
        for (std::size_t i = 0; i < m_; ++i) {
          const auto k = static_cast<Eigen::Index>(i);
          const double sd = std::sqrt((*e.covariance)(k, k));
          phi[i] = sd > 0.0 ? standard_normal_cdf(x[k] / sd) : 0.5;
        }
      } else {
        for (std::size_t i = 0; i < m_; ++i) phi[i] = rng.uniform();
      }
      break;
  }
}

std::size_t ReplicationBatch::statistic_of(std::size_t r) const {
  const std::size_t s = selections[r];
  if (s == m) {
    if (!fallback_index) throw InputError("sentinel selection without a fallback index");
    return *fallback_index;
  }
  return s;
}

ReplicationBatch sample_batch(const StatisticEnsemble& ensemble, const SelectionRule& rule,
                              std::size_t R, std::uint64_t seed, BatchOptions options) {
  ReplicationBatch b = prepare(ensemble, rule, R, seed, options);
  const EnsembleSampler sampler(ensemble);
  const auto n = static_cast<std::int64_t>(R);

#pragma omp parallel
  {
    Workspace ws = make_workspace(sampler);
#pragma omp for schedule(static)
    for (std::int64_t r = 0; r < n; ++r)
      replicate(sampler, rule, seed, static_cast<std::size_t>(r), ws, b, options.store_phi);
  }
  return b;
}

namespace reference {

ReplicationBatch sample_batch(const StatisticEnsemble& ensemble, const SelectionRule& rule,
                              std::size_t R, std::uint64_t seed, BatchOptions options) {
  ReplicationBatch b = prepare(ensemble, rule, R, seed, options);
  const EnsembleSampler sampler(ensemble);
  Workspace ws = make_workspace(sampler);
  for (std::size_t r = 0; r < R; ++r) replicate(sampler, rule, seed, r, ws, b, options.store_phi);
  return b;
}

}  // namespace reference

MeanSe mean_and_se(std::span<const double> xs) {
  if (xs.empty()) throw InputError("mean of an empty sample");
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

BiasSummary empirical_bias(const ReplicationBatch& batch, const StatisticEnsemble& ensemble) {
  if (batch.m != ensemble.m()) throw InputError("batch and ensemble disagree on m");
  if (batch.R == 0) throw InputError("empty batch");
  std::vector<double> err(batch.R);
  BiasSummary s;
  s.R = batch.R;
  for (std::size_t r = 0; r < batch.R; ++r) {
    const std::size_t i = batch.statistic_of(r);
    err[r] = batch.selected_value[r] - ensemble.means[i];
    s.abs_error += std::abs(err[r]);
    s.sq_error += err[r] * err[r];
    s.mean_selected += batch.selected_value[r];
  }
  const double R = static_cast<double>(batch.R);
  s.abs_error /= R;
  s.sq_error /= R;
  s.mean_selected /= R;
  const MeanSe ms = mean_and_se(err);
  s.bias = ms.mean;
  s.std_error = ms.se;
  return s;
}

}  // namespace infousage
