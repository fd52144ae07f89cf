#include "infousage/lars.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "infousage/ensemble.hpp"
#include "infousage/errors.hpp"
#include "infousage/infotheory.hpp"
#include "infousage/rng.hpp"

namespace infousage {

void LarsExperimentConfig::validate() const {
  if (n_rows < 2 || n_features < 1) throw ConfigError("LARS design needs >= 2 rows and >= 1 feature");
  if (n_signals > n_features) throw ConfigError("n_signals exceeds n_features");
  if (!(signal_strength > 0.0)) throw ConfigError("signal_strength must be > 0");
  if (!(noise_variance >= 0.0)) throw ConfigError("noise_variance must be >= 0");
  if (n_steps < 1 || n_steps > std::min(n_rows - 1, n_features))
    throw ConfigError("n_steps must lie in [1, min(n_rows - 1, n_features)]");
  if (replications < 2) throw ConfigError("LARS bootstrap needs at least 2 replications");
}

LarsData generate_lars_data(const LarsExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  const auto n = static_cast<Eigen::Index>(config.n_rows);
  const auto p = static_cast<Eigen::Index>(config.n_features);
  LarsData d;
  d.X.resize(n, p);
  CounterRng design(seed, 0, Stream::design);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) d.X(i, j) = design.normal();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mean = d.X.row(i).mean();
    d.X.row(i).array() -= mean;
    const double sd = std::sqrt(d.X.row(i).squaredNorm() / static_cast<double>(p));
    d.X.row(i) /= sd;
  }
  d.beta = Eigen::VectorXd::Zero(p);
  d.beta.head(static_cast<Eigen::Index>(config.n_signals)).setConstant(config.signal_strength);
  d.y_star = d.X * d.beta;
  d.y = d.y_star;
  CounterRng noise(seed, 0, Stream::noise);
  const double sd = std::sqrt(config.noise_variance);
  for (Eigen::Index i = 0; i < n; ++i) d.y[i] += sd * noise.normal();
  return d;
}

Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd Z = X.rowwise() - X.colwise().mean();
  for (Eigen::Index j = 0; j < Z.cols(); ++j) {
    const double norm = Z.col(j).norm();
    if (!(norm > 1e-12)) throw InputError("column " + std::to_string(j) + " is constant");
    Z.col(j) /= norm;
  }
  return Z;
}

LarsPath lars_path(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::size_t n_steps) {
  const auto n = static_cast<std::size_t>(X.rows());
  const auto p = static_cast<std::size_t>(X.cols());
  if (y.size() != X.rows()) throw InputError("lars_path: y length differs from X rows");
  if (n_steps > std::min(n > 0 ? n - 1 : 0, p))
    throw InputError("lars_path: n_steps exceeds min(rows - 1, cols)");
  LarsPath path;
  if (n_steps == 0) return path;

  Eigen::VectorXd mu = Eigen::VectorXd::Zero(X.rows());
  Eigen::VectorXd c = X.transpose() * y;
  std::vector<char> active(p, 0);

  Eigen::Index first = 0;
  const double C0 = c.cwiseAbs().maxCoeff(&first);
  if (!(C0 > 0.0)) return path;
  path.entry_order.push_back(static_cast<std::size_t>(first));
  active[static_cast<std::size_t>(first)] = 1;

  while (path.entry_order.size() < n_steps) {
    const auto k = static_cast<Eigen::Index>(path.entry_order.size());
    Eigen::MatrixXd XA(X.rows(), k);
    for (Eigen::Index a = 0; a < k; ++a) {
      const auto j = static_cast<Eigen::Index>(path.entry_order[static_cast<std::size_t>(a)]);
      XA.col(a) = (c[j] >= 0.0 ? 1.0 : -1.0) * X.col(j);
    }
    double C = 0.0;
    for (std::size_t j : path.entry_order) C = std::max(C, std::abs(c[static_cast<Eigen::Index>(j)]));

    const Eigen::MatrixXd G = XA.transpose() * XA;
    Eigen::LLT<Eigen::MatrixXd> llt(G);
    if (llt.info() != Eigen::Success ||
        llt.matrixLLT().diagonal().minCoeff() < 1e-10) {
      path.rank_deficient = true;
      break;
    }
    const Eigen::VectorXd g1 = llt.solve(Eigen::VectorXd::Ones(k));
    const double AA = 1.0 / std::sqrt(g1.sum());
    const Eigen::VectorXd u = XA * (AA * g1);
    const Eigen::VectorXd a = X.transpose() * u;

    const double tiny = 1e-14 * std::max(1.0, C);
    double gamma = std::numeric_limits<double>::infinity();
    std::size_t next = p;
    for (std::size_t j = 0; j < p; ++j) {
      if (active[j]) continue;
      const auto jj = static_cast<Eigen::Index>(j);
      for (double sgn : {1.0, -1.0}) {
        const double den = AA - sgn * a[jj];
        if (!(den > tiny)) continue;
        const double g = (C - sgn * c[jj]) / den;
        if (g > tiny && g < gamma) {
          gamma = g;
          next = j;
        }
      }
    }
    if (next == p) break;
    mu += gamma * u;
    c = X.transpose() * (y - mu);
    path.entry_order.push_back(next);
    active[next] = 1;
  }
  return path;
}

Eigen::VectorXd univariate_coefficients(const Eigen::MatrixXd& X, const Eigen::VectorXd& target) {
  if (target.size() != X.rows()) throw InputError("univariate_coefficients: length mismatch");
  Eigen::VectorXd b(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double nn = X.col(j).squaredNorm();
    if (!(nn > 0.0)) throw InputError("column " + std::to_string(j) + " has zero norm");
    b[j] = X.col(j).dot(target) / nn;
  }
  return b;
}

LarsCurve lars_information_curve(const LarsExperimentConfig& config) {
  config.validate();
  const LarsData data = generate_lars_data(config, config.seed);
  const Eigen::MatrixXd Xs = standardize_columns(data.X);
  const Eigen::VectorXd beta_star = univariate_coefficients(data.X, data.y_star);
  const std::size_t R = config.replications;
  const std::size_t S = config.n_steps;
  const std::size_t p = config.n_features;
  const double noise_sd = std::sqrt(config.noise_variance);

  std::vector<std::vector<std::size_t>> codes(R);
  std::vector<std::vector<double>> bias(R);
  Eigen::MatrixXd coef(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(R));
  std::vector<char> complete(R, 0);

  const auto total = static_cast<std::int64_t>(R);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t rr = 0; rr < total; ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    CounterRng rng(config.seed, mix64(r, 1), Stream::noise);
    Eigen::VectorXd y = data.y_star;
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += noise_sd * rng.normal();
    const Eigen::VectorXd bh = univariate_coefficients(data.X, y);
    coef.col(static_cast<Eigen::Index>(r)) = bh;
    const Eigen::VectorXd yc = y.array() - y.mean();
    const LarsPath path = lars_path(Xs, yc, S);
    if (path.entry_order.size() < S) continue;
    complete[r] = 1;
    for (std::size_t j : path.entry_order) {
      const auto jj = static_cast<Eigen::Index>(j);
      const double sgn = bh[jj] < 0.0 ? -1.0 : 1.0;
      codes[r].push_back(2 * j + (bh[jj] < 0.0 ? 1 : 0));
      bias[r].push_back(sgn * (bh[jj] - beta_star[jj]));
    }
  }

  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < R; ++r)
    if (complete[r]) kept.push_back(r);
  LarsCurve curve;
  curve.signal_strength = config.signal_strength;
  curve.replications = R;
  curve.rank_deficient_paths = R - kept.size();
  if (kept.size() < 2) throw InputError("too few complete LARS paths for a bootstrap estimate");

  std::vector<double> sd(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    const auto row = coef.row(static_cast<Eigen::Index>(j));
    const double m = row.mean();
    sd[j] = std::sqrt((row.array() - m).square().sum() / static_cast<double>(R - 1));
  }

  const std::size_t K = kept.size();
  std::vector<std::uint64_t> pooled;
  pooled.reserve(K * S);
  std::vector<double> running(K, 0.0), step_vals(K);
  for (std::size_t i = 1; i <= S; ++i) {
    for (std::size_t a = 0; a < K; ++a) pooled.push_back(codes[kept[a]][i - 1]);
    const LabelEntropy h = label_entropy(pooled, Correction::miller_madow);
    const double N = static_cast<double>(pooled.size());
    const double baseline = std::log(static_cast<double>(i)) + static_cast<double>(i - 1) / (2.0 * N);
    LarsStepRow row;
    row.step = i;
    row.I_hat = std::max(0.0, h.H - baseline);

    double v = 0.0;
    for (std::uint64_t code : pooled) {
      const double s = sd[code / 2];
      v += s * s;
    }
    v /= N;
    row.bound = std::sqrt(v) * std::sqrt(2.0 * row.I_hat);

    for (std::size_t a = 0; a < K; ++a) {
      const double b = bias[kept[a]][i - 1];
      running[a] += b;
      step_vals[a] = b;
    }
    std::vector<double> avg(K);
    for (std::size_t a = 0; a < K; ++a) avg[a] = running[a] / static_cast<double>(i);
    const MeanSe ra = mean_and_se(avg);
    const MeanSe sb = mean_and_se(step_vals);
    row.mean_bias = ra.mean;
    row.bias_se = ra.se;
    row.step_bias = sb.mean;
    row.step_bias_se = sb.se;
    curve.rows.push_back(row);
  }
  return curve;
}

}  // namespace infousage
