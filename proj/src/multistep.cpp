#include "infousage/multistep.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "infousage/errors.hpp"
#include "infousage/infotheory.hpp"

namespace infousage {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Index with the largest mean response (or |mean| when `absolute`); smallest
// index on ties.
std::size_t best_mean(const std::vector<QueryRecord>& history, bool absolute) {
  if (history.empty()) return 0;
  std::map<std::size_t, std::pair<double, std::size_t>> acc;
  for (const auto& h : history) {
    auto& a = acc[h.index];
    a.first += h.response;
    ++a.second;
  }
  std::size_t best = acc.begin()->first;
  double best_v = -kInf;
  for (const auto& [i, a] : acc) {
    double v = a.first / static_cast<double>(a.second);
    if (absolute) v = std::abs(v);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  return best;
}

StatisticEnsemble session_ensemble(const SessionConfig& c) {
  StatisticEnsemble e;
  e.means = c.means.empty() ? std::vector<double>(c.m, 0.0) : c.means;
  e.sigmas = {c.sigma};
  e.n = static_cast<std::size_t>(std::llround(c.n));
  return e;
}

}  // namespace

QuerySession::QuerySession(const StatisticEnsemble& ensemble, std::uint64_t seed,
                           std::uint64_t replication)
    : noise_(seed, replication, Stream::query_noise) {
  ensemble.validate();
  if (ensemble.noise != NoiseKind::gaussian_iid || ensemble.raw_data)
    throw ConfigError("query sessions need a gaussian_iid ensemble, got " + ensemble.describe());
  if (ensemble.sigmas.size() != 1) throw ConfigError("query sessions need a single sigma");
  means_ = ensemble.means;
  sigma_ = ensemble.sigmas[0];
  n_ = ensemble.n ? static_cast<double>(*ensemble.n) : 1.0;
  const double sd = sigma_ / std::sqrt(n_);
  CounterRng draw(seed, replication, Stream::noise);
  phi_.resize(means_.size());
  for (std::size_t i = 0; i < means_.size(); ++i) phi_[i] = means_[i] + sd * draw.normal();
}

QuerySession::QuerySession(const StatisticEnsemble& ensemble, NoiseSchedule schedule,
                           std::uint64_t seed, std::uint64_t replication,
                           std::optional<double> budget_limit)
    : QuerySession(ensemble, seed, replication) {
  schedule_ = std::move(schedule);
  limit_ = budget_limit;
  if (limit_ && !(*limit_ >= 0.0)) throw InputError("budget limit must be >= 0");
}

QuerySession QuerySession::noiseless(const StatisticEnsemble& ensemble, std::uint64_t seed,
                                     std::uint64_t replication) {
  QuerySession s(ensemble, seed, replication);
  s.noiseless_ = true;
  return s;
}

double QuerySession::next_cost() const {
  if (noiseless_) return kInf;
  const double w = schedule_.omega(history_.size() + 1);
  return sigma_ * sigma_ / (2.0 * w * w);
}

double QuerySession::answer_query(std::size_t i) {
  if (i >= means_.size())
    throw ProtocolError("query for statistic " + std::to_string(i) + " outside [0, " +
                        std::to_string(means_.size()) + ")");
  const std::size_t step = history_.size() + 1;
  double y = phi_[i];
  if (noiseless_) {
    spent_ = kInf;
  } else {
    if (!schedule_.covers(step)) throw ProtocolError("noise schedule exhausted");
    const double cost = next_cost();
    if (limit_ && spent_ + cost > *limit_ * (1.0 + 1e-12)) throw BudgetExhausted(spent_, *limit_);
    y += schedule_.omega(step) / std::sqrt(n_) * noise_.normal();
    spent_ += cost;
  }
  history_.push_back({step, i, y, spent_});
  return y;
}

AnalystScript AnalystScript::fixed(std::vector<std::size_t> sequence, std::size_t final_index) {
  AnalystScript s;
  s.kind = Kind::fixed_sequence;
  s.sequence = std::move(sequence);
  s.final_index = final_index;
  return s;
}

AnalystScript AnalystScript::greedy() { return {}; }

AnalystScript AnalystScript::linear_reconstructor(std::size_t k_dims) {
  if (k_dims < 1) throw InputError("k_dims must be >= 1");
  AnalystScript s;
  s.kind = Kind::linear_reconstructor;
  s.k_dims = k_dims;
  return s;
}

std::string to_string(AnalystScript::Kind kind) {
  switch (kind) {
    case AnalystScript::Kind::fixed_sequence: return "fixed_sequence";
    case AnalystScript::Kind::greedy_max_response: return "greedy_max_response";
    case AnalystScript::Kind::linear_reconstructor: return "linear_reconstructor";
  }
  return "unknown";
}

AnalystScript::Kind analyst_kind_from_string(const std::string& name) {
  for (auto k : {AnalystScript::Kind::fixed_sequence, AnalystScript::Kind::greedy_max_response,
                 AnalystScript::Kind::linear_reconstructor})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown analyst script '" + name + "'");
}

std::string AnalystScript::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  if (kind == Kind::linear_reconstructor) os << "(k_dims=" << k_dims << ")";
  if (kind == Kind::fixed_sequence) os << "(final=" << final_index << ")";
  return os.str();
}

std::size_t AnalystScript::next_query(const std::vector<QueryRecord>& history, std::size_t m,
                                      std::size_t step) const {
  switch (kind) {
    case Kind::fixed_sequence:
      if (sequence.empty()) return (step - 1) % m;
      return sequence[(step - 1) % sequence.size()];
    case Kind::greedy_max_response:
      // Fresh candidates first; once all are seen, re-ask the current leader.
      if (step <= m) return step - 1;
      return best_mean(history, false);
    case Kind::linear_reconstructor:
      return (step - 1) % std::min(k_dims, m);
  }
  return 0;
}

std::size_t AnalystScript::final_pick(const std::vector<QueryRecord>& history,
                                      std::size_t /*m*/) const {
  switch (kind) {
    case Kind::fixed_sequence: return final_index;
    case Kind::greedy_max_response: return best_mean(history, false);
    case Kind::linear_reconstructor: return best_mean(history, true);
  }
  return 0;
}

static AnalystResult run_analyst_impl(const AnalystScript& script, QuerySession& session, std::size_t k,
                                      bool track_interim) {
  if (!session.is_noiseless() && !session.schedule().covers(k + 1))
    throw InputError("noise schedule must cover k+1 queries");
  const std::size_t m = session.m();
  AnalystResult out;
  for (std::size_t j = 1; j <= k; ++j) {
    session.answer_query(script.next_query(session.history(), m, j));
    if (track_interim) out.interim_picks.push_back(script.final_pick(session.history(), m));
  }
  const std::size_t t = script.final_pick(session.history(), m);
  if (t >= m) throw ProtocolError("final selection outside the statistic range");
  out.final_selection = t;
  out.response = session.answer_query(t);
  out.error = out.response - session.true_mean(t);
  out.budget_spent = session.budget_spent();
  return out;
}

AnalystResult run_analyst(const AnalystScript& script, QuerySession& session, std::size_t k) {
  return run_analyst_impl(script, session, k, false);
}

SessionSummary run_sessions(const AnalystScript& script, const SessionConfig& config,
                            bool keep_interim) {
  if (config.R < 1) throw InputError("need at least one session");
  if (!config.means.empty() && config.means.size() != config.m)
    throw InputError("means must have length m");
  const StatisticEnsemble ensemble = session_ensemble(config);
  ensemble.validate();
  const std::size_t R = config.R;
  std::vector<double> err(R);
  SessionSummary s;
  s.final_selections.assign(R, 0);
  if (keep_interim) s.interim_picks.assign(config.k, std::vector<std::size_t>(R, 0));

  const auto n = static_cast<std::int64_t>(R);
#pragma omp parallel for schedule(static)
  for (std::int64_t rr = 0; rr < n; ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    QuerySession session =
        config.noiseless ? QuerySession::noiseless(ensemble, config.seed, r)
                         : QuerySession(ensemble, config.schedule, config.seed, r);
    const AnalystResult a = run_analyst_impl(script, session, config.k, keep_interim);
    err[r] = a.error;
    s.final_selections[r] = a.final_selection;
    if (keep_interim)
      for (std::size_t j = 0; j < config.k; ++j) s.interim_picks[j][r] = a.interim_picks[j];
  }

  std::vector<double> abs_err(R);
  for (std::size_t r = 0; r < R; ++r) abs_err[r] = std::abs(err[r]);
  const MeanSe e = mean_and_se(err);
  const MeanSe a = mean_and_se(abs_err);
  s.mean_error = e.mean;
  s.error_se = e.se;
  s.mean_abs_error = a.mean;
  s.abs_error_se = a.se;
  s.budget = config.noiseless ? kInf : schedule_budget(config.sigma, config.schedule, config.k + 1);
  return s;
}

std::vector<ErrorVsK> error_vs_k(const AnalystScript& script, SessionConfig config,
                                 const std::vector<std::size_t>& ks) {
  std::vector<ErrorVsK> rows;
  for (std::size_t k : ks) {
    config.k = k;
    const SessionSummary s = run_sessions(script, config);
    ErrorVsK row;
    row.k = k;
    row.mean_abs_error = s.mean_abs_error;
    row.se = s.abs_error_se;
    row.bound = config.noiseless ? std::numeric_limits<double>::quiet_NaN()
                                 : multistep_error_bound(config.sigma, config.n, k, config.schedule);
    rows.push_back(row);
  }
  return rows;
}

double fitted_exponent(const std::vector<ErrorVsK>& rows) {
  if (rows.size() < 2) throw InputError("exponent fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : rows) {
    const double x = std::log(static_cast<double>(r.k));
    const double y = std::log(r.mean_abs_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(rows.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ReconstructionResult linear_reconstruction_demo(std::size_t k_dims, double n, double sigma,
                                                bool with_noise, std::size_t R,
                                                std::uint64_t seed) {
  if (k_dims < 1 || !(n >= 1.0)) throw InputError("need k_dims >= 1 and n >= 1");
  if (!(sigma > 0.0)) throw InputError("sigma must be > 0");
  if (R < 2) throw InputError("need at least two replications");
  const double sd = sigma / std::sqrt(n);
  const NoiseSchedule schedule = NoiseSchedule::fourth_root(sigma);
  std::vector<double> ip(R);

  const auto total = static_cast<std::int64_t>(R);
#pragma omp parallel for schedule(static)
  for (std::int64_t rr = 0; rr < total; ++rr) {
    const auto r = static_cast<std::size_t>(rr);
    CounterRng theta_rng(seed, r, Stream::noise);
    CounterRng query_rng(seed, r, Stream::query_noise);
    std::vector<double> theta(k_dims), y(k_dims);
    double norm2 = 0.0;
    for (std::size_t j = 0; j < k_dims; ++j) {
      theta[j] = sd * theta_rng.normal();
      y[j] = theta[j];
      if (with_noise) y[j] += schedule.omega(j + 1) / std::sqrt(n) * query_rng.normal();
      norm2 += y[j] * y[j];
    }
    const double norm = std::sqrt(norm2);
    double dot = 0.0;
    for (std::size_t j = 0; j < k_dims; ++j) dot += y[j] / norm * theta[j];
    ip[r] = dot;
  }
  const MeanSe ms = mean_and_se(ip);
  ReconstructionResult out;
  out.inner_product = ms.mean;
  out.se = ms.se;
  const double kd = static_cast<double>(k_dims);
  out.oracle = sd * std::sqrt(2.0) * std::exp(std::lgamma((kd + 1.0) / 2.0) - std::lgamma(kd / 2.0));
  return out;
}

CompositionAudit composition_audit(const AnalystScript& script, const SessionConfig& config) {
  if (config.noiseless) throw InputError("composition audit needs a noise schedule");
  const SessionSummary s = run_sessions(script, config, true);
  CompositionAudit audit;
  audit.undersampled = config.R < 10000;
  audit.slack_se = audit.undersampled ? 5.0 : 3.0;
  for (std::size_t j = 1; j <= config.k; ++j) {
    const auto& picks = s.interim_picks[j - 1];
    std::vector<std::uint64_t> labels(picks.begin(), picks.end());
    const LabelEntropy h = label_entropy(labels);
    AuditStep step;
    step.step = j;
    step.budget = schedule_budget(config.sigma, config.schedule, j);
    step.I_hat = h.H;
    step.se = h.se;
    step.within = step.I_hat <= step.budget + audit.slack_se * step.se;
    audit.steps.push_back(step);
  }
  return audit;
}

}  // namespace infousage
