#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "infousage/bounds.hpp"
#include "infousage/ensemble.hpp"

namespace infousage {

struct QueryRecord {
  std::size_t step = 0;  // 1-based
  std::size_t index = 0;
  double response = 0.0;
  double budget_after = 0.0;
};

/// One analyst interaction with a noisy query server.
///
/// phi ~ N(mu, sigma^2/n) is drawn once at construction; query j returns
/// phi_i + W_j with W_j ~ N(0, omega_j^2/n) drawn fresh per query. The analyst
/// only ever sees history().
class QuerySession {
 public:
  /// `ensemble` must be gaussian_iid with a single sigma; n defaults to 1.
  QuerySession(const StatisticEnsemble& ensemble, NoiseSchedule schedule, std::uint64_t seed,
               std::uint64_t replication, std::optional<double> budget_limit = std::nullopt);

  /// Exact answers; budget_spent becomes +inf after the first query.
  static QuerySession noiseless(const StatisticEnsemble& ensemble, std::uint64_t seed,
                                std::uint64_t replication);

  double answer_query(std::size_t i);

  std::size_t m() const { return means_.size(); }
  double sigma() const { return sigma_; }
  double n() const { return n_; }
  bool is_noiseless() const { return noiseless_; }
  const std::vector<QueryRecord>& history() const { return history_; }
  double budget_spent() const { return spent_; }
  std::optional<double> budget_limit() const { return limit_; }
  const NoiseSchedule& schedule() const { return schedule_; }
  /// Budget increment of the next query.
  double next_cost() const;

  /// Ground truth for scoring, never consulted by scripts.
  double true_mean(std::size_t i) const { return means_.at(i); }

 private:
  QuerySession(const StatisticEnsemble& ensemble, std::uint64_t seed, std::uint64_t replication);

  std::vector<double> means_;
  std::vector<double> phi_;
  double sigma_ = 1.0;
  double n_ = 1.0;
  NoiseSchedule schedule_;
  bool noiseless_ = false;
  std::optional<double> limit_;
  double spent_ = 0.0;
  std::vector<QueryRecord> history_;
  CounterRng noise_;
};

struct AnalystScript {
  enum class Kind { fixed_sequence, greedy_max_response, linear_reconstructor };
  Kind kind = Kind::greedy_max_response;
  std::vector<std::size_t> sequence;  // fixed_sequence: queried cyclically
  std::size_t final_index = 0;        // fixed_sequence: the final pick
  std::size_t k_dims = 1;             // linear_reconstructor

  static AnalystScript fixed(std::vector<std::size_t> sequence, std::size_t final_index = 0);
  static AnalystScript greedy();
  static AnalystScript linear_reconstructor(std::size_t k_dims);

  bool adaptive() const { return kind != Kind::fixed_sequence; }
  std::string describe() const;

  /// Query number `step` (1-based) given the visible history.
  std::size_t next_query(const std::vector<QueryRecord>& history, std::size_t m,
                         std::size_t step) const;
  /// The final selection T_{k+1} given the visible history.
  std::size_t final_pick(const std::vector<QueryRecord>& history, std::size_t m) const;
};

std::string to_string(AnalystScript::Kind kind);
AnalystScript::Kind analyst_kind_from_string(const std::string& name);

struct AnalystResult {
  std::size_t final_selection = 0;
  double response = 0.0;
  double error = 0.0;  // Y_{T_{k+1}} - mu_{T_{k+1}}
  double budget_spent = 0.0;
  std::vector<std::size_t> interim_picks;  // final_pick after each of the k queries
};

/// k scripted queries, then the final selection, answered as query k+1.
AnalystResult run_analyst(const AnalystScript& script, QuerySession& session, std::size_t k);

struct SessionConfig {
  std::size_t m = 4096;
  double sigma = 1.0;
  double n = 1.0;
  std::vector<double> means;  // empty: all zero
  bool noiseless = false;
  NoiseSchedule schedule = NoiseSchedule::fourth_root(1.0);
  std::size_t k = 16;
  std::size_t R = 2000;
  std::uint64_t seed = 0;
};

struct SessionSummary {
  double mean_abs_error = 0.0;
  double abs_error_se = 0.0;
  double mean_error = 0.0;
  double error_se = 0.0;
  double budget = 0.0;
  std::vector<std::size_t> final_selections;
  std::vector<std::vector<std::size_t>> interim_picks;  // [step][replication]
};

/// R independent sessions (one per worker, seeded by replication index).
SessionSummary run_sessions(const AnalystScript& script, const SessionConfig& config,
                            bool keep_interim = false);

struct ErrorVsK {
  std::size_t k = 0;
  double mean_abs_error = 0.0;
  double se = 0.0;
  double bound = 0.0;
};

std::vector<ErrorVsK> error_vs_k(const AnalystScript& script, SessionConfig config,
                                 const std::vector<std::size_t>& ks);

/// Least-squares slope of ln(error) on ln(k).
double fitted_exponent(const std::vector<ErrorVsK>& rows);

struct ReconstructionResult {
  double inner_product = 0.0;
  double se = 0.0;
  double oracle = 0.0;  // chi mean sigma sqrt(2/n) Gamma((k+1)/2) / Gamma(k/2)
};

/// theta ~ N(0, sigma^2/n I_k); the analyst queries every coordinate and
/// reports x = Y/|Y|. Returns the mean of x^T theta.
ReconstructionResult linear_reconstruction_demo(std::size_t k_dims, double n, double sigma,
                                                bool with_noise, std::size_t R,
                                                std::uint64_t seed);

struct AuditStep {
  std::size_t step = 0;
  double budget = 0.0;
  double I_hat = 0.0;  // plug-in H(T_{step+1}), an upper estimate of I(T_{step+1}; phi)
  double se = 0.0;
  bool within = false;
};

struct CompositionAudit {
  std::vector<AuditStep> steps;
  bool undersampled = false;
  double slack_se = 3.0;
};

/// Needs R >= 10^4 for the standard 3-SE slack; below that the slack widens
/// to 5 SE and `undersampled` is set.
CompositionAudit composition_audit(const AnalystScript& script, const SessionConfig& config);

}  // namespace infousage
