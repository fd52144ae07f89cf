#include "infousage/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "infousage/classify.hpp"
#include "infousage/ensemble.hpp"
#include "infousage/infotheory.hpp"
#include "infousage/lars.hpp"
#include "infousage/multistep.hpp"
#include "infousage/selection.hpp"

namespace infousage {

namespace {

using json = nlohmann::ordered_json;

class Params {
 public:
  explicit Params(json j) : j_(std::move(j)) {}

  double num(const std::string& k) const { return j_.at(k).get<double>(); }
  std::size_t count(const std::string& k, std::size_t min = 0) const {
    const auto v = j_.at(k).get<std::int64_t>();
    if (v < static_cast<std::int64_t>(min))
      throw ParameterError(k, "must be >= " + std::to_string(min));
    return static_cast<std::size_t>(v);
  }
  bool flag(const std::string& k) const { return j_.at(k).get<bool>(); }
  std::string str(const std::string& k) const { return j_.at(k).get<std::string>(); }
  std::vector<double> nums(const std::string& k) const {
    auto v = j_.at(k).get<std::vector<double>>();
    if (v.empty()) throw ParameterError(k, "must be a non-empty list");
    return v;
  }
  std::vector<std::size_t> counts(const std::string& k) const {
    std::vector<std::size_t> out;
    for (const auto& e : j_.at(k)) {
      if (!e.is_number_integer() || e.get<std::int64_t>() < 1)
        throw ParameterError(k, "entries must be positive integers");
      out.push_back(static_cast<std::size_t>(e.get<std::int64_t>()));
    }
    if (out.empty()) throw ParameterError(k, "must be a non-empty list");
    return out;
  }
  double positive(const std::string& k) const {
    const double v = num(k);
    if (!(v > 0.0)) throw ParameterError(k, "must be > 0");
    return v;
  }

 private:
  json j_;
};

struct Context {
  std::uint64_t seed;
  std::size_t R;
  Params p;
};

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

// Per-replication phi_T - mu_T (sentinel mapped to the fallback statistic).
std::vector<double> selection_errors(const ReplicationBatch& b, const StatisticEnsemble& e) {
  std::vector<double> err(b.R);
  for (std::size_t r = 0; r < b.R; ++r) err[r] = b.selected_value[r] - e.means[b.statistic_of(r)];
  return err;
}

MeanSe mean_se_of(const std::vector<double>& xs, double (*f)(double)) {
  std::vector<double> v(xs.size());
  std::transform(xs.begin(), xs.end(), v.begin(), f);
  return mean_and_se(v);
}

double absf(double x) { return std::abs(x); }
double sqf(double x) { return x * x; }

Series series_of(const Table& t, const std::string& name, const std::string& x,
                 const std::string& y, std::size_t from = 0, std::size_t to = SIZE_MAX) {
  Series s;
  s.name = name;
  for (std::size_t r = from; r < std::min(to, t.rows.size()); ++r) {
    s.xs.push_back(t.number(r, x));
    s.ys.push_back(t.number(r, y));
  }
  return s;
}

// ---------------------------------------------------------------- figure1

ExperimentOutput figure1(const Context& c) {
  const std::size_t m = c.p.count("m", 1);
  const double sigma = c.p.positive("sigma");
  const auto mus = linspace(c.p.num("mu_min"), c.p.num("mu_max"), c.p.count("points", 1));
  ExperimentOutput out;
  out.table.columns = {"mu", "bias", "bias_se", "H_T", "bound"};
  for (std::size_t k = 0; k < mus.size(); ++k) {
    const auto ens = StatisticEnsemble::single_signal(m, 0, mus[k], sigma);
    const auto batch =
        sample_batch(ens, SelectionRule::argmax(), c.R, mix64(c.seed, k), {.store_phi = false});
    const BiasSummary b = empirical_bias(batch, ens);
    const InfoEstimate info = estimate_information_usage(batch);
    const double bound = bias_bound(sigma, info.I);
    out.table.add_row({mus[k], b.bias, b.std_error, info.H_T, bound});
    out.checks.push_back(check_upper("bias_le_bound@mu=" + format_number(mus[k]), bound, b.bias,
                                     3.0 * b.std_error));
  }
  LineChart ch{"Rank selection with one signal", "signal mu", "nats / bias", {}};
  ch.series.push_back(series_of(out.table, "bias", "mu", "bias"));
  ch.series.push_back(series_of(out.table, "sqrt(2 I)", "mu", "bound"));
  ch.series.push_back(series_of(out.table, "H(T)", "mu", "H_T"));
  out.chart = ch;
  return out;
}

// ---------------------------------------------------------------- figure2

ExperimentOutput figure2(const Context& c) {
  LarsExperimentConfig cfg;
  cfg.n_rows = c.p.count("n_rows", 2);
  cfg.n_features = c.p.count("n_features", 1);
  cfg.n_signals = c.p.count("n_signals", 0);
  cfg.noise_variance = c.p.num("noise_variance");
  cfg.n_steps = c.p.count("n_steps", 1);
  cfg.replications = c.R;
  cfg.seed = c.seed;
  const auto strengths = c.p.nums("signal_strengths");

  ExperimentOutput out;
  out.table.columns = {"s", "step", "I_hat", "bound", "bias", "bias_se", "step_bias", "step_bias_se"};
  LineChart ch{"LARS: running bias and information bound", "step", "coefficient bias", {}};
  std::int64_t deficient = 0;
  for (double s : strengths) {
    cfg.signal_strength = s;
    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      throw ParameterError("signal_strengths", e.what());
    }
    const LarsCurve curve = lars_information_curve(cfg);
    deficient += static_cast<std::int64_t>(curve.rank_deficient_paths);
    const std::size_t first = out.table.rows.size();
    for (const auto& r : curve.rows) {
      out.table.add_row({s, static_cast<std::int64_t>(r.step), r.I_hat, r.bound, r.mean_bias,
                         r.bias_se, r.step_bias, r.step_bias_se});
      out.checks.push_back(check_upper(
          "bias_le_bound@s=" + format_number(s) + ",step=" + std::to_string(r.step), r.bound,
          r.mean_bias, 3.0 * r.bias_se));
    }
    ch.series.push_back(series_of(out.table, "bias s=" + format_number(s), "step", "bias", first));
    ch.series.push_back(series_of(out.table, "bound s=" + format_number(s), "step", "bound", first));
  }
  out.summary["rank_deficient_paths"] = deficient;
  out.chart = ch;
  return out;
}

// ---------------------------------------------------------------- figure3

struct TopKStats {
  double bias = 0.0;
  double acc = 0.0;
};

TopKStats topk_stats(std::span<const double> phi, const std::vector<std::size_t>& idx,
                     std::size_t n_signal, double mu) {
  TopKStats s;
  for (std::size_t i : idx) {
    const bool signal = i < n_signal;
    s.bias += phi[i] - (signal ? mu : 0.0);
    s.acc += signal ? 1.0 : 0.0;
  }
  s.bias /= static_cast<double>(idx.size());
  s.acc /= static_cast<double>(idx.size());
  return s;
}

ExperimentOutput figure3(const Context& c) {
  const std::size_t n1 = c.p.count("n_signal", 1);
  const std::size_t n0 = c.p.count("n_null", 0);
  const double beta = c.p.num("beta");
  if (!(beta >= 0.0)) throw ParameterError("beta", "must be >= 0");
  const std::size_t K = c.p.count("K", 1);
  const std::size_t m = n1 + n0;
  if (K > m) throw ParameterError("K", "exceeds the number of statistics");
  const auto mus = c.p.nums("mus");

  ExperimentOutput out;
  out.table.columns = {"mu",          "argmax_bias", "argmax_bias_se", "gibbs_bias",
                       "gibbs_bias_se", "argmax_acc", "gibbs_acc"};
  for (std::size_t k = 0; k < mus.size(); ++k) {
    const double mu = mus[k];
    const std::uint64_t seed = mix64(c.seed, k);
    std::vector<double> ab(c.R), gb(c.R), aa(c.R), ga(c.R);
    const auto total = static_cast<std::int64_t>(c.R);
#pragma omp parallel
    {
      std::vector<double> phi(m);
#pragma omp for schedule(static)
      for (std::int64_t rr = 0; rr < total; ++rr) {
        const auto r = static_cast<std::size_t>(rr);
        CounterRng noise(seed, r, Stream::noise);
        for (std::size_t i = 0; i < m; ++i) phi[i] = (i < n1 ? mu : 0.0) + noise.normal();
        const TopKStats a = topk_stats(phi, top_indices(phi, K), n1, mu);
        CounterRng pick(seed, r, Stream::selection);
        const TopKStats g = topk_stats(phi, gibbs_select(phi, beta, K, pick), n1, mu);
        ab[r] = a.bias;
        aa[r] = a.acc;
        gb[r] = g.bias;
        ga[r] = g.acc;
      }
    }
    const MeanSe a = mean_and_se(ab), g = mean_and_se(gb);
    const double acc_a = mean_and_se(aa).mean, acc_g = mean_and_se(ga).mean;
    out.table.add_row({mu, a.mean, a.se, g.mean, g.se, acc_a, acc_g});
    out.checks.push_back(check_upper("gibbs_below_argmax@mu=" + format_number(mu), a.mean,
                                     std::abs(g.mean), 3.0 * std::hypot(a.se, g.se)));
  }
  out.summary["replications_per_mu"] = static_cast<std::int64_t>(c.R);
  LineChart ch{"Gibbs versus top-K selection", "signal mu", "bias / accuracy", {}};
  ch.series.push_back(series_of(out.table, "top-K bias", "mu", "argmax_bias"));
  ch.series.push_back(series_of(out.table, "Gibbs bias", "mu", "gibbs_bias"));
  ch.series.push_back(series_of(out.table, "top-K accuracy", "mu", "argmax_acc"));
  ch.series.push_back(series_of(out.table, "Gibbs accuracy", "mu", "gibbs_acc"));
  out.chart = ch;
  return out;
}

// ---------------------------------------------------------------- bounds-table

void add_checks(std::vector<BoundReport>& all, const std::string& scenario,
                std::vector<BoundReport> rs) {
  for (auto& r : rs) {
    r.name = scenario + ":" + r.name;
    all.push_back(std::move(r));
  }
}

ExperimentOutput bounds_table(const Context& c) {
  const std::size_t R = c.R;
  std::vector<BoundReport> all;
  std::uint64_t tag = 0;
  auto seed = [&] { return mix64(c.seed, tag++); };

  {  // null argmax
    const auto ens = StatisticEnsemble::gaussian(std::vector<double>(1000, 0.0));
    const auto b = sample_batch(ens, SelectionRule::argmax(), R, seed(), {.store_phi = false});
    const auto err = selection_errors(b, ens);
    const MeanSe bias = mean_and_se(err), ab = mean_se_of(err, absf), sq = mean_se_of(err, sqf);
    const auto info = estimate_information_usage(b);
    add_checks(all, "null_argmax_m1000",
               {check_upper("bias_bound", bias_bound(1.0, info.I), bias.mean, 3 * bias.se),
                check_upper("abs_error_bound", abs_error_bound(1.0, info.I), ab.mean, 3 * ab.se),
                check_upper("sq_error_bound", sq_error_bound(1.0, info.I), sq.mean, 3 * sq.se),
                check_upper("sq_error_upper_H", sq_error_upper_bound_prop3(info.H_T), sq.mean, 3 * sq.se),
                check_lower("sq_error_lower_H", sq_error_lower_bound(info.H_T), sq.mean, 3 * sq.se)});
  }
  {  // uniform pick among the top 10
    const auto ens = StatisticEnsemble::gaussian(std::vector<double>(1000, 0.0));
    const auto b = sample_batch(ens, SelectionRule::top_k_uniform(10), R, seed(), {.store_phi = false});
    const auto bs = empirical_bias(b, ens);
    const auto info = estimate_information_usage(b);
    add_checks(all, "top10_uniform_m1000",
               {check_upper("topk_bound", topk_bound(1.0, 1000, 10), bs.bias, 3 * bs.std_error),
                check_upper("bias_bound", bias_bound(1.0, info.I), bs.bias, 3 * bs.std_error)});
  }
  {  // grouped max attains the top-m0 bound up to a constant
    const auto ens = StatisticEnsemble::gaussian(std::vector<double>(4096, 0.0));
    const auto b = sample_batch(ens, SelectionRule::grouped_max(16), R, seed(), {.store_phi = false});
    const auto bs = empirical_bias(b, ens);
    const double tb = topk_bound(1.0, 4096, 16);
    add_checks(all, "grouped_max_m4096_m0_16",
               {check_upper("topk_bound", tb, bs.bias, 3 * bs.std_error),
                check_lower("0.8_topk_bound", 0.8 * tb, bs.bias, 3 * bs.std_error)});
  }
  {  // unequal variances
    std::vector<double> sig(100);
    for (std::size_t i = 0; i < sig.size(); ++i) sig[i] = i % 2 ? 3.0 : 1.0;
    const auto ens = StatisticEnsemble::gaussian_hetero(std::vector<double>(100, 0.0), sig);
    const auto b = sample_batch(ens, SelectionRule::argmax(), R, seed(), {.store_phi = false});
    const auto bs = empirical_bias(b, ens);
    const auto info = estimate_information_usage(b);
    const auto pmf = selection_pmf(b);
    add_checks(all, "hetero_argmax_m100",
               {check_upper("bias_bound_hetero", bias_bound_hetero(sig, pmf, info.I), bs.bias,
                            3 * bs.std_error)});
  }
  {  // shifted exponentials: Exp(1) - 1 is sub-exponential with (sqrt 2, 2)
    const auto ens = StatisticEnsemble::shifted_exponential(std::vector<double>(100, 0.0));
    const auto b = sample_batch(ens, SelectionRule::argmax(), R, seed(), {.store_phi = false});
    const auto bs = empirical_bias(b, ens);
    const auto info = estimate_information_usage(b);
    add_checks(all, "subexp_argmax_m100",
               {check_upper("bias_bound_subexp", bias_bound_subexp(std::sqrt(2.0), 2.0, info.I),
                            bs.bias, 3 * bs.std_error)});
  }
  {  // threshold rule, Gaussian
    const std::size_t m = 50;
    const double M = 3.5;
    const auto ens = StatisticEnsemble::gaussian(std::vector<double>(m, 0.0));
    const auto b = sample_batch(ens, SelectionRule::threshold_rule(M, 0), R, seed(), {.store_phi = false});
    const auto err = selection_errors(b, ens);
    const MeanSe sq = mean_se_of(err, sqf);
    const auto info = estimate_information_usage(b);
    const double tail = 0.5 * std::erfc(M / std::numbers::sqrt2);
    const double n_hat = static_cast<double>(m - 2) * tail;
    auto r = check_lower("sq_error_ge_H", info.H_T, sq.mean, 3 * sq.se);
    if (!threshold_condition_gaussian(M, 0.0, n_hat)) r.name += "(condition unmet)";
    add_checks(all, "threshold_gaussian_m50_M3.5", {r});
  }
  {  // threshold rule, shifted exponential
    const std::size_t m = 50;
    const double M = 5.0;
    const auto ens = StatisticEnsemble::shifted_exponential(std::vector<double>(m, 0.0));
    const auto b = sample_batch(ens, SelectionRule::threshold_rule(M, 0), R, seed(), {.store_phi = false});
    const auto bs = empirical_bias(b, ens);
    const auto info = estimate_information_usage(b);
    const double n_hat = static_cast<double>(m - 2) * std::exp(-M);
    auto r = check_lower("bias_ge_H/2", info.H_T / 2.0, bs.bias, 3 * bs.std_error);
    if (!threshold_condition_exponential(M, 0.0, n_hat)) r.name += "(condition unmet)";
    add_checks(all, "threshold_exponential_m50_M5", {r});
  }
  {  // p-values
    const auto ens = StatisticEnsemble::uniform_pvalues(5);
    const auto b = sample_batch(ens, SelectionRule::argmin(), R, seed());
    const auto pv = pvalue_information(b, ens, 0.05);
    add_checks(all, "pvalue_argmin_m5",
               {check_upper("pvalue_bound", pvalue_bound(0.05, pv.I_TZ), pv.P_small, 3 * pv.P_small_se)});
  }
  {  // Bayes regret of acting on prior means
    std::vector<double> mu = linspace(0.0, 1.0, 10);
    const auto ens = StatisticEnsemble::gaussian(mu);
    const auto b = sample_batch(ens, SelectionRule::argmax(), R, seed(), {.store_phi = false});
    const MeanSe best = mean_and_se(b.selected_value);
    const double regret = best.mean - *std::max_element(mu.begin(), mu.end());
    const auto info = estimate_information_usage(b);
    add_checks(all, "regret_m10",
               {check_upper("regret_bound", regret_bound(1.0, info.H_T), regret, 3 * best.se)});
  }
  {  // classification
    std::vector<double> xs(16);
    for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
    const auto setup = ClassificationSetup::threshold(xs, std::vector<double>(16, 0.5));
    const auto a = overfitting_audit(setup, R, seed());
    add_checks(all, "classify_threshold_n16",
               {check_upper("overfit_bound", a.bound, a.gap, 3 * a.gap_se),
                check_upper("vc_overfit_bound", a.vc_bound, a.bound),
                check_upper("vc_info_bound", a.vc_cap, a.I_hat)});
  }
  {  // multistep with the fourth-root schedule
    SessionConfig sc;
    sc.m = 1000;
    sc.n = 1e4;
    sc.k = 100;
    sc.R = std::min<std::size_t>(R, 2000);
    sc.seed = seed();
    const auto s = run_sessions(AnalystScript::greedy(), sc);
    add_checks(all, "multistep_greedy_k100",
               {check_upper("multistep_error_bound", multistep_error_bound(1.0, sc.n, sc.k, sc.schedule),
                            s.mean_abs_error, 3 * s.abs_error_se)});
  }
  {  // variance filtering leaves the sample mean unbiased
    const auto ens = StatisticEnsemble::raw_gaussian(std::vector<double>(200, 0.0), 50);
    const auto b = sample_batch(ens, SelectionRule::variance_filter(),
                                std::min<std::size_t>(R, 10000), seed(), {.store_phi = false});
    const auto bs = empirical_bias(b, ens);
    add_checks(all, "variance_filter_m200_n50",
               {check_upper("zero_bias", 0.0, std::abs(bs.bias), 3 * bs.std_error)});
  }
  {  // KL form of the information chain
    const auto ens = StatisticEnsemble::gaussian({0.0, 0.0});
    const auto b = sample_batch(ens, SelectionRule::argmax(), R, seed());
    const auto kl = kl_selection_decomposition(b, ens);
    const auto info = estimate_information_usage(b);
    add_checks(all, "kl_argmax_m2",
               {check_upper("weighted_kl_le_I", info.I, kl.weighted_kl, 0.05),
                check_upper("delta_sq_le_2I", 2.0 * info.I, kl.weighted_delta_sq, 0.05)});
  }

  ExperimentOutput out;
  out.table = checks_table(all);
  out.checks = all;
  return out;
}

// ---------------------------------------------------------------- multistep

ExperimentOutput multistep(const Context& c) {
  SessionConfig sc;
  sc.m = c.p.count("m", 1);
  sc.n = c.p.positive("n");
  sc.sigma = c.p.positive("sigma");
  sc.schedule = NoiseSchedule::fourth_root(sc.sigma);
  sc.R = c.R;
  sc.seed = c.seed;
  const auto ks = c.p.counts("ks");
  AnalystScript script;
  try {
    script.kind = analyst_kind_from_string(c.p.str("script"));
  } catch (const ConfigError& e) {
    throw ParameterError("script", e.what());
  }
  if (script.kind == AnalystScript::Kind::linear_reconstructor) script.k_dims = sc.m;

  ExperimentOutput out;
  out.table.columns = {"k", "noise", "mean_abs_error", "se", "bound"};
  LineChart ch{"Final-report error against query count", "k (queries)", "E|Y_T - mu_T|", {}};
  for (bool noiseless : {false, true}) {
    sc.noiseless = noiseless;
    const auto rows = error_vs_k(script, sc, ks);
    const std::size_t first = out.table.rows.size();
    for (const auto& r : rows) {
      out.table.add_row({static_cast<std::int64_t>(r.k), std::string(noiseless ? "none" : "fourth_root"),
                         r.mean_abs_error, r.se, r.bound});
      if (!noiseless)
        out.checks.push_back(check_upper("error_le_bound@k=" + std::to_string(r.k), r.bound,
                                         r.mean_abs_error, 3.0 * r.se));
    }
    if (rows.size() >= 2)
      out.summary[noiseless ? "exponent_noiseless" : "exponent_fourth_root"] = fitted_exponent(rows);
    ch.series.push_back(series_of(out.table, noiseless ? "no noise" : "fourth-root noise", "k",
                                  "mean_abs_error", first));
  }
  out.chart = ch;

  const std::size_t rk = c.p.count("recon_k", 1);
  const double rn = c.p.positive("recon_n");
  const auto plain = linear_reconstruction_demo(rk, rn, sc.sigma, false, c.R, mix64(c.seed, 7));
  const auto noisy = linear_reconstruction_demo(rk, rn, sc.sigma, true, c.R, mix64(c.seed, 7));
  out.summary["recon_inner_product_noiseless"] = plain.inner_product;
  out.summary["recon_inner_product_noisy"] = noisy.inner_product;
  out.summary["recon_chi_mean"] = plain.oracle;
  out.summary["recon_bound"] = multistep_error_bound(sc.sigma, rn, rk, sc.schedule);

  if (c.p.flag("transcript")) {
    sc.noiseless = false;
    StatisticEnsemble e;
    e.means.assign(sc.m, 0.0);
    e.sigmas = {sc.sigma};
    e.n = static_cast<std::size_t>(std::llround(sc.n));
    QuerySession session(e, sc.schedule, sc.seed, 0);
    run_analyst(script, session, ks.back());
    Table t;
    t.columns = {"step", "index", "response", "budget_after"};
    for (const auto& h : session.history())
      t.add_row({static_cast<std::int64_t>(h.step), static_cast<std::int64_t>(h.index), h.response,
                 h.budget_after});
    out.extra_tables.emplace_back("transcript", std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------- pvalue

ExperimentOutput pvalue(const Context& c) {
  const std::size_t m = c.p.count("m", 1);
  const double eps = c.p.num("epsilon");
  if (!(eps > 0.0 && eps < 0.5)) throw ParameterError("epsilon", "must lie in (0, 1/2)");
  const auto ens = StatisticEnsemble::uniform_pvalues(m);
  const auto b = sample_batch(ens, SelectionRule::argmin(), c.R, c.seed);
  const auto pv = pvalue_information(b, ens, eps);
  const double bound = pvalue_bound(eps, pv.I_TZ);
  ExperimentOutput out;
  out.table.columns = {"m",       "epsilon",          "P_small", "P_small_se",         "mean_selected",
                       "mean_selected_se", "I_TZ", "bound",    "pattern_lower_bound"};
  out.table.add_row({static_cast<std::int64_t>(m), eps, pv.P_small, pv.P_small_se, pv.mean_selected,
                     pv.mean_selected_se, pv.I_TZ, bound, pv.pattern_lower_bound});
  out.checks.push_back(check_upper("pvalue_bound", bound, pv.P_small, 3.0 * pv.P_small_se));
  out.summary["P_small_independent_theory"] = 1.0 - std::pow(1.0 - eps, static_cast<double>(m));
  out.summary["mean_selected_theory"] = 1.0 / static_cast<double>(m + 1);
  return out;
}

// ---------------------------------------------------------------- classify

ExperimentOutput classify(const Context& c) {
  const std::size_t n = c.p.count("n", 1);
  const double q = c.p.num("label_prob");
  if (!(q >= 0.0 && q <= 1.0)) throw ParameterError("label_prob", "must lie in [0, 1]");
  std::vector<double> xs(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = static_cast<double>(i);
  const auto setup = ClassificationSetup::threshold(xs, std::vector<double>(n, q));
  const auto a = overfitting_audit(setup, c.R, c.seed);
  ExperimentOutput out;
  out.table.columns = {"n", "gap", "gap_se", "I_hat", "H_pattern", "bound", "vc_cap", "vc_bound",
                       "joint_counted"};
  out.table.add_row({static_cast<std::int64_t>(n), a.gap, a.gap_se, a.I_hat, a.H_pattern, a.bound,
                     a.vc_cap, a.vc_bound, a.joint_counted});
  out.checks.push_back(check_upper("gap_le_bound", a.bound, a.gap, 3.0 * a.gap_se));
  out.checks.push_back(check_upper("bound_le_vc_bound", a.vc_bound, a.bound));
  return out;
}

// ---------------------------------------------------------------- maxinfo

ExperimentOutput maxinfo(const Context& c) {
  const std::size_t m = c.p.count("m", 2);
  const auto mus = c.p.nums("mus");
  const double level = c.p.num("approx_level");
  ExperimentOutput out;
  out.table.columns = {"mu", "I_plugin", "I_inf", "I_inf_single", "approx_max_info", "bias"};
  for (std::size_t k = 0; k < mus.size(); ++k) {
    const auto ens = StatisticEnsemble::single_signal(m, 0, mus[k]);
    const auto b = sample_batch(ens, SelectionRule::argmax(), c.R, mix64(c.seed, k), {.store_phi = false});
    const auto pmf = selection_pmf(b);
    const auto info = estimate_information_usage(b);
    const auto mi = max_information_rank(pmf, 0);
    const auto approx = approx_max_information_lower(pmf, level);
    out.table.add_row({mus[k], info.I, mi.I_inf, mi.single_signal.value_or(NAN),
                       approx.value_or(NAN), empirical_bias(b, ens).bias});
  }
  LineChart ch{"Mutual information against max-information", "signal mu", "nats", {}};
  ch.series.push_back(series_of(out.table, "I(T;phi)", "mu", "I_plugin"));
  ch.series.push_back(series_of(out.table, "max-information", "mu", "I_inf_single"));
  out.chart = ch;
  return out;
}

// ---------------------------------------------------------------- prop3-sandwich

ExperimentOutput prop3_sandwich(const Context& c) {
  const std::size_t trials = c.p.count("trials", 1);
  const std::size_t m_min = c.p.count("m_min", 1);
  const std::size_t m_max = c.p.count("m_max", 1);
  if (m_max < m_min) throw ParameterError("m_max", "must be >= m_min");
  const double range = c.p.num("mu_range");
  ExperimentOutput out;
  out.table.columns = {"trial", "m", "H_T", "mse", "mse_se", "lower", "upper", "satisfied"};
  std::size_t violations = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    CounterRng design(c.seed, t, Stream::design);
    const std::size_t m = m_min + design.below(m_max - m_min + 1);
    std::vector<double> mu(m);
    for (double& v : mu) v = -range + 2.0 * range * design.uniform();
    const auto ens = StatisticEnsemble::gaussian(mu);
    const auto b = sample_batch(ens, SelectionRule::argmax(), c.R, mix64(c.seed, t), {.store_phi = false});
    const MeanSe sq = mean_se_of(selection_errors(b, ens), sqf);
    const double H = estimate_information_usage(b).H_T;
    const double lo = sq_error_lower_bound(H), hi = sq_error_upper_bound_prop3(H);
    const bool ok = sq.mean >= lo - 3 * sq.se && sq.mean <= hi + 3 * sq.se;
    violations += ok ? 0 : 1;
    out.table.add_row({static_cast<std::int64_t>(t), static_cast<std::int64_t>(m), H, sq.mean, sq.se,
                       lo, hi, ok});
    out.checks.push_back(check_upper("upper@trial=" + std::to_string(t), hi, sq.mean, 3 * sq.se));
    out.checks.push_back(check_lower("lower@trial=" + std::to_string(t), lo, sq.mean, 3 * sq.se));
  }
  out.summary["violations"] = static_cast<std::int64_t>(violations);
  return out;
}

using Runner = ExperimentOutput (*)(const Context&);

Runner runner_for(const std::string& name) {
  if (name == "figure1") return figure1;
  if (name == "figure2") return figure2;
  if (name == "figure3") return figure3;
  if (name == "bounds-table") return bounds_table;
  if (name == "multistep") return multistep;
  if (name == "pvalue") return pvalue;
  if (name == "classify") return classify;
  if (name == "maxinfo") return maxinfo;
  if (name == "prop3-sandwich") return prop3_sandwich;
  throw ParameterError("experiment", "unknown experiment '" + name + "'");
}

bool same_kind(const json& a, const json& b) {
  if (a.is_number_integer()) return b.is_number_integer();
  if (a.is_number()) return b.is_number();
  if (a.is_array()) {
    if (!b.is_array()) return false;
    if (a.empty()) return true;
    for (const auto& e : b)
      if (!same_kind(a.front(), e)) return false;
    return true;
  }
  return a.type() == b.type();
}

}  // namespace

const std::vector<ExperimentSpec>& experiment_catalog() {
  static const std::vector<ExperimentSpec> catalog = {
      {"figure1",
       "argmax over m statistics with one signal: bias, H(T) and sqrt(2 I) against mu",
       1000,
       {{"m", 1000, "number of statistics"},
        {"sigma", 1.0, "noise standard deviation"},
        {"mu_min", 1.0, "smallest signal mean"},
        {"mu_max", 4.0, "largest signal mean"},
        {"points", 9, "grid points on [mu_min, mu_max]"}}},
      {"figure2",
       "LARS bias and information bound per step for three signal strengths",
       200,
       {{"signal_strengths", json::array({0.04, 0.06, 0.08}), "signal coefficient values"},
        {"n_rows", 100, "design rows"},
        {"n_features", 1000, "design columns"},
        {"n_signals", 20, "nonzero coefficients"},
        {"noise_variance", 0.1, "per-coordinate noise variance"},
        {"n_steps", 30, "path length"}}},
      {"figure3",
       "Gibbs (exponential-weights) versus top-K selection: bias and accuracy",
       200,
       {{"n_signal", 1000, "signal statistics with mean mu"},
        {"n_null", 100000, "null statistics with mean 0"},
        {"beta", 2.0, "inverse temperature"},
        {"K", 100, "indices drawn per replication"},
        {"mus", json::array({1.0, 2.0, 3.0, 4.0, 5.0}), "signal means"}}},
      {"bounds-table",
       "every closed-form bound against its empirical counterpart over a scenario grid",
       10000,
       {}},
      {"multistep",
       "noisy-query analyst: final-report error against k, with and without noise",
       2000,
       {{"m", 4096, "number of statistics"},
        {"n", 1000000.0, "sample size (statistic variance sigma^2/n)"},
        {"sigma", 1.0, "sub-Gaussian scale"},
        {"ks", json::array({16, 64, 256, 1024}), "query counts"},
        {"script", "greedy_max_response", "fixed_sequence | greedy_max_response | linear_reconstructor"},
        {"recon_k", 100, "dimension of the linear-reconstruction demo"},
        {"recon_n", 10000.0, "sample size of the linear-reconstruction demo"},
        {"transcript", false, "also write the query transcript of replication 0"}}},
      {"pvalue",
       "smallest of m uniform p-values: P(p_T < epsilon) against its information bound",
       10000,
       {{"m", 5, "number of p-values"}, {"epsilon", 0.05, "significance threshold"}}},
      {"classify",
       "ERM over 1-d thresholds: generalization gap against sqrt(I/(2n)) and the VC cap",
       10000,
       {{"n", 16, "training points"}, {"label_prob", 0.5, "P(Y = +1) at every point"}}},
      {"maxinfo",
       "rank selection: plug-in mutual information against max-information",
       50000,
       {{"m", 100, "number of statistics"},
        {"mus", json::array({0.0, 1.0, 2.0, 3.0}), "signal means"},
        {"approx_level", 0.001, "level beta of the approximate max-information bound"}}},
      {"prop3-sandwich",
       "H/8 - 2.5 <= E[(phi_T - mu_T)^2] <= 10 H + 1.5 over random mean vectors",
       50000,
       {{"trials", 100, "random mean vectors"},
        {"m_min", 2, "smallest m"},
        {"m_max", 64, "largest m"},
        {"mu_range", 3.0, "means drawn uniform on [-mu_range, mu_range]"}}},
  };
  return catalog;
}

const ExperimentSpec& find_experiment(const std::string& name) {
  for (const auto& s : experiment_catalog())
    if (s.name == name) return s;
  throw ParameterError("experiment", "unknown experiment '" + name + "'");
}

json resolve_params(const ExperimentSpec& spec, const RunConfig& config) {
  json out = json::object();
  for (const auto& p : spec.params) out[p.key] = p.default_value;
  if (!config.params.is_object()) throw ParameterError("params", "must be an object");
  for (const auto& [key, value] : config.params.items()) {
    if (!out.contains(key))
      throw ParameterError(key, "not a parameter of experiment '" + spec.name + "'");
    if (!same_kind(out[key], value))
      throw ParameterError(key, "expected " + std::string(out[key].type_name()) + ", got " +
                                    value.dump());
    out[key] = value;
  }
  return out;
}

bool ExperimentOutput::all_checks_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundReport& r) { return r.satisfied; });
}

Table checks_table(const std::vector<BoundReport>& checks) {
  Table t;
  t.columns = {"check", "kind", "bound", "empirical", "tolerance", "slack", "satisfied", "vacuous"};
  for (const auto& r : checks)
    t.add_row({r.name, std::string(r.lower ? "lower" : "upper"), r.value, r.empirical, r.tolerance,
               r.slack, r.satisfied, r.vacuous});
  return t;
}

ExperimentOutput run_experiment(const RunConfig& config) {
  const ExperimentSpec& spec = find_experiment(config.experiment);
  const json params = resolve_params(spec, config);
  const std::size_t R = config.reps.value_or(spec.default_reps);
  if (R < 2) throw ParameterError("reps", "must be >= 2");
  const Context ctx{config.seed, R, Params(params)};
  ExperimentOutput out = runner_for(spec.name)(ctx);
  out.name = spec.name;
  out.meta = json::object();
  out.meta["experiment"] = spec.name;
  out.meta["seed"] = config.seed;
  out.meta["replications"] = R;
  out.meta["params"] = params;
  return out;
}

}  // namespace infousage
