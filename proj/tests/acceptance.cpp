// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number
// of failed criteria (capped at 125).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "infousage/bounds.hpp"
#include "infousage/classify.hpp"
#include "infousage/ensemble.hpp"
#include "infousage/experiments.hpp"
#include "infousage/infotheory.hpp"
#include "infousage/lars.hpp"
#include "infousage/multistep.hpp"
#include "infousage/selection.hpp"
#include "lars_oracle.hpp"

using namespace infousage;
using json = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kSeed = 20240501;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

std::string num(double v) { return format_number(v); }

ExperimentOutput run_default(const std::string& name, json params = json::object()) {
  RunConfig c;
  c.experiment = name;
  c.seed = kSeed;
  c.params = std::move(params);
  return run_experiment(c);
}

std::vector<double> column(const Table& t, const std::string& name, std::size_t from = 0,
                           std::size_t to = SIZE_MAX) {
  std::vector<double> v;
  for (std::size_t r = from; r < std::min(to, t.rows.size()); ++r) v.push_back(t.number(r, name));
  return v;
}

void c1(Verdict& v, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto e = StatisticEnsemble::gaussian(std::vector<double>(1000, 0.0));
  const auto b = sample_batch(e, SelectionRule::argmax(), 20000, kSeed, {.store_phi = false});
  const auto s = empirical_bias(b, e);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double bound = bias_bound(1.0, std::log(1000.0));
  v.detail << "bias " << num(s.bias) << " (oracle 3.2414), bound " << num(bound) << ", ratio "
           << num(s.bias / bound);
  v.require(s.bias >= 3.18 && s.bias <= 3.30, "bias in [3.18, 3.30]");
  v.require(s.bias <= bound, "bias <= sqrt(2 ln 1000)");
  v.require(s.bias / bound >= 0.85, "ratio >= 0.85");
  v.require(seconds < 10.0, "runtime < 10 s");
}

void c2(Verdict& v, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto e = StatisticEnsemble::gaussian(std::vector<double>(4096, 0.0));
  const auto b = sample_batch(e, SelectionRule::grouped_max(16), 20000, kSeed, {.store_phi = false});
  const auto s = empirical_bias(b, e);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.detail << "E[phi_T] " << num(s.bias) << " in [2.664, 3.330]";
  v.require(s.bias <= 3.330, "<= sqrt(2 ln 256)");
  v.require(s.bias >= 2.664, ">= 0.8 sqrt(2 ln 256)");
  v.require(seconds < 10.0, "runtime < 10 s");
}

void c3(Verdict& v, double&) {
  const auto out = run_default("figure1");
  const auto& t = out.table;
  const auto H = column(t, "H_T"), bound = column(t, "bound"), bias = column(t, "bias"),
             se = column(t, "bias_se");
  for (std::size_t i = 1; i < H.size(); ++i) {
    v.require(H[i] <= H[i - 1] + 0.05, "H(T) non-increasing at point " + std::to_string(i));
    v.require(bound[i] <= bound[i - 1] + 0.05, "sqrt(2I) non-increasing at point " + std::to_string(i));
    v.require(bias[i] <= bias[i - 1] + 2 * std::hypot(se[i], se[i - 1]),
              "bias non-increasing at point " + std::to_string(i));
  }
  for (std::size_t i = 0; i < H.size(); ++i)
    v.require(bias[i] <= bound[i] + 3 * se[i], "bias <= bound + 3 SE at point " + std::to_string(i));
  v.detail << H.size() << " points; H " << num(H.front()) << " -> " << num(H.back()) << ", bias "
           << num(bias.front()) << " -> " << num(bias.back()) << ", bound " << num(bound.front()) << " -> "
           << num(bound.back());
}

void c4(Verdict& v, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto out = run_default("prop3-sandwich");
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto violations = out.summary["violations"].get<std::int64_t>();
  v.detail << out.table.rows.size() << " mean vectors, " << violations << " violations";
  v.require(out.table.rows.size() == 100, "100 trials");
  v.require(violations == 0, "no sandwich violation beyond 3 SE");
  v.require(seconds < 120.0, "runtime < 2 min");
}

void c5(Verdict& v, double&) {
  for (double snr : {0.25, 1.0, 4.0}) {
    CounterRng rng(kSeed, static_cast<std::uint64_t>(snr * 1000), Stream::noise);
    std::vector<double> x(100000), y(100000);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.normal();
      y[i] = x[i] + rng.normal() / std::sqrt(snr);
    }
    const double est = binned_mutual_information(x, y, 32), truth = 0.5 * std::log1p(snr);
    v.detail << " snr " << num(snr) << ": " << num(est) << " vs " << num(truth) << ";";
    v.require(std::abs(est - truth) <= 0.1 * truth, "within 10% at snr " + num(snr));
  }
}

void c6(Verdict& v, double&) {
  const auto out = run_default("multistep");
  const double expo = out.summary["exponent_fourth_root"].get<double>();
  const double recon = out.summary["recon_inner_product_noiseless"].get<double>();
  QuerySession s(StatisticEnsemble::gaussian(std::vector<double>(8, 0.0)), NoiseSchedule::fourth_root(1.0),
                 kSeed, 0);
  for (std::size_t i = 0; i < 4; ++i) s.answer_query(i);
  v.detail << "exponent " << num(expo) << ", E|theta_hat| " << num(recon) << " (oracle 0.0997503), budget(4) "
           << num(s.budget_spent());
  v.require(expo >= 0.15 && expo <= 0.35, "exponent in [0.15, 0.35]");
  v.require(std::abs(recon - 0.0997503164) <= 0.05 * 0.0997503164, "reconstruction within 5%");
  v.require(std::abs(s.budget_spent() - 1.3922285252) < 1e-9, "budget after 4 queries = 1.392");
}

void c7(Verdict& v, double&) {
  SessionConfig c;
  c.m = 10;
  c.k = 5;
  c.R = 20000;
  c.schedule = NoiseSchedule::constant(1.0, 6);
  c.seed = kSeed;
  const auto audit = composition_audit(AnalystScript::greedy(), c);
  const auto& last = audit.steps.back();
  v.detail << "I(T_6; phi) <= " << num(last.I_hat) << " +- " << num(last.se) << " vs budget " << num(last.budget);
  v.require(std::abs(last.budget - 2.5) < 1e-12, "budget 2.5");
  v.require(last.I_hat <= 2.5 + 3 * last.se, "estimate <= 2.5 + 3 SE");
}

void c8(Verdict& v, double&) {
  const auto e = StatisticEnsemble::raw_gaussian(std::vector<double>(200, 0.0), 50);
  const auto s = empirical_bias(sample_batch(e, SelectionRule::variance_filter(), 10000, kSeed,
                                             {.store_phi = false}),
                                e);
  v.detail << "bias " << num(s.bias) << ", SE " << num(s.std_error);
  v.require(std::abs(s.bias) <= 3 * s.std_error, "|bias| <= 3 SE");
}

void c9(Verdict& v, double&) {
  const auto out = run_default("figure3");
  const auto& t = out.table;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const double a = t.number(r, "argmax_bias"), g = t.number(r, "gibbs_bias");
    const double slack = 3 * std::hypot(t.number(r, "argmax_bias_se"), t.number(r, "gibbs_bias_se"));
    v.require(std::abs(g) < a + slack, "Gibbs |bias| < top-K bias at mu=" + num(t.number(r, "mu")));
    v.detail << " mu " << num(t.number(r, "mu")) << ": " << num(g) << " < " << num(a) << ";";
  }
  const std::size_t last = t.rows.size() - 1;
  v.detail << " acc@5 " << num(t.number(last, "argmax_acc")) << "/" << num(t.number(last, "gibbs_acc"));
  v.require(t.number(last, "mu") == 5.0, "grid ends at mu=5");
  v.require(t.number(last, "argmax_acc") >= 0.95 && t.number(last, "gibbs_acc") >= 0.95, "accuracies >= 0.95");
}

void c10(Verdict& v, double&) {
  const auto out = run_default("pvalue");
  const double P = out.table.number(0, "P_small"), mean = out.table.number(0, "mean_selected"),
               bound = out.table.number(0, "bound");
  v.detail << "P(p_T < 0.05) " << num(P) << ", E[p_T] " << num(mean) << ", bound " << num(bound);
  v.require(std::abs(P - 0.2262190625) <= 0.01, "P within 0.2262 +- 0.01");
  v.require(std::abs(mean - 1.0 / 6) <= 0.005, "E[p_T] within 1/6 +- 0.005");
  v.require(bound >= P, "bound dominates");
}

void c11(Verdict& v, double&) {
  std::vector<double> xs(16);
  for (std::size_t i = 0; i < 16; ++i) xs[i] = static_cast<double>(i);
  const auto a = overfitting_audit(ClassificationSetup::threshold(xs, std::vector<double>(16, 0.5)), 10000, kSeed);
  v.detail << "gap " << num(a.gap) << " <= " << num(a.bound) << " <= " << num(a.vc_bound) << ", vc_cap "
           << num(a.vc_cap);
  v.require(a.gap <= a.bound, "gap <= sqrt(I/(2n))");
  v.require(a.bound <= a.vc_bound, "sqrt(I/(2n)) <= sqrt(vc_cap/(2n))");
  v.require(std::abs(a.vc_cap - 3.7725887222) < 1e-9, "vc_cap = ln(16e)");
}

void c12(Verdict& v, double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  int matches = 0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto pr = oracle::random_problem(20 + s % 3 * 10, s % 2 ? 10 : 45, kSeed + s);
    matches += lars_path(pr.X, pr.y, 8).entry_order == oracle::lar_entry_order(pr.X, pr.y, 8);
  }
  v.require(matches == 50, "50/50 oracle path matches");

  const auto out = run_default("figure2");
  const auto& t = out.table;
  const std::size_t steps = 30;
  const std::vector<double> s_values{0.04, 0.06, 0.08};
  v.require(t.rows.size() == steps * s_values.size(), "30 steps per setting");
  for (std::size_t k = 0; k < s_values.size(); ++k) {
    const std::size_t from = k * steps;
    const auto bias = column(t, "bias", from, from + steps), se = column(t, "bias_se", from, from + steps),
               bound = column(t, "bound", from, from + steps);
    const std::string tag = " (s=" + num(s_values[k]) + ")";
    for (std::size_t i = 1; i < steps; ++i) {
      v.require(bias[i] <= bias[i - 1] + 2 * std::hypot(se[i], se[i - 1]),
                "running bias non-increasing at step " + std::to_string(i + 1) + tag);
      v.require(bound[i] <= bound[i - 1] * 1.01, "bound non-increasing at step " + std::to_string(i + 1) + tag);
    }
    v.require(bias.back() < bias.front() && bound.back() < bound.front(), "overall decrease" + tag);
    for (std::size_t i = 0; i < steps; ++i)
      v.require(bias[i] <= bound[i] + 3 * se[i], "bias <= bound + 3 SE at step " + std::to_string(i + 1) + tag);
    if (k > 0)
      for (std::size_t i = 0; i < steps; ++i)
        v.require(t.number(from + i, "bias") < t.number(from - steps + i, "bias"),
                  "bias decreasing in s at step " + std::to_string(i + 1) + tag);
    v.detail << " s " << num(s_values[k]) << ": bias " << num(bias.front()) << " -> " << num(bias.back())
             << ", bound " << num(bound.front()) << " -> " << num(bound.back()) << ";";
  }
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  v.detail << " oracle matches " << matches << "/50";
  v.require(seconds < 300.0, "runtime < 5 min");
}

void c13(Verdict& v, double&) {
  const auto out = run_default("maxinfo");
  const auto I = column(out.table, "I_plugin"), Iinf = column(out.table, "I_inf");
  for (std::size_t i = 1; i < I.size(); ++i) {
    v.require(I[i] < I[i - 1], "plug-in I strictly decreasing at mu index " + std::to_string(i));
    v.require(Iinf[i] > Iinf[i - 1], "I_inf strictly increasing at mu index " + std::to_string(i));
  }
  v.detail << "I:";
  for (double x : I) v.detail << " " << num(x);
  v.detail << "; I_inf:";
  for (double x : Iinf) v.detail << " " << num(x);
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&, double&)>>> criteria = {
      {"1 null max-selection bias (m=1000)", c1},
      {"2 grouped max attains the top-m0 bound", c2},
      {"3 figure1 trends", c3},
      {"4 entropy sandwich on MSE", c4},
      {"5 Gaussian channel mutual information", c5},
      {"6 multistep exponent, reconstruction, budget", c6},
      {"7 composition audit", c7},
      {"8 variance filter is unbiased", c8},
      {"9 figure3 Gibbs versus top-K", c9},
      {"10 p-value selection", c10},
      {"11 classification overfitting", c11},
      {"12 LARS oracle and figure2 trends", c12},
      {"13 max-information ordering", c13},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Verdict v;
    double timed = -1.0;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      fn(v, timed);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " [exception: " << e.what() << "]";
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", name.c_str(), v.detail.str().c_str(),
                timed >= 0 ? timed : wall);
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return std::min(failed, 125);
}
