#include "infousage/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "infousage/errors.hpp"

namespace infousage {

namespace {

void require_sigma(double sigma) {
  if (!(sigma > 0.0)) throw InputError("sigma must be > 0");
}

void require_info(double I) {
  if (!(I >= 0.0)) throw InputError("information must be >= 0");
}

}  // namespace

double bias_bound(double sigma, double I) {
  require_sigma(sigma);
  require_info(I);
  return sigma * std::sqrt(2.0 * I);
}

double bias_bound_hetero(std::span<const double> sigmas, std::span<const double> pmf, double I) {
  if (sigmas.size() != pmf.size()) throw InputError("sigmas and pmf differ in length");
  require_info(I);
  double v = 0.0;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    require_sigma(sigmas[i]);
    if (pmf[i] < 0.0) throw InputError("negative probability");
    v += pmf[i] * sigmas[i] * sigmas[i];
  }
  return std::sqrt(v) * std::sqrt(2.0 * I);
}

double bias_bound_subexp(double sigma, double b, double I) {
  require_sigma(sigma);
  require_info(I);
  if (!(b > 0.0)) throw InputError("b must be > 0");
  double best = b * I + sigma * sigma / (2.0 * b);
  if (b < 1.0) {
    const double rb = std::sqrt(b);
    best = std::min(best, rb * I + sigma * sigma / (2.0 * rb));
  }
  return best;
}

double abs_error_bound(double sigma, double I) {
  require_sigma(sigma);
  require_info(I);
  return sigma + kAbsErrorConstant * sigma * std::sqrt(2.0 * I);
}

double sq_error_bound(double sigma, double I) {
  require_sigma(sigma);
  require_info(I);
  return 1.25 * sigma * sigma + 10.0 * sigma * sigma * I;
}

double sq_error_lower_bound(double H) {
  require_info(H);
  return H / 8.0 - 2.5;
}

double sq_error_upper_bound_prop3(double H) {
  require_info(H);
  return 10.0 * H + 1.5;
}

bool threshold_condition_gaussian(double M, double max_mu, double n_hat) {
  const double gap = M - max_mu;
  if (!(gap > 0.0)) return false;
  const double arg = 2.0 * std::numbers::pi * (1.0 + n_hat) * gap;
  return gap >= std::sqrt(std::max(0.0, 2.0 * std::log(arg) + 3.0));
}

bool threshold_condition_exponential(double M, double max_lambda, double n_hat) {
  return M - max_lambda >= 4.0 + 2.0 * std::log1p(n_hat);
}

double topk_bound(double sigma, std::size_t m, std::size_t m0) {
  require_sigma(sigma);
  if (m0 < 1 || m0 > m) throw InputError("topk_bound needs 1 <= m0 <= m");
  return sigma * std::sqrt(2.0 * std::log(static_cast<double>(m) / static_cast<double>(m0)));
}

double pvalue_bound(double epsilon, double I_TZ) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) throw InputError("epsilon must lie in (0, 1/2)");
  require_info(I_TZ);
  return std::min(1.0, epsilon + std::sqrt(I_TZ / std::log(1.0 / (2.0 * epsilon))));
}

double regret_bound(double sigma, double H_xstar) {
  require_sigma(sigma);
  require_info(H_xstar);
  return sigma * std::sqrt(2.0 * H_xstar);
}

double vc_info_bound(double d, double n) {
  if (!(d >= 1.0) || !(n >= 1.0)) throw InputError("vc_info_bound needs d >= 1 and n >= 1");
  return d * std::max(1.0, std::log(n * std::numbers::e / d));
}

double overfit_bound(double I, double n) {
  require_info(I);
  if (!(n >= 1.0)) throw InputError("n must be >= 1");
  return std::sqrt(I / (2.0 * n));
}

NoiseSchedule NoiseSchedule::fourth_root(double sigma) {
  require_sigma(sigma);
  NoiseSchedule s;
  s.kind = Kind::fourth_root;
  s.sigma = sigma;
  return s;
}

NoiseSchedule NoiseSchedule::generic(std::vector<double> omegas) {
  for (double w : omegas)
    if (!(w > 0.0)) throw InputError("noise schedule entries must be > 0");
  NoiseSchedule s;
  s.kind = Kind::generic;
  s.omegas = std::move(omegas);
  return s;
}

NoiseSchedule NoiseSchedule::constant(double omega, std::size_t length) {
  return generic(std::vector<double>(length, omega));
}

double NoiseSchedule::omega(std::size_t j) const {
  if (j < 1) throw InputError("schedule index starts at 1");
  if (kind == Kind::fourth_root) return sigma * std::pow(static_cast<double>(j), 0.25);
  if (j > omegas.size()) throw InputError("noise schedule too short");
  return omegas[j - 1];
}

bool NoiseSchedule::covers(std::size_t j) const {
  return kind == Kind::fourth_root || j <= omegas.size();
}

std::string NoiseSchedule::describe() const {
  std::ostringstream os;
  if (kind == Kind::fourth_root) {
    os << "fourth_root(sigma=" << sigma << ")";
  } else {
    os << "generic(" << omegas.size() << ")";
  }
  return os.str();
}

double schedule_budget(double sigma, const NoiseSchedule& schedule, std::size_t k) {
  require_sigma(sigma);
  double s = 0.0;
  for (std::size_t j = 1; j <= k; ++j) {
    const double w = schedule.omega(j);
    s += 1.0 / (w * w);
  }
  return 0.5 * sigma * sigma * s;
}

double multistep_error_bound(double sigma, double n, std::size_t k, const NoiseSchedule& schedule) {
  require_sigma(sigma);
  if (!(n > 0.0)) throw InputError("n must be > 0");
  if (schedule.kind == NoiseSchedule::Kind::generic && schedule.omegas.empty() && k >= 1)
    throw InputError("empty noise schedule");
  const double I = schedule_budget(sigma, schedule, k);
  const double w = schedule.omega(k + 1);
  return sigma / std::sqrt(n) + w * std::sqrt(2.0 / (std::numbers::pi * n)) +
         kAbsErrorConstant * sigma * std::sqrt(2.0 * I / n);
}

BoundReport check_upper(std::string name, double bound, double empirical, double tolerance) {
  BoundReport r;
  r.name = std::move(name);
  r.value = bound;
  r.empirical = empirical;
  r.tolerance = tolerance;
  r.slack = bound - empirical;
  r.satisfied = empirical <= bound + tolerance;
  return r;
}

BoundReport check_lower(std::string name, double bound, double empirical, double tolerance) {
  BoundReport r;
  r.name = std::move(name);
  r.value = bound;
  r.empirical = empirical;
  r.tolerance = tolerance;
  r.lower = true;
  r.vacuous = bound < 0.0;
  r.slack = empirical - bound;
  r.satisfied = empirical >= bound - tolerance;
  return r;
}

}  // namespace infousage
