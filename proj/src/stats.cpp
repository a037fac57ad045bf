#include "gibbsids/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gibbsids {

double MeanVar::std_error() const {
  return n > 1 ? std::sqrt(var / static_cast<double>(n)) : 0.0;
}

MeanVar mean_var(std::span<const double> xs) {
  MeanVar out;
  out.n = xs.size();
  if (xs.empty()) return out;
  double m = 0.0;
  for (double x : xs) m += x;
  m /= static_cast<double>(xs.size());
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  out.mean = m;
  out.var = xs.size() > 1 ? s / static_cast<double>(xs.size() - 1) : 0.0;
  return out;
}

double log_sum_exp(std::span<const double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials,
                               double z) {
  WilsonInterval w;
  if (trials == 0) return w;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  w.p_hat = p;
  w.lo = std::max(0.0, center - half);
  w.hi = std::min(1.0, center + half);
  return w;
}

namespace {

// series expansion, valid for x < a + 1
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// continued fraction for Q(a, x) (modified Lentz), valid for x >= a + 1
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_p(double a, double x) {
  if (a <= 0.0) throw std::invalid_argument("regularized_gamma_p: a <= 0");
  if (x < 0.0) throw std::invalid_argument("regularized_gamma_p: x < 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double chi_square_cdf(double x, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_cdf: dof < 1");
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi_square_quantile(double p, int dof) {
  if (p <= 0.0 || p >= 1.0)
    throw std::invalid_argument("chi_square_quantile: p outside (0,1)");
  double lo = 0.0;
  double hi = 1.0;
  while (chi_square_cdf(hi, dof) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (chi_square_cdf(mid, dof) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ChiSquareResult chi_square_gof(std::span<const double> observed,
                               std::span<const double> expected,
                               double significance, double min_expected) {
  if (observed.size() != expected.size() || observed.empty())
    throw std::invalid_argument("chi_square_gof: length mismatch");
  // merge low-expectation bins left to right
  std::vector<double> obs, exp;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += observed[i];
    e_acc += expected[i];
    if (e_acc >= min_expected) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (obs.empty()) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
    } else {
      obs.back() += o_acc;
      exp.back() += e_acc;
    }
  }
  ChiSquareResult r;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (exp[i] <= 0.0) continue;
    const double d = obs[i] - exp[i];
    r.statistic += d * d / exp[i];
  }
  r.dof = std::max<int>(1, static_cast<int>(obs.size()) - 1);
  r.p_value = 1.0 - chi_square_cdf(r.statistic, r.dof);
  r.pass = r.statistic <= chi_square_quantile(1.0 - significance, r.dof);
  return r;
}

double effective_sample_size(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 4) return static_cast<double>(n);
  const MeanVar mv = mean_var(series);
  if (mv.var <= 0.0) return static_cast<double>(n);
  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i)
      s += (series[i] - mv.mean) * (series[i + lag] - mv.mean);
    return s / static_cast<double>(n);
  };
  const double c0 = autocov(0);
  // Geyer initial positive sequence over paired lags
  double rho_sum = 0.0;
  for (std::size_t m = 0; 2 * m + 2 < n; ++m) {
    const double pair = (autocov(2 * m + 1) + autocov(2 * m + 2)) / c0;
    if (pair <= 0.0) break;
    rho_sum += pair;
  }
  const double ess = static_cast<double>(n) / (1.0 + 2.0 * rho_sum);
  return std::clamp(ess, 1.0, static_cast<double>(n));
}

LogMeanEstimate log_mean_exp_jackknife(std::span<const double> log_terms) {
  const std::size_t n = log_terms.size();
  if (n == 0) throw std::invalid_argument("log_mean_exp_jackknife: empty");
  LogMeanEstimate est;
  const double lse = log_sum_exp(log_terms);
  est.log_mean = lse - std::log(static_cast<double>(n));
  double m = -std::numeric_limits<double>::infinity();
  for (double x : log_terms) m = std::max(m, x);
  if (!std::isfinite(m)) {
    est.lo = est.hi = est.log_mean;
    est.ess = static_cast<double>(n);
    return est;
  }
  double s = 0.0, s2 = 0.0;
  for (double x : log_terms) {
    const double w = std::exp(x - m);
    s += w;
    s2 += w * w;
  }
  est.ess = s * s / s2;
  if (n == 1) {
    est.lo = est.hi = est.log_mean;
    return est;
  }
  // leave-one-out estimates of the log-mean
  std::vector<double> theta(n);
  double theta_bar = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double rest = std::max(s - std::exp(log_terms[i] - m), 0.0);
    theta[i] = rest > 0.0
                   ? m + std::log(rest) - std::log(static_cast<double>(n - 1))
                   : -std::numeric_limits<double>::infinity();
    theta_bar += theta[i];
  }
  theta_bar /= static_cast<double>(n);
  if (!std::isfinite(theta_bar)) {
    est.lo = -std::numeric_limits<double>::infinity();
    est.hi = est.log_mean;
    return est;
  }
  double var = 0.0;
  for (double t : theta) var += (t - theta_bar) * (t - theta_bar);
  var *= static_cast<double>(n - 1) / static_cast<double>(n);
  const double half = 1.959963984540054 * std::sqrt(var);
  est.lo = est.log_mean - half;
  est.hi = est.log_mean + half;
  return est;
}

}  // namespace gibbsids
