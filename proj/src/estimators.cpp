#include "gibbsids/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gibbsids/quadrature.hpp"

namespace gibbsids {

WilsonInterval CountPmfEstimate::pmf(std::size_t n) const {
  const std::uint64_t k = n < histogram.size() ? histogram[n] : 0;
  return wilson_interval(k, n_samples);
}

CountPmfEstimate estimate_count_pmf(const std::vector<std::size_t>& counts) {
  if (counts.empty())
    throw std::invalid_argument("estimate_count_pmf: empty sample stream");
  CountPmfEstimate out;
  out.n_samples = counts.size();
  for (std::size_t n : counts) {
    if (n >= out.histogram.size()) out.histogram.resize(n + 1, 0);
    ++out.histogram[n];
  }
  return out;
}

ChiSquareResult poisson_count_gof(const std::vector<std::uint64_t>& histogram,
                                  std::size_t n_samples, double mean,
                                  double significance) {
  const std::size_t k = histogram.size();
  std::vector<double> observed(k + 1, 0.0), expected(k + 1, 0.0);
  double log_p = -mean;  // log P(N = 0)
  double cdf = 0.0;
  for (std::size_t n = 0; n < k; ++n) {
    observed[n] = static_cast<double>(histogram[n]);
    const double p = std::exp(log_p);
    expected[n] = n_samples * p;
    cdf += p;
    log_p += std::log(mean) - std::log(static_cast<double>(n + 1));
  }
  observed[k] = 0.0;  // open tail bin
  expected[k] = n_samples * std::max(0.0, 1.0 - cdf);
  return chi_square_gof(observed, expected, significance);
}

LaplaceMcEstimate laplace_functional_mc(
    const std::vector<PointConfiguration>& samples,
    const SingleSitePotential& u0, double t) {
  if (samples.empty())
    throw std::invalid_argument("laplace_functional_mc: no samples");
  if (!(t >= 0.0))
    throw std::invalid_argument("laplace_functional_mc: t must be >= 0");
  std::vector<double> log_terms;
  log_terms.reserve(samples.size());
  for (const auto& s : samples) log_terms.push_back(t * reflected_sum(s, u0));
  const LogMeanEstimate lme = log_mean_exp_jackknife(log_terms);
  LaplaceMcEstimate out;
  out.log_mean = lme.log_mean;
  out.log_lo = lme.lo;
  out.log_hi = lme.hi;
  out.weight_ess = lme.ess;
  out.heavy_tail = lme.ess < 10.0;
  out.n_samples = samples.size();
  return out;
}

double poisson_laplace_closed_form(const SingleSitePotential& u0, double t,
                                   double z, const BoxDomain& window) {
  if (!(z > 0.0))
    throw std::invalid_argument(
        "poisson_laplace_closed_form: intensity must be positive");
  if (t == 0.0) return 1.0;
  const double r = u0.support_radius();
  const std::vector<double> radii = u0.knot_radii();
  double integral = 0.0;
  if (window.dim() == 1) {
    std::vector<double> cuts;
    for (double k : radii) {
      cuts.push_back(k);
      cuts.push_back(-k);
    }
    auto f = [&](double x) {
      const double xv[1] = {x};
      return std::expm1(t * u0.reflected(xv));
    };
    integral = adaptive_simpson_split(f, -r, r, cuts);
  } else if (u0.is_radial()) {
    auto g = [&](double rho) { return std::expm1(-t * u0.radial_value(rho)); };
    integral = integrate_radial(g, window.dim(), r, radii);
  } else {
    throw std::invalid_argument(
        "poisson_laplace_closed_form: only radial profiles in d >= 2");
  }
  return std::exp(z * integral);
}

DominationReport check_domination(const std::vector<double>& f_gibbs,
                                  const std::vector<double>& f_poisson) {
  DominationReport r;
  r.gibbs = mean_var(f_gibbs);
  r.poisson = mean_var(f_poisson);
  const double se = std::sqrt(r.gibbs.std_error() * r.gibbs.std_error() +
                              r.poisson.std_error() * r.poisson.std_error());
  r.slack = 3.0 * se;
  r.holds = r.gibbs.mean <= r.poisson.mean + r.slack;
  return r;
}

std::pair<double, double> partition_bounds(const BoxDomain& window, double a) {
  const double vol = window.volume();
  return {std::exp(-vol), std::exp(vol * (std::exp(-a) - 1.0))};
}

}  // namespace gibbsids
