#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gibbsids/geometry.hpp"
#include "gibbsids/site_potential.hpp"
#include "gibbsids/stats.hpp"

namespace gibbsids {

// Empirical law of the window count with Wilson 95% bands per value of n.
struct CountPmfEstimate {
  std::vector<std::uint64_t> histogram;  // index n -> occurrences
  std::size_t n_samples = 0;
  WilsonInterval pmf(std::size_t n) const;
};

CountPmfEstimate estimate_count_pmf(const std::vector<std::size_t>& counts);

// Goodness of fit of a count histogram against Poisson(mean); bins are merged
// upward until every expected count reaches 5, and a final open tail bin
// absorbs the remaining mass.
ChiSquareResult poisson_count_gof(const std::vector<std::uint64_t>& histogram,
                                  std::size_t n_samples, double mean,
                                  double significance = 0.01);

// Monte Carlo estimate of E[exp(t sum_j u(x_j))] reported in log scale with a
// jackknife confidence band; heavy_tail is set when fewer than 10 samples
// carry the bulk of the weight.
struct LaplaceMcEstimate {
  double log_mean = 0.0;
  double log_lo = 0.0;
  double log_hi = 0.0;
  double weight_ess = 0.0;
  bool heavy_tail = false;
  std::size_t n_samples = 0;
};

LaplaceMcEstimate laplace_functional_mc(
    const std::vector<PointConfiguration>& samples,
    const SingleSitePotential& u0, double t);

// exp(z * integral of (e^{t u(x)} - 1) dx) for the reflected form u; exact
// Campbell formula for the Poisson process. General profiles in d = 1,
// radial profiles in d >= 2.
double poisson_laplace_closed_form(const SingleSitePotential& u0, double t,
                                   double z, const BoxDomain& window);

// Empirical check of E_gibbs[f] <= E_poisson[f] for an increasing f, with a
// 3-sigma allowance on the combined standard error.
struct DominationReport {
  MeanVar gibbs;
  MeanVar poisson;
  double slack = 0.0;  // 3 * combined standard error
  bool holds = false;
};

DominationReport check_domination(const std::vector<double>& f_gibbs,
                                  const std::vector<double>& f_poisson);

// (e^{-|window|}, exp(|window| (e^{-a} - 1))) bracketing the normalizing
// constant when every local energy is >= a.
std::pair<double, double> partition_bounds(const BoxDomain& window, double a);

}  // namespace gibbsids
