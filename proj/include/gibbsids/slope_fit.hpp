// Plateau fits of transformed integrated-density ordinates against their
// predicted low-energy limits, and the exponential Chebyshev cross-check of
// the counting estimates against Laplace-transform estimates.
#pragma once

#include <cstddef>
#include <vector>

#include "gibbsids/ids.hpp"
#include "gibbsids/site_potential.hpp"

namespace gibbsids {

struct SlopeFitOptions {
  // share of the valid grid, taken from the most negative end
  double window_fraction = 1.0 / 3.0;
  // a grid point only enters the fit when its CI width stays below this
  // fraction of the estimate
  double max_ci_ratio = 0.5;
};

struct SlopeFit {
  std::vector<double> lambdas;    // fit window, ascending
  std::vector<double> ordinates;  // transformed values on the window
  double plateau = 0.0;           // window mean
  double ci_low = 0.0;            // plateau -/+ 1.96 standard errors
  double ci_high = 0.0;
  double spread = 0.0;        // (max - min) / |plateau| over the window
  double target = 0.0;        // predicted limit of the ordinates
  std::size_t valid_points = 0;  // grid points surviving the filters
};

// Ordinates log N(lambda) / (lambda log|lambda|), predicted to flatten at
// -1 / u0(0) as lambda -> -inf. Requires u0(0) < 0; only grid points with
// lambda < -1, a positive estimate, and a tight CI enter the fit.
SlopeFit pastur_slope_fit(const IdsEstimate& ids,
                          const SingleSitePotential& u0,
                          const SlopeFitOptions& options = {});

// Ordinates log N(lambda) / lambda^2, predicted to flatten at
// -phi0 / (2 norm_u_sq) for pair costs at least phi0 near the origin.
SlopeFit quadratic_slope_fit(const IdsEstimate& ids, double phi0,
                             double norm_u_sq,
                             const SlopeFitOptions& options = {});

struct LaplacePoint {
  double t = 0.0;
  double log_upper = 0.0;  // upper confidence end of the log Laplace estimate
};

struct IdsUpperRow {
  double lambda = 0.0;
  double log_n_hat = 0.0;  // -inf when the estimate is zero
  double bound = 0.0;      // min over the schedule of lambda t + log_upper
  double slack = 0.0;      // upward CI allowance of the estimate, in logs
  double best_t = 0.0;
  bool pass = false;
};

struct IdsUpperReport {
  std::vector<IdsUpperRow> rows;
  bool all_pass = true;
};

// Chebyshev bound log N(lambda) <= lambda t + log E[exp(t sum_j u(x_j))] for
// every t >= 0, checked per grid point at the scheduled t values with the
// estimator's own upward uncertainty as slack.
IdsUpperReport ids_upper_bound_check(const IdsEstimate& ids,
                                     const std::vector<LaplacePoint>& schedule);

}  // namespace gibbsids
