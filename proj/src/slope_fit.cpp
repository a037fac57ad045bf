#include "gibbsids/slope_fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "gibbsids/stats.hpp"

namespace gibbsids {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

SlopeFit fit_plateau(const IdsEstimate& ids,
                     const std::function<double(double)>& transform,
                     double target, const SlopeFitOptions& options,
                     const char* who) {
  if (ids.lambdas.size() != ids.n_hat.size() ||
      ids.lambdas.size() != ids.ci_low.size() ||
      ids.lambdas.size() != ids.ci_high.size())
    throw std::invalid_argument(std::string(who) + ": ragged estimate");
  if (!(options.window_fraction > 0.0) || options.window_fraction > 1.0)
    throw std::invalid_argument(std::string(who) +
                                ": window fraction must be in (0, 1]");
  if (!(options.max_ci_ratio > 0.0))
    throw std::invalid_argument(std::string(who) +
                                ": CI ratio must be positive");

  // valid grid points: deep enough, positive estimate, tight CI
  std::vector<std::pair<double, double>> valid;  // (lambda, ordinate)
  for (std::size_t i = 0; i < ids.lambdas.size(); ++i) {
    const double lam = ids.lambdas[i];
    const double n = ids.n_hat[i];
    if (!(lam < -1.0) || !(n > 0.0)) continue;
    if (!(ids.ci_high[i] - ids.ci_low[i] < options.max_ci_ratio * n)) continue;
    valid.emplace_back(lam, std::log(n) / transform(lam));
  }
  if (valid.empty())
    throw std::runtime_error(std::string(who) +
                             ": empty fit window (no grid point has lambda < "
                             "-1 with a positive, tight estimate)");
  std::sort(valid.begin(), valid.end());
  const std::size_t window = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(options.window_fraction * valid.size())));

  SlopeFit fit;
  fit.valid_points = valid.size();
  fit.target = target;
  for (std::size_t i = 0; i < window; ++i) {
    fit.lambdas.push_back(valid[i].first);
    fit.ordinates.push_back(valid[i].second);
  }
  const MeanVar mv = mean_var(fit.ordinates);
  fit.plateau = mv.mean;
  const double se = fit.ordinates.size() > 1 ? mv.std_error() : 0.0;
  fit.ci_low = fit.plateau - 1.959963984540054 * se;
  fit.ci_high = fit.plateau + 1.959963984540054 * se;
  const auto [mn, mx] =
      std::minmax_element(fit.ordinates.begin(), fit.ordinates.end());
  fit.spread = fit.plateau != 0.0 ? (*mx - *mn) / std::abs(fit.plateau)
                                  : (*mx - *mn);
  return fit;
}

}  // namespace

SlopeFit pastur_slope_fit(const IdsEstimate& ids,
                          const SingleSitePotential& u0,
                          const SlopeFitOptions& options) {
  const double u00 = u0.at_origin();
  if (!(u00 < 0.0))
    throw std::invalid_argument(
        "pastur_slope_fit: the profile must be strictly negative at 0");
  return fit_plateau(
      ids, [](double lam) { return lam * std::log(-lam); }, -1.0 / u00,
      options, "pastur_slope_fit");
}

SlopeFit quadratic_slope_fit(const IdsEstimate& ids, double phi0,
                             double norm_u_sq,
                             const SlopeFitOptions& options) {
  if (!(phi0 > 0.0))
    throw std::invalid_argument(
        "quadratic_slope_fit: pair cost at contact must be positive");
  if (!(norm_u_sq > 0.0))
    throw std::invalid_argument(
        "quadratic_slope_fit: the packing norm must be positive");
  return fit_plateau(
      ids, [](double lam) { return lam * lam; }, -phi0 / (2.0 * norm_u_sq),
      options, "quadratic_slope_fit");
}

IdsUpperReport ids_upper_bound_check(
    const IdsEstimate& ids, const std::vector<LaplacePoint>& schedule) {
  if (schedule.empty())
    throw std::invalid_argument("ids_upper_bound_check: empty schedule");
  for (const auto& pt : schedule)
    if (!(pt.t >= 0.0))
      throw std::invalid_argument(
          "ids_upper_bound_check: schedule needs t >= 0");
  if (ids.lambdas.size() != ids.n_hat.size() ||
      ids.lambdas.size() != ids.ci_high.size())
    throw std::invalid_argument("ids_upper_bound_check: ragged estimate");

  IdsUpperReport report;
  for (std::size_t i = 0; i < ids.lambdas.size(); ++i) {
    IdsUpperRow row;
    row.lambda = ids.lambdas[i];
    row.log_n_hat = ids.n_hat[i] > 0.0 ? std::log(ids.n_hat[i]) : kNegInf;
    row.bound = std::numeric_limits<double>::infinity();
    for (const auto& pt : schedule) {
      const double value = row.lambda * pt.t + pt.log_upper;
      if (value < row.bound) {
        row.bound = value;
        row.best_t = pt.t;
      }
    }
    row.slack = ids.n_hat[i] > 0.0 && ids.ci_high[i] > ids.n_hat[i]
                    ? std::log(ids.ci_high[i]) - std::log(ids.n_hat[i])
                    : 0.0;
    row.pass = row.log_n_hat <= row.bound + row.slack + 1e-12;
    report.all_pass = report.all_pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace gibbsids
