// Small statistics toolbox: stable log-sum-exp, Wilson intervals, chi-square
// goodness of fit, autocorrelation-based effective sample size.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gibbsids {

struct MeanVar {
  double mean = 0.0;
  double var = 0.0;  // unbiased sample variance
  std::size_t n = 0;
  double std_error() const;
};

MeanVar mean_var(std::span<const double> xs);

// log(sum_i exp(xs[i])), -inf for an empty or all -inf input
double log_sum_exp(std::span<const double> xs);

struct WilsonInterval {
  double p_hat = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

// 95% Wilson score interval for successes/trials
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials,
                               double z = 1.959963984540054);

// regularized lower incomplete gamma P(a, x)
double regularized_gamma_p(double a, double x);

double chi_square_cdf(double x, int dof);

// smallest x with chi_square_cdf(x, dof) >= p
double chi_square_quantile(double p, int dof);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  bool pass = false;  // statistic below the (1 - significance) quantile
};

// Goodness of fit of observed counts against expected counts (same length).
// Bins with expected mass below min_expected are merged into their neighbor.
ChiSquareResult chi_square_gof(std::span<const double> observed,
                               std::span<const double> expected,
                               double significance, double min_expected = 5.0);

// Effective sample size via Geyer's initial positive sequence on the
// autocorrelation of the series.
double effective_sample_size(std::span<const double> series);

// Jackknife CI (95%) for log(mean(exp(log_terms))). Returns {estimate, lo, hi}.
struct LogMeanEstimate {
  double log_mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double ess = 0.0;  // weight-based effective sample size of the mean
};

LogMeanEstimate log_mean_exp_jackknife(std::span<const double> log_terms);

}  // namespace gibbsids
