#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "gibbsids/rng.hpp"
#include "gibbsids/stats.hpp"

using namespace gibbsids;

TEST_CASE("rng streams are deterministic and distinct") {
  RngStream a(42, 0), b(42, 0), c(42, 1);
  bool all_equal = true, any_equal = false;
  for (int i = 0; i < 100; ++i) {
    const double ua = a.uniform(), ub = b.uniform(), uc = c.uniform();
    all_equal = all_equal && ua == ub;
    any_equal = any_equal || ua == uc;
  }
  CHECK(all_equal);
  CHECK_FALSE(any_equal);
}

TEST_CASE("uniform stays in [0,1) and has the right mean") {
  RngStream r(7, 3);
  double s = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    s += u;
  }
  CHECK(std::abs(s / n - 0.5) < 5.0 / std::sqrt(12.0 * n));
}

TEST_CASE("uniform_index covers all values uniformly") {
  RngStream r(11, 0);
  std::vector<int> hits(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++hits[r.uniform_index(7)];
  for (int h : hits) CHECK(std::abs(h - n / 7) < 6 * std::sqrt(n / 7.0));
}

TEST_CASE("normal moments") {
  RngStream r(5, 9);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = r.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(std::abs(s / n) < 5.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(s2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("poisson moments, small and split regime") {
  RngStream r(13, 2);
  for (double mean : {0.7, 4.0, 75.0}) {
    double s = 0.0, s2 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const double x = static_cast<double>(r.poisson(mean));
      s += x;
      s2 += x * x;
    }
    const double m = s / n, v = s2 / n - m * m;
    CHECK(std::abs(m - mean) < 5.0 * std::sqrt(mean / n));
    CHECK(std::abs(v - mean) < 0.05 * mean + 5.0 * mean / std::sqrt(n));
  }
}

TEST_CASE("wilson interval matches the textbook 8-of-10 case") {
  const WilsonInterval w = wilson_interval(8, 10);
  CHECK(w.p_hat == doctest::Approx(0.8));
  CHECK(w.lo == doctest::Approx(0.490163).epsilon(1e-4));
  CHECK(w.hi == doctest::Approx(0.943317).epsilon(1e-4));
  const WilsonInterval zero = wilson_interval(0, 50);
  CHECK(zero.lo == doctest::Approx(0.0));
  CHECK(zero.hi > 0.0);
  const WilsonInterval full = wilson_interval(50, 50);
  CHECK(full.hi == doctest::Approx(1.0));
}

TEST_CASE("chi-square cdf hits standard table entries") {
  CHECK(chi_square_cdf(6.6348966010, 1) == doctest::Approx(0.99).epsilon(1e-6));
  CHECK(chi_square_cdf(15.0862724694, 5) ==
        doctest::Approx(0.99).epsilon(1e-6));
  CHECK(chi_square_cdf(18.3070380533, 10) ==
        doctest::Approx(0.95).epsilon(1e-6));
  CHECK(chi_square_quantile(0.99, 1) ==
        doctest::Approx(6.6348966010).epsilon(1e-6));
  CHECK(chi_square_quantile(0.95, 10) ==
        doctest::Approx(18.3070380533).epsilon(1e-6));
}

TEST_CASE("gof merges low-expectation bins and accepts the true law") {
  // Exact multinomial proportions: a perfectly matching histogram passes.
  std::vector<double> expected{50.0, 30.0, 12.0, 5.0, 2.0, 1.0};
  std::vector<double> observed{52.0, 29.0, 11.0, 5.0, 2.0, 1.0};
  const ChiSquareResult r = chi_square_gof(observed, expected, 0.01);
  CHECK(r.pass);
  CHECK(r.dof >= 1);
  // Gross mismatch fails.
  std::vector<double> off{10.0, 70.0, 12.0, 5.0, 2.0, 1.0};
  CHECK_FALSE(chi_square_gof(off, expected, 0.01).pass);
}

TEST_CASE("log_sum_exp is shift stable") {
  std::vector<double> v{1000.0, 1000.0 + std::log(2.0)};
  CHECK(log_sum_exp(v) == doctest::Approx(1000.0 + std::log(3.0)));
  std::vector<double> tiny{-1500.0, -1500.0};
  CHECK(log_sum_exp(tiny) == doctest::Approx(-1500.0 + std::log(2.0)));
}

TEST_CASE("effective sample size: iid near n, AR(1) shrinks") {
  RngStream r(3, 1);
  const int n = 20000;
  std::vector<double> iid(n);
  for (auto& x : iid) x = r.normal();
  const double e1 = effective_sample_size(iid);
  CHECK(e1 > 0.8 * n);
  CHECK(e1 <= 1.0 * n);

  // AR(1) with rho = 0.5: asymptotic ESS/n = (1-rho)/(1+rho) = 1/3.
  std::vector<double> ar(n);
  double x = 0.0;
  for (auto& y : ar) {
    x = 0.5 * x + r.normal();
    y = x;
  }
  const double e2 = effective_sample_size(ar);
  CHECK(e2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.15));
}

TEST_CASE("log-scale mean with jackknife band") {
  // Constant weights: exact answer, ESS = n.
  std::vector<double> flat(100, 2.5);
  const LogMeanEstimate a = log_mean_exp_jackknife(flat);
  CHECK(a.log_mean == doctest::Approx(2.5));
  CHECK(a.ess == doctest::Approx(100.0));
  CHECK(a.lo <= a.log_mean);
  CHECK(a.hi >= a.log_mean);

  // One dominating term: heavy-tail flag territory (tiny ESS).
  std::vector<double> spike(100, 0.0);
  spike[7] = 40.0;
  const LogMeanEstimate b = log_mean_exp_jackknife(spike);
  CHECK(b.ess < 2.0);
  CHECK(b.log_mean == doctest::Approx(40.0 - std::log(100.0)).epsilon(1e-6));
}

TEST_CASE("mean_var basics") {
  std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const MeanVar mv = mean_var(v);
  CHECK(mv.mean == doctest::Approx(2.5));
  CHECK(mv.var == doctest::Approx(5.0 / 3.0));  // unbiased
  CHECK(mv.std_error() == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
}
