#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "gibbsids/estimators.hpp"
#include "gibbsids/interaction.hpp"
#include "gibbsids/rng.hpp"
#include "gibbsids/sampler.hpp"
#include "gibbsids/site_potential.hpp"

using namespace gibbsids;

namespace {

InteractionModel strauss(double a, double r) {
  return InteractionModel::pairwise(std::make_shared<StraussPotential>(a, r));
}

InteractionModel null_interaction() {
  return InteractionModel::pairwise(
      std::make_shared<TabulatedPotential>(
          std::vector<std::pair<double, double>>{{0.0, 0.0}, {0.5, 0.0}}));
}

double min_gap(const PointConfiguration& c) {
  double g = 1e100;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      g = std::min(g, distance(c.point(i), c.point(j)));
  return g;
}

}  // namespace

TEST_CASE("acceptance ratios satisfy the birth/death flow identity") {
  // f(eta) (1/V) a_birth(h, n, V) == f(eta+x) (1/(n+1)) a_death(h, n+1, V)
  // with f(eta+x)/f(eta) = e^{-h}: checked over a grid of (h, n, V).
  for (double h : {-1.5, -0.1, 0.0, 0.3, 2.0, 10.0})
    for (std::size_t n : {0u, 1u, 2u, 7u, 40u})
      for (double vol : {0.25, 1.0, 9.0}) {
        const double lhs = (1.0 / vol) * birth_acceptance(h, n, vol);
        const double rhs = std::exp(-h) / static_cast<double>(n + 1) *
                           death_acceptance(h, n + 1, vol);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
      }
  // moves: min(1, e^{-d}) == e^{-d} min(1, e^{+d})
  for (double d : {-3.0, -0.2, 0.0, 0.4, 5.0})
    CHECK(move_acceptance(d) ==
          doctest::Approx(std::exp(-d) * move_acceptance(-d)));
  CHECK(birth_acceptance(kInfiniteEnergy, 3, 1.0) == 0.0);
  CHECK(move_acceptance(kInfiniteEnergy) == 0.0);
}

TEST_CASE("poisson sampler: count law and mean") {
  RngStream rng(2024, 0);
  const BoxDomain unit = BoxDomain::centered_cube(1, 1.0);
  std::vector<std::size_t> counts;
  counts.reserve(100000);
  for (int i = 0; i < 100000; ++i)
    counts.push_back(sample_poisson(unit, 1.0, rng).size());
  const CountPmfEstimate pmf = estimate_count_pmf(counts);
  const ChiSquareResult gof =
      poisson_count_gof(pmf.histogram, pmf.n_samples, 1.0, 0.01);
  CHECK(gof.pass);
  const WilsonInterval p1 = pmf.pmf(1);
  CHECK(p1.lo <= std::exp(-1.0));
  CHECK(p1.hi >= std::exp(-1.0));

  const BoxDomain square = BoxDomain::centered_cube(2, 1.0);
  double mean = 0.0;
  for (int i = 0; i < 20000; ++i)
    mean += static_cast<double>(sample_poisson(square, 2.0, rng).size());
  mean /= 20000;
  CHECK(std::abs(mean - 2.0) < 3.0 * std::sqrt(2.0 / 20000.0));
}

TEST_CASE("null interaction chain is Poisson") {
  const GibbsTarget target = GibbsTarget::free_boundary(
      null_interaction(), BoxDomain::centered_cube(1, 1.0));
  RngStream rng(7, 1);
  const ChainResult run = run_chain(target, 6000000, 50000, 200, rng);
  std::vector<std::size_t> counts;
  counts.reserve(run.samples.size());
  for (const auto& s : run.samples) counts.push_back(s.size());
  const CountPmfEstimate pmf = estimate_count_pmf(counts);
  const ChiSquareResult gof =
      poisson_count_gof(pmf.histogram, pmf.n_samples, 1.0, 0.01);
  CHECK(gof.pass);
  CHECK(run.count_ess > 1000.0);
}

TEST_CASE("hardcore chain never violates the core") {
  const GibbsTarget target = GibbsTarget::free_boundary(
      InteractionModel::pairwise(std::make_shared<HardcorePotential>(0.3)),
      BoxDomain::centered_cube(1, 1.0));
  RngStream rng(9, 4);
  const ChainResult run = run_chain(target, 300000, 10000, 50, rng);
  CHECK(run.acceptance_rate > 0.05);
  bool moved = false;
  std::size_t first = run.samples.front().size();
  for (const auto& s : run.samples) {
    CHECK(min_gap(s) > 0.3);
    moved = moved || s.size() != first;
  }
  CHECK(moved);
}

TEST_CASE("strauss chain matches the nested-quadrature law") {
  // Unit window, a = 1, R = 0.4: I_n = int_{L^n} e^{-U}, compared through the
  // count law conditioned on n <= 3.
  const double a = 1.0, R = 0.4;
  const BoxDomain unit = BoxDomain::centered_cube(1, 1.0);

  // midpoint-grid quadrature oracle
  auto phi01 = [&](double x, double y) {
    return std::abs(x - y) <= R ? a : 0.0;
  };
  const int m2 = 600;
  double i2 = 0.0;
  for (int i = 0; i < m2; ++i)
    for (int j = 0; j < m2; ++j) {
      const double x = -0.5 + (i + 0.5) / m2, y = -0.5 + (j + 0.5) / m2;
      i2 += std::exp(-phi01(x, y));
    }
  i2 /= static_cast<double>(m2) * m2;

  const int m3 = 160;
  double i3 = 0.0;
  for (int i = 0; i < m3; ++i)
    for (int j = 0; j < m3; ++j)
      for (int k = 0; k < m3; ++k) {
        const double x = -0.5 + (i + 0.5) / m3, y = -0.5 + (j + 0.5) / m3,
                     z = -0.5 + (k + 0.5) / m3;
        i3 += std::exp(-(phi01(x, y) + phi01(x, z) + phi01(y, z)));
      }
  i3 /= static_cast<double>(m3) * m3 * m3;

  // independent hand-computed gap-decomposition values
  CHECK(i2 == doctest::Approx(0.59544284).epsilon(0.01));
  CHECK(i3 == doctest::Approx(0.20887800).epsilon(0.01));

  const double w0 = 1.0, w1 = 1.0, w2 = i2 / 2.0, w3 = i3 / 6.0;
  const double z_trunc = w0 + w1 + w2 + w3;

  const GibbsTarget target = GibbsTarget::free_boundary(strauss(a, R), unit);
  RngStream rng(31, 2);
  const ChainResult run = run_chain(target, 2000000, 20000, 10, rng);
  std::vector<double> freq(4, 0.0);
  std::size_t kept = 0;
  for (const auto& s : run.samples)
    if (s.size() <= 3) {
      ++freq[s.size()];
      ++kept;
    }
  for (auto& f : freq) f /= static_cast<double>(kept);
  CHECK(freq[0] == doctest::Approx(w0 / z_trunc).epsilon(0.035));
  CHECK(freq[1] == doctest::Approx(w1 / z_trunc).epsilon(0.035));
  CHECK(freq[2] == doctest::Approx(w2 / z_trunc).epsilon(0.06));
  CHECK(freq[3] == doctest::Approx(w3 / z_trunc).epsilon(0.25));
}

TEST_CASE("chains are reproducible and respect burn-in bookkeeping") {
  const GibbsTarget target = GibbsTarget::free_boundary(
      strauss(0.5, 0.3), BoxDomain::centered_cube(1, 2.0));
  RngStream r1(123, 5), r2(123, 5);
  const ChainResult a = run_chain(target, 5000, 1000, 4, r1);
  const ChainResult b = run_chain(target, 5000, 1000, 4, r2);
  REQUIRE(a.samples.size() == b.samples.size());
  CHECK(a.samples.size() == 1000);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    REQUIRE(a.samples[i].size() == b.samples[i].size());
    for (std::size_t j = 0; j < a.samples[i].size(); ++j)
      CHECK(squared_distance(a.samples[i].point(j), b.samples[i].point(j)) ==
            0.0);
  }
  RngStream r3(123, 5);
  CHECK(run_chain(target, 100, 0, 1, r3).samples.size() == 100);
  RngStream r4(1, 1);
  CHECK_THROWS(run_chain(target, 100, 100, 1, r4));
  CHECK_THROWS(GibbsTarget(strauss(1.0, 1.0), BoxDomain::centered_cube(1, 2.0),
                           PointConfiguration(
                               BoxDomain::centered_cube(1, 2.0),
                               std::vector<Point>{{0.0}})));
}

TEST_CASE("boundary points push the chain away") {
  // Hardcore boundary point just outside the window forbids births nearby.
  const BoxDomain window = BoxDomain::centered_cube(1, 1.0);
  PointConfiguration boundary(window.padded(1.0),
                              std::vector<Point>{{0.55}});
  const GibbsTarget target(
      InteractionModel::pairwise(std::make_shared<HardcorePotential>(0.4)),
      window, boundary);
  RngStream rng(17, 0);
  const ChainResult run = run_chain(target, 200000, 10000, 20, rng);
  for (const auto& s : run.samples)
    for (std::size_t j = 0; j < s.size(); ++j)
      CHECK(s.point(j)[0] < 0.55 - 0.4);
}

TEST_CASE("count pmf estimator basics") {
  std::vector<std::size_t> zeros(500, 0);
  const CountPmfEstimate e = estimate_count_pmf(zeros);
  CHECK(e.pmf(0).p_hat == doctest::Approx(1.0));
  CHECK(e.pmf(1).p_hat == doctest::Approx(0.0));
  CHECK(e.pmf(3).hi < 0.02);
}

TEST_CASE("laplace functional: trivial t, closed form, MC agreement") {
  const SingleSitePotential tri =
      SingleSitePotential::radial({{0.0, -1.0}, {1.0, 0.0}});
  const BoxDomain window = BoxDomain::centered_cube(1, 2.0);

  CHECK(poisson_laplace_closed_form(tri, 0.0, 1.0, window) == 1.0);

  // flat profile of unit measure: exp(e - 1)
  const SingleSitePotential flat =
      SingleSitePotential::radial({{0.0, -1.0}, {0.5, -1.0}});
  CHECK(poisson_laplace_closed_form(flat, 1.0, 1.0, window) ==
        doctest::Approx(5.574943).epsilon(1e-4));

  // triangular: integral 2((e^t - 1)/t - 1) has an elementary form
  for (double t : {0.5, 1.0, 2.0}) {
    const double integral = 2.0 * ((std::exp(t) - 1.0) / t - 1.0);
    CHECK(poisson_laplace_closed_form(tri, t, 1.0, window) ==
          doctest::Approx(std::exp(integral)).epsilon(1e-7));
  }

  RngStream rng(404, 0);
  std::vector<PointConfiguration> samples;
  samples.reserve(60000);
  for (int i = 0; i < 60000; ++i)
    samples.push_back(sample_poisson(window, 1.0, rng));
  for (double t : {0.5, 1.0, 2.0}) {
    const LaplaceMcEstimate mc = laplace_functional_mc(samples, tri, t);
    const double log_cf =
        std::log(poisson_laplace_closed_form(tri, t, 1.0, window));
    const double sigma = (mc.log_hi - mc.log_lo) / (2.0 * 1.96);
    CHECK(std::abs(mc.log_mean - log_cf) <= 3.0 * sigma);
    CHECK_FALSE(mc.heavy_tail);
  }

  const LaplaceMcEstimate t0 = laplace_functional_mc(samples, tri, 0.0);
  CHECK(t0.log_mean == 0.0);
}

TEST_CASE("stochastic domination reports") {
  RngStream rng(88, 0);
  const BoxDomain box = BoxDomain::centered_cube(1, 2.0);
  const GibbsTarget target = GibbsTarget::free_boundary(strauss(1.0, 0.5), box);
  const ChainResult run = run_chain(target, 800000, 20000, 40, rng);
  std::vector<double> f_gibbs;
  for (const auto& s : run.samples)
    f_gibbs.push_back(static_cast<double>(s.size()));
  std::vector<double> f_poisson;
  for (std::size_t i = 0; i < f_gibbs.size(); ++i)
    f_poisson.push_back(
        static_cast<double>(sample_poisson(box, 1.0, rng).size()));
  const DominationReport rep = check_domination(f_gibbs, f_poisson);
  CHECK(rep.holds);
  // interaction strictly thins the process here
  CHECK(rep.gibbs.mean < rep.poisson.mean);

  // identical constant functionals: equality within zero slack
  std::vector<double> c1(100, 5.0), c2(100, 5.0);
  const DominationReport eq = check_domination(c1, c2);
  CHECK(eq.holds);
  CHECK(eq.slack == 0.0);
}

TEST_CASE("partition bracket formulas") {
  const BoxDomain unit = BoxDomain::centered_cube(1, 1.0);
  const auto [lo0, hi0] = partition_bounds(unit, 0.0);
  CHECK(lo0 == doctest::Approx(0.3678794412));
  CHECK(hi0 == doctest::Approx(1.0));
  const auto [lo1, hi1] = partition_bounds(unit, 1.0);
  CHECK(lo1 == doctest::Approx(0.3678794412));
  CHECK(hi1 == doctest::Approx(std::exp(std::exp(-1.0) - 1.0)));
  // the bracket collapses onto the lower bound as the floor grows
  const auto [lo2, hi2] = partition_bounds(unit, 50.0);
  CHECK(hi2 == doctest::Approx(lo2).epsilon(1e-6));
}
