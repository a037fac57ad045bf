#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "gibbsids/bounds.hpp"
#include "gibbsids/geometry.hpp"
#include "gibbsids/interaction.hpp"
#include "gibbsids/rng.hpp"
#include "gibbsids/slope_fit.hpp"
#include "gibbsids/window.hpp"

using namespace gibbsids;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// frozen against an independent 30-digit summation of the infinite series
constexpr double kLogSumT0 = 0.326651746222308;
constexpr double kLogSumT2 = 1.56201179725962;
constexpr double kLogSumT20 = 100.572468383947;
// k = 2 with the coupling edge and v = (1,1): the exponent collapses to
// -(n1+n2)^2 + t (n1+n2), so the sum equals sum_m (m+1) exp(-m^2 + t m)
constexpr double kLogSumPairT2 = 2.2656504370572;

BoxDomain interval(double lo, double hi) {
  return BoxDomain({0.5 * (lo + hi)}, {hi - lo});
}

// independent maximum-weight independent set: branch on each vertex
double bruteforce_independent(int k,
                              const std::vector<std::pair<int, int>>& edges,
                              const std::vector<double>& w) {
  std::vector<std::vector<char>> adj(k, std::vector<char>(k, 0));
  for (auto [i, j] : edges) adj[i][j] = adj[j][i] = 1;
  std::vector<int> chosen;
  double best = 0.0;
  auto rec = [&](auto&& self, int v, double acc) -> void {
    if (v == k) {
      best = std::max(best, acc);
      return;
    }
    self(self, v + 1, acc);
    for (int u : chosen)
      if (adj[u][v]) return;
    chosen.push_back(v);
    self(self, v + 1, acc + w[v]);
    chosen.pop_back();
  };
  rec(rec, 0, 0.0);
  return best;
}

}  // namespace

TEST_CASE("cell layout pair classification against the window") {
  const auto S = InteractionWindow::ball(1, 1.0);
  const BoxDomain a = interval(0.0, 0.4);
  const BoxDomain b = interval(0.5, 0.9);
  const BoxDomain c = interval(2.0, 2.4);
  InteractionGraph graph({a, b, c}, S);

  // a - b spans [-0.9, -0.1], inside the open unit ball
  CHECK(graph.linked(0, 1));
  CHECK(graph.linked(1, 0));
  // a - c spans [-2.4, -1.6] and b - c spans [-1.9, -1.1], both escaping
  CHECK_FALSE(graph.linked(0, 2));
  CHECK_FALSE(graph.linked(1, 2));
  // self differences always fit for these narrow cells
  CHECK(graph.linked(0, 0));
  CHECK(graph.linked(2, 2));

  const auto edges = graph.edges();
  REQUIRE(edges.size() == 1);
  CHECK(edges[0] == std::pair<int, int>{0, 1});

  // the boundary case: a pair whose difference hull touches the closed ball
  const auto closed = InteractionWindow::ball(1, 1.0, /*open=*/false);
  InteractionGraph tight({interval(0.0, 0.1), interval(0.9, 1.0)}, closed);
  // differences span [-1.0, -0.8]; -1.0 sits inside the closed ball
  CHECK(tight.linked(0, 1));
  InteractionGraph tight_open({interval(0.0, 0.1), interval(0.9, 1.0)}, S);
  CHECK_FALSE(tight_open.linked(0, 1));  // the open ball loses -1.0
}

TEST_CASE("separable families are exactly the linked-pair-free ones") {
  const auto S = InteractionWindow::ball(1, 1.0);
  std::vector<BoxDomain> cells = {interval(0.0, 0.4), interval(0.5, 0.9),
                                  interval(2.0, 2.4), interval(2.5, 2.9),
                                  interval(-3.0, -2.6)};
  InteractionGraph graph(cells, S);
  const int k = graph.size();

  // exhaustive cross-check of the enumeration against the pair relation
  const auto families = graph.separable_families();
  std::size_t expected = 0;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> family;
    for (int j = 0; j < k; ++j)
      if (mask & (1u << j)) family.push_back(j);
    bool free_of_links = true;
    for (std::size_t x = 0; x < family.size() && free_of_links; ++x)
      for (std::size_t y = x + 1; y < family.size(); ++y)
        if (graph.linked(family[x], family[y])) {
          free_of_links = false;
          break;
        }
    CHECK(graph.separable(family) == free_of_links);
    if (free_of_links) {
      ++expected;
      CHECK(std::find(families.begin(), families.end(), family) !=
            families.end());
    }
  }
  CHECK(families.size() == expected);

  // enumeration is capped at 8 cells
  std::vector<BoxDomain> many;
  for (int i = 0; i < 9; ++i)
    many.push_back(interval(10.0 * i, 10.0 * i + 0.1));
  InteractionGraph big(std::move(many), S);
  CHECK(big.size() == 9);
  CHECK_THROWS_AS(big.separable_families(), std::invalid_argument);

  CHECK_THROWS_AS(InteractionGraph({}, S), std::invalid_argument);
  CHECK_THROWS_AS(
      InteractionGraph({BoxDomain({0.0, 0.0}, {1.0, 1.0})}, S),
      std::invalid_argument);
}

TEST_CASE("max independent weight matches a branching oracle") {
  // pinned small cases
  CHECK(max_independent_weight(1, {}, std::vector<double>{3.5}) == 3.5);
  CHECK(max_independent_weight(2, {{0, 1}}, std::vector<double>{1.0, 4.0}) ==
        4.0);
  std::vector<int> arg;
  CHECK(max_independent_weight(3, {{0, 1}},
                               std::vector<double>{1.0, 1.0, 1.0},
                               &arg) == 2.0);
  CHECK(arg == std::vector<int>{0, 2});

  RngStream rng(20260819, 1);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 1 + static_cast<int>(rng.uniform_index(8));
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (rng.uniform() < 0.4) edges.emplace_back(i, j);
    std::vector<double> w(k);
    for (double& x : w) x = rng.uniform(0.1, 3.0);
    CHECK(max_independent_weight(k, edges, w) ==
          doctest::Approx(bruteforce_independent(k, edges, w)).epsilon(1e-12));
  }

  CHECK_THROWS_AS(max_independent_weight(9, {}, std::vector<double>(9, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(max_independent_weight(2, {{0, 2}},
                                         std::vector<double>{1.0, 1.0}),
                  std::invalid_argument);
}

TEST_CASE("gaussian lattice sum reproduces frozen series values") {
  const std::vector<double> v1 = {1.0};
  CHECK(gaussian_lattice_sum(1.0, v1, {}, 0.0) ==
        doctest::Approx(kLogSumT0).epsilon(1e-10));
  CHECK(gaussian_lattice_sum(1.0, v1, {}, 2.0) ==
        doctest::Approx(kLogSumT2).epsilon(1e-10));
  CHECK(gaussian_lattice_sum(1.0, v1, {}, 20.0) ==
        doctest::Approx(kLogSumT20).epsilon(1e-10));

  const std::vector<double> v2 = {1.0, 1.0};
  CHECK(gaussian_lattice_sum(1.0, v2, {{0, 1}}, 2.0) ==
        doctest::Approx(kLogSumPairT2).epsilon(1e-10));

  // direct in-test double sum for the coupled pair
  double direct = 0.0;
  for (int n1 = 0; n1 <= 80; ++n1)
    for (int n2 = 0; n2 <= 80; ++n2)
      direct += std::exp(-(n1 * n1 + n2 * n2 + 2.0 * n1 * n2) +
                         2.0 * (n1 + n2));
  CHECK(gaussian_lattice_sum(1.0, v2, {{0, 1}}, 2.0) ==
        doctest::Approx(std::log(direct)).epsilon(1e-12));
}

TEST_CASE("gaussian lattice sum factorizes without coupling") {
  const std::vector<double> v3 = {1.0, 1.0, 1.0};
  const double one_axis = gaussian_lattice_sum(1.0, std::vector<double>{1.0},
                                               {}, 0.0);
  CHECK(gaussian_lattice_sum(1.0, v3, {}, 0.0) ==
        doctest::Approx(3.0 * one_axis).epsilon(1e-14));

  // mixed: one coupled pair and one free axis
  const double pair = gaussian_lattice_sum(1.0, std::vector<double>{1.0, 1.0},
                                           {{0, 1}}, 2.0);
  const double single = gaussian_lattice_sum(
      1.0, std::vector<double>{1.0}, {}, 2.0);
  CHECK(gaussian_lattice_sum(1.0, v3, {{0, 1}}, 2.0) ==
        doctest::Approx(pair + single).epsilon(1e-13));
}

TEST_CASE("gaussian lattice sum weight-time rescaling invariance") {
  const std::vector<double> v = {0.5, 1.25};
  const std::vector<std::pair<int, int>> e = {{0, 1}};
  const double base = gaussian_lattice_sum(0.7, v, e, 3.2);
  for (double s : {2.0, 4.0}) {
    std::vector<double> scaled = v;
    for (double& x : scaled) x *= s;
    CHECK(gaussian_lattice_sum(0.7, scaled, e, 3.2 / s) ==
          doctest::Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("gaussian lattice sum certified tail never undershoots") {
  const std::vector<double> v1 = {1.0};
  // a tight truncation must still report at least the infinite sum
  const double coarse = gaussian_lattice_sum(1.0, v1, {}, 2.0, 3);
  CHECK(coarse >= kLogSumT2 - 1e-12);
  CHECK(coarse <= kLogSumT2 + 0.5);
  // a generous truncation reproduces the limit
  CHECK(gaussian_lattice_sum(1.0, v1, {}, 2.0, 200) ==
        doctest::Approx(kLogSumT2).epsilon(1e-12));
  // truncating before the exponent peak leaves no certifiable tail
  CHECK_THROWS_AS(gaussian_lattice_sum(1.0, v1, {}, 20.0, 5),
                  std::invalid_argument);

  CHECK_THROWS_AS(gaussian_lattice_sum(0.0, v1, {}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(gaussian_lattice_sum(1.0, v1, {}, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(gaussian_lattice_sum(1.0, std::vector<double>{}, {}, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(gaussian_lattice_sum(1.0, std::vector<double>(9, 1.0), {},
                                       1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(gaussian_lattice_sum(1.0, v1, {{0, 1}}, 1.0),
                  std::invalid_argument);
}

TEST_CASE("quadratic comparison bound closed forms") {
  // k = 1: (1 + eps) v^2 t^2 / (4c)
  CHECK(quadratic_comparison_bound(1.0, std::vector<double>{1.0}, {}, 2.0,
                                   0.1) == doctest::Approx(1.1).epsilon(1e-14));
  CHECK(quadratic_comparison_bound(2.0, std::vector<double>{3.0}, {}, 5.0,
                                   0.0) ==
        doctest::Approx(9.0 * 25.0 / 8.0).epsilon(1e-14));
  // the coupled pair may not be taken together: best singleton wins
  CHECK(quadratic_comparison_bound(1.0, std::vector<double>{1.0, 2.0},
                                   {{0, 1}}, 2.0, 0.0) ==
        doctest::Approx(4.0).epsilon(1e-14));
  // path-free third vertex joins the best endpoint
  CHECK(quadratic_comparison_bound(1.0, std::vector<double>{1.0, 1.0, 1.0},
                                   {{0, 1}}, 2.0, 0.0) ==
        doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(quadratic_comparison_bound(1.0, std::vector<double>{1.0}, {},
                                             1.0, -0.5),
                  std::invalid_argument);
}

TEST_CASE("validity threshold scan on a geometric grid") {
  const std::vector<double> v1 = {1.0};
  const auto scan = find_validity_threshold(1.0, v1, {}, 0.1, 1.0, 32.0, 6);
  REQUIRE(scan.grid.size() == 6);
  for (int i = 0; i < 6; ++i)
    CHECK(scan.grid[i] == doctest::Approx(std::exp2(i)).epsilon(1e-12));

  // the small-t regime genuinely violates the quadratic comparison
  CHECK(scan.holds == std::vector<char>{0, 0, 0, 1, 1, 1});
  CHECK(scan.found);
  CHECK(scan.threshold == doctest::Approx(8.0).epsilon(1e-12));
  REQUIRE(scan.violations.size() == 3);
  CHECK(scan.violations[0] == doctest::Approx(1.0));
  CHECK(scan.violations[2] == doctest::Approx(4.0));

  // the t = 2 entry reproduces the standalone comparison
  CHECK(scan.log_sums[1] == doctest::Approx(kLogSumT2).epsilon(1e-10));
  CHECK(scan.bounds[1] == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(scan.log_sums[1] > scan.bounds[1]);

  // a larger allowance moves the threshold down
  const auto loose = find_validity_threshold(1.0, v1, {}, 1.0, 1.0, 32.0, 6);
  CHECK(loose.found);
  CHECK(loose.threshold == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(loose.threshold < scan.threshold);

  // a grid that never reaches the valid regime reports no threshold
  const auto never =
      find_validity_threshold(1.0, v1, {}, 1e-6, 1.0, 4.0, 5);
  CHECK_FALSE(never.found);
  CHECK(never.threshold == kInf);
  CHECK(never.violations.size() == 5);

  CHECK_THROWS_AS(find_validity_threshold(1.0, v1, {}, 0.1, 0.0, 4.0, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(find_validity_threshold(1.0, v1, {}, 0.1, 4.0, 2.0, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(find_validity_threshold(1.0, v1, {}, 0.1, 1.0, 4.0, 1),
                  std::invalid_argument);
}

TEST_CASE("laplace growth coefficients for cell layouts") {
  const auto S = InteractionWindow::ball(1, 1.0);

  // single admissible cell: coefficient 1 / (2a)
  const auto single = upper_lap_bound({interval(-0.2, 0.2)},
                                      std::vector<double>{1.0}, S, 2.0, 0.1);
  CHECK(single.coefficient == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(single.certified == doctest::Approx(0.275).epsilon(1e-14));
  CHECK(single.arg_family == std::vector<int>{0});

  // two cells far apart: both enter one family, coefficient doubles to 1/a
  const auto split = upper_lap_bound({interval(0.0, 0.4), interval(1.6, 2.0)},
                                     std::vector<double>{1.0, 1.0}, S, 1.0,
                                     0.0);
  CHECK(split.coefficient == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(split.arg_family == std::vector<int>{0, 1});

  // two cells whose differences all stay inside the window: only singletons
  const auto merged = upper_lap_bound({interval(0.0, 0.4), interval(0.5, 0.9)},
                                      std::vector<double>{1.0, 1.0}, S, 1.0,
                                      0.0);
  CHECK(merged.coefficient == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(merged.arg_family.size() == 1);

  // a cell with internal differences escaping the window is refused by name
  try {
    upper_lap_bound({interval(-0.2, 0.2), interval(3.0, 5.5)},
                    std::vector<double>{1.0, 1.0}, S, 1.0, 0.1);
    FAIL("expected a rejection");
  } catch (const std::invalid_argument& err) {
    CHECK(std::string(err.what()).find("cell 1") != std::string::npos);
  }
  CHECK_THROWS_AS(upper_lap_bound({interval(0.0, 0.1)},
                                  std::vector<double>{1.0}, S, 0.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(upper_lap_bound({interval(0.0, 0.1)},
                                  std::vector<double>{1.0, 2.0}, S, 1.0, 0.1),
                  std::invalid_argument);
}

TEST_CASE("count tail bounds: plug-in values") {
  const BoxDomain unit = interval(0.0, 1.0);

  // free process, unit window, one point
  const auto zero_phi = InteractionModel::pairwise(
      std::make_shared<TabulatedPotential>(
          std::vector<std::pair<double, double>>{{0.0, 0.0}, {1.0, 0.0}}));
  CHECK(tail_lower_bound(unit, 1, zero_phi, 1.0, 0.0) ==
        doctest::Approx(-1.0).epsilon(1e-14));

  // Strauss pair cost 1 within reach 1 on a unit interval: every pair counts
  const auto strauss = InteractionModel::pairwise(
      std::make_shared<StraussPotential>(1.0, 1.0));
  CHECK(tail_lower_bound(unit, 2, strauss, 1.0, 1.0) ==
        doctest::Approx(-3.0 - std::log(2.0) - 1.0).epsilon(1e-14));
  CHECK(tail_lower_bound(unit, 0, strauss, 1.0, 1.0) ==
        doctest::Approx(-3.0).epsilon(1e-14));

  // hardcore never bounds two points from below
  const auto hardcore = InteractionModel::pairwise(
      std::make_shared<HardcorePotential>(0.3));
  CHECK(tail_lower_bound(unit, 2, hardcore, 1.0, 0.3) == -kInf);
  CHECK(tail_lower_bound(unit, 1, hardcore, 1.0, 0.3) ==
        doctest::Approx(-1.6).epsilon(1e-14));

  // area model: energy at most n |B(0, R)|
  const auto area = InteractionModel::area(1, 0.5);
  CHECK(tail_lower_bound(unit, 3, area, 1.0, 1.0) ==
        doctest::Approx(-3.0 - std::log(6.0) - 3.0).epsilon(1e-14));

  CHECK_THROWS_AS(tail_lower_bound(unit, -1, strauss, 1.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(tail_lower_bound(unit, 1, strauss, 0.0, 1.0),
                  std::invalid_argument);

  // upper bound plug-ins
  CHECK(tail_upper_bound({unit}, std::vector<int>{2}, 1.0, {}) ==
        doctest::Approx(-std::log(2.0)).epsilon(1e-14));
  CHECK(tail_upper_bound({unit}, std::vector<int>{0}, 1.0, {}) ==
        doctest::Approx(1.0).epsilon(1e-14));
  const std::vector<BoxDomain> two = {interval(0.0, 1.0), interval(2.0, 3.0)};
  const double no_edge =
      tail_upper_bound(two, std::vector<int>{1, 1}, 0.7, {});
  const double with_edge =
      tail_upper_bound(two, std::vector<int>{1, 1}, 0.7, {{0, 1}});
  CHECK(no_edge == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(with_edge == doctest::Approx(2.0 - 0.7).epsilon(1e-14));

  CHECK_THROWS_AS(tail_upper_bound({unit}, std::vector<int>{-1}, 1.0, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(tail_upper_bound({unit}, std::vector<int>{1, 2}, 1.0, {}),
                  std::invalid_argument);
}

TEST_CASE("count tail bounds sandwich the exact saturated-pair law") {
  // pair cost 1 whenever two points are within reach 1: on a unit interval
  // every pair interacts, so the count law is proportional to
  // exp(-n(n-1)/2) / n! and normalizes in closed form
  const BoxDomain unit = interval(0.0, 1.0);
  const auto strauss = InteractionModel::pairwise(
      std::make_shared<StraussPotential>(1.0, 1.0));

  std::vector<double> weight;
  double z_norm = 0.0;
  for (int n = 0; n <= 12; ++n) {
    double w = -std::lgamma(n + 1.0) - 0.5 * n * (n - 1.0);
    weight.push_back(w);
    z_norm += std::exp(w);
  }
  for (int n = 0; n <= 6; ++n) {
    const double exact = weight[n] - std::log(z_norm);
    const double lower = tail_lower_bound(unit, n, strauss, 1.0, 1.0);
    const double upper =
        tail_upper_bound({unit}, std::vector<int>{n}, 1.0, {});
    CHECK(lower <= exact + 1e-12);
    CHECK(exact <= upper + 1e-12);
  }
}

TEST_CASE("weak interaction budgets and their decay") {
  // area model: each point contributes at most one ball volume
  const auto area = InteractionModel::area(1, 1.0);
  const auto flat = weak_condition_budget(area, 5, std::exp(2.0));
  CHECK(flat.budget == doctest::Approx(10.0).epsilon(1e-14));
  CHECK(flat.ratio ==
        doctest::Approx(10.0 / (std::exp(2.0) * 2.0)).epsilon(1e-12));

  // soft shell p = 1 at x = e^4: separation radius 1/8, pair cost e^{-4}
  const auto shell = InteractionModel::pairwise(
      std::make_shared<SoftShellPotential>(1.0, 2.0));
  const auto soft = weak_condition_budget(shell, 10, std::exp(4.0));
  CHECK(soft.radius == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(soft.budget == doctest::Approx(45.0 * std::exp(-4.0)).epsilon(1e-12));

  // along x = e^2, e^4, e^8 with n = ceil(1.1 x), the budget loses ground
  // against x log x
  std::vector<double> ratios;
  for (double logx : {2.0, 4.0, 8.0}) {
    const double x = std::exp(logx);
    const long n = static_cast<long>(std::ceil(1.1 * x));
    ratios.push_back(weak_condition_budget(shell, n, x).ratio);
  }
  CHECK(ratios[0] > ratios[1]);
  CHECK(ratios[1] > ratios[2]);
  CHECK(ratios[2] < 0.1);

  // bounded-range models with a hard floor never qualify
  const auto strauss = InteractionModel::pairwise(
      std::make_shared<StraussPotential>(1.0, 1.0));
  CHECK_THROWS_AS(weak_condition_budget(strauss, 5, std::exp(2.0)),
                  std::invalid_argument);
  const auto hardcore = InteractionModel::pairwise(
      std::make_shared<HardcorePotential>(0.5));
  CHECK_THROWS_AS(weak_condition_budget(hardcore, 5, std::exp(2.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(weak_condition_budget(shell, 5, 1.0), std::invalid_argument);
}

namespace {

IdsEstimate synthetic_ids(const std::vector<double>& lambdas,
                          double (*log_n)(double)) {
  IdsEstimate ids;
  ids.lambdas = lambdas;
  for (double lam : lambdas) {
    const double n = std::exp(log_n(lam));
    ids.n_hat.push_back(n);
    ids.ci_low.push_back(n);
    ids.ci_high.push_back(n);
  }
  return ids;
}

std::vector<double> lambda_grid(double lo, double hi, int points) {
  std::vector<double> out;
  for (int i = 0; i < points; ++i)
    out.push_back(lo + (hi - lo) * i / (points - 1));
  return out;
}

}  // namespace

TEST_CASE("slope fits invert synthetic decay laws exactly") {
  const auto u0 = SingleSitePotential::radial({{0.0, -1.0}, {1.0, 0.0}});

  // counting decay exp(lambda log|lambda|) makes every ordinate exactly one
  const auto ids = synthetic_ids(
      lambda_grid(-8.0, -2.0, 13),
      [](double lam) { return lam * std::log(-lam); });
  const auto fit = pastur_slope_fit(ids, u0);
  CHECK(fit.plateau == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.target == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fit.valid_points == 13);
  // the window keeps the most negative third, ascending
  REQUIRE(fit.lambdas.size() == 5);
  CHECK(fit.lambdas.front() == doctest::Approx(-8.0));
  CHECK(fit.lambdas.back() == doctest::Approx(-6.0));
  CHECK(std::is_sorted(fit.lambdas.begin(), fit.lambdas.end()));
  CHECK(fit.spread < 1e-12);
  CHECK(fit.ci_high - fit.ci_low < 1e-12);

  // a refined grid leaves the plateau untouched
  const auto fine = pastur_slope_fit(
      synthetic_ids(lambda_grid(-8.0, -2.0, 49),
                    [](double lam) { return lam * std::log(-lam); }),
      u0);
  CHECK(fine.plateau == doctest::Approx(fit.plateau).epsilon(1e-12));

  // quadratic law exp(-lambda^2) against pair floor 2 and unit norm
  const auto quad_ids = synthetic_ids(
      lambda_grid(-8.0, -2.0, 13), [](double lam) { return -lam * lam; });
  const auto quad = quadratic_slope_fit(quad_ids, 2.0, 1.0);
  CHECK(quad.plateau == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(quad.target == doctest::Approx(-1.0).epsilon(1e-14));

  // full-window option uses every valid point
  SlopeFitOptions wide;
  wide.window_fraction = 1.0;
  CHECK(pastur_slope_fit(ids, u0, wide).lambdas.size() == 13);
}

TEST_CASE("slope fit filters and failure modes") {
  const auto u0 = SingleSitePotential::radial({{0.0, -2.0}, {1.0, 0.0}});

  IdsEstimate ids;
  ids.lambdas = lambda_grid(-8.0, -0.5, 16);
  for (double lam : ids.lambdas) {
    const double n = std::exp(0.5 * lam * std::log(std::abs(lam)));
    ids.n_hat.push_back(n);
    ids.ci_low.push_back(0.9 * n);
    ids.ci_high.push_back(1.1 * n);
  }
  // poison two deep grid points: a zero estimate and a wide interval
  ids.n_hat[0] = 0.0;
  ids.ci_high[1] = ids.n_hat[1] * 1.7;
  ids.ci_low[1] = ids.n_hat[1] * 0.5;

  const auto fit = pastur_slope_fit(ids, u0);
  // lambda >= -1 never qualifies, nor do the two poisoned points
  const std::size_t beyond =
      std::count_if(ids.lambdas.begin(), ids.lambdas.end(),
                    [](double lam) { return lam < -1.0; });
  CHECK(fit.valid_points == beyond - 2);
  for (double lam : fit.lambdas) {
    CHECK(lam < -1.0);
    CHECK(lam != doctest::Approx(ids.lambdas[0]));
    CHECK(lam != doctest::Approx(ids.lambdas[1]));
  }
  // ordinates of the synthetic law sit at 0.5 = 1/|u0(0)| target scale
  CHECK(fit.plateau == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.target == doctest::Approx(0.5).epsilon(1e-14));

  // no valid point at all
  IdsEstimate empty;
  empty.lambdas = {-0.5, -0.25};
  empty.n_hat = {0.5, 0.6};
  empty.ci_low = {0.5, 0.6};
  empty.ci_high = {0.5, 0.6};
  CHECK_THROWS_AS(pastur_slope_fit(empty, u0), std::runtime_error);

  // a profile vanishing at the origin has no decay scale
  const auto off = SingleSitePotential::radial({{0.0, 0.0}, {1.0, 0.0}});
  CHECK_THROWS_AS(pastur_slope_fit(ids, off), std::invalid_argument);
  CHECK_THROWS_AS(quadratic_slope_fit(ids, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(quadratic_slope_fit(ids, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("counting estimates stay below scheduled exponential bounds") {
  IdsEstimate ids;
  ids.lambdas = lambda_grid(-6.0, -1.0, 11);
  for (double lam : ids.lambdas) {
    const double n = std::exp(lam);  // log n_hat = lambda exactly
    ids.n_hat.push_back(n);
    ids.ci_low.push_back(n);
    ids.ci_high.push_back(n);
  }

  // with log-Laplace upper 1e-4 at t = 1, the bound lambda + 1e-4 dominates
  const std::vector<LaplacePoint> good = {{0.0, 0.0}, {1.0, 1e-4}};
  const auto pass = ids_upper_bound_check(ids, good);
  CHECK(pass.all_pass);
  for (const auto& row : pass.rows) {
    CHECK(row.pass);
    CHECK(row.best_t == 1.0);  // tighter than the degenerate t = 0 bound
    CHECK(row.bound == doctest::Approx(row.lambda + 1e-4));
  }

  // an understated transform breaks the comparison when the estimate has no
  // upward slack
  const std::vector<LaplacePoint> tight = {{1.0, -0.5}};
  const auto fail = ids_upper_bound_check(ids, tight);
  CHECK_FALSE(fail.all_pass);
  CHECK(fail.rows.front().slack == 0.0);

  // upward CI room restores the margin
  for (auto& hi : ids.ci_high) hi *= 2.0;
  const auto saved = ids_upper_bound_check(ids, tight);
  CHECK(saved.all_pass);
  CHECK(saved.rows.front().slack == doctest::Approx(std::log(2.0)));

  // zero estimates pass vacuously
  ids.n_hat.assign(ids.n_hat.size(), 0.0);
  CHECK(ids_upper_bound_check(ids, tight).all_pass);

  CHECK_THROWS_AS(ids_upper_bound_check(ids, {}), std::invalid_argument);
  CHECK_THROWS_AS(ids_upper_bound_check(ids, {{-1.0, 0.0}}),
                  std::invalid_argument);
}
