#include "gibbsids/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gibbsids/stats.hpp"

namespace gibbsids {

GibbsTarget::GibbsTarget(InteractionModel model_, BoxDomain window_,
                         PointConfiguration boundary_)
    : model(std::move(model_)),
      window(std::move(window_)),
      boundary(std::move(boundary_)) {
  for (std::size_t i = 0; i < boundary.size(); ++i)
    if (window.contains(boundary.point(i)))
      throw std::invalid_argument(
          "GibbsTarget: boundary point inside the window");
}

GibbsTarget GibbsTarget::free_boundary(InteractionModel model_,
                                       BoxDomain window_) {
  PointConfiguration empty(window_.padded(model_.range()));
  return GibbsTarget(std::move(model_), std::move(window_), std::move(empty));
}

ChainState::ChainState(PointConfiguration configuration_,
                       std::uint64_t stream_id_)
    : configuration(std::move(configuration_)), stream_id(stream_id_) {}

ChainState initial_state(const GibbsTarget& target, std::uint64_t stream_id) {
  return ChainState(PointConfiguration(target.window), stream_id);
}

Point uniform_point(const BoxDomain& window, RngStream& rng) {
  Point x(window.dim());
  for (int k = 0; k < window.dim(); ++k)
    x[k] = rng.uniform(window.lo(k), window.hi(k));
  return x;
}

PointConfiguration sample_poisson(const BoxDomain& window, double intensity,
                                  RngStream& rng) {
  if (!(intensity > 0.0))
    throw std::invalid_argument("sample_poisson: intensity must be positive");
  const std::uint64_t n = rng.poisson(intensity * window.volume());
  PointConfiguration c(window);
  const double tol2 = kDistinctTolerance * kDistinctTolerance;
  for (std::uint64_t j = 0; j < n; ++j) {
    for (;;) {
      Point x = uniform_point(window, rng);
      bool clear = true;
      for (std::size_t i = 0; i < c.size(); ++i)
        if (squared_distance(c.point(i), x) <= tol2) {
          clear = false;
          break;
        }
      if (clear) {
        c.push_back(x);
        break;
      }
    }
  }
  return c;
}

double birth_acceptance(double local_energy, std::size_t n_before,
                        double volume) {
  if (local_energy == kInfiniteEnergy) return 0.0;
  return std::min(1.0, volume * std::exp(-local_energy) /
                           static_cast<double>(n_before + 1));
}

double death_acceptance(double local_energy, std::size_t n_before,
                        double volume) {
  return std::min(1.0, static_cast<double>(n_before) *
                           std::exp(local_energy) / volume);
}

double move_acceptance(double delta_energy) {
  if (delta_energy == kInfiniteEnergy) return 0.0;
  return std::min(1.0, std::exp(-delta_energy));
}

namespace {

bool coincides(std::span<const double> x, const PointConfiguration& c,
               std::size_t skip = static_cast<std::size_t>(-1)) {
  const double tol2 = kDistinctTolerance * kDistinctTolerance;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (i != skip && squared_distance(c.point(i), x) <= tol2) return true;
  return false;
}

// Uniform in the closed ball of the given radius (rejection from the cube).
Point uniform_displacement(int dim, double radius, RngStream& rng) {
  for (;;) {
    Point v(dim);
    double r2 = 0.0;
    for (int k = 0; k < dim; ++k) {
      v[k] = rng.uniform(-radius, radius);
      r2 += v[k] * v[k];
    }
    if (r2 <= radius * radius) return v;
  }
}

}  // namespace

bool mcmc_step(ChainState& state, const GibbsTarget& target, RngStream& rng) {
  PointConfiguration& eta = state.configuration;
  const double volume = target.window.volume();
  const std::size_t n = eta.size();
  const double kind = rng.uniform();
  ++state.step;

  if (kind < 1.0 / 3.0) {  // birth
    Point x = uniform_point(target.window, rng);
    if (coincides(x, eta) || coincides(x, target.boundary)) return false;
    const double h = target.model.local_energy(x, eta, target.boundary);
    if (rng.uniform() < birth_acceptance(h, n, volume)) {
      eta.push_back(x);
      return true;
    }
    return false;
  }

  if (kind < 2.0 / 3.0) {  // death
    if (n == 0) return false;
    const std::size_t i = rng.uniform_index(n);
    Point x(eta.point(i).begin(), eta.point(i).end());
    PointConfiguration rest = eta;
    rest.swap_remove(i);
    const double h = target.model.local_energy(x, rest, target.boundary);
    if (rng.uniform() < death_acceptance(h, n, volume)) {
      eta.swap_remove(i);
      return true;
    }
    return false;
  }

  // move: remove one point, re-insert displaced
  if (n == 0) return false;
  const std::size_t i = rng.uniform_index(n);
  Point x(eta.point(i).begin(), eta.point(i).end());
  Point v = uniform_displacement(eta.dim(), 0.5 * target.model.range(), rng);
  Point y(x);
  for (int k = 0; k < eta.dim(); ++k) y[k] += v[k];
  if (!target.window.contains(y)) return false;
  if (coincides(y, eta, i) || coincides(y, target.boundary)) return false;
  PointConfiguration rest = eta;
  rest.swap_remove(i);
  const double h_old = target.model.local_energy(x, rest, target.boundary);
  const double h_new = target.model.local_energy(y, rest, target.boundary);
  const double delta =
      h_new == kInfiniteEnergy ? kInfiniteEnergy : h_new - h_old;
  if (rng.uniform() < move_acceptance(delta)) {
    eta.set_point(i, y);
    return true;
  }
  return false;
}

ChainResult run_chain(const GibbsTarget& target, std::uint64_t steps,
                      std::uint64_t burn_in, std::uint64_t thinning,
                      RngStream& rng) {
  if (burn_in >= steps)
    throw std::invalid_argument("run_chain: burn_in must be below steps");
  if (thinning == 0)
    throw std::invalid_argument("run_chain: thinning must be positive");
  ChainResult out;
  ChainState state = initial_state(target, rng.stream_id());
  std::uint64_t accepted = 0;
  for (std::uint64_t i = 1; i <= steps; ++i) {
    if (mcmc_step(state, target, rng)) ++accepted;
    if (i > burn_in && (i - burn_in) % thinning == 0)
      out.samples.push_back(state.configuration);
  }
  out.acceptance_rate = static_cast<double>(accepted) / steps;
  std::vector<double> counts;
  counts.reserve(out.samples.size());
  for (const auto& s : out.samples)
    counts.push_back(static_cast<double>(s.size()));
  out.count_ess = effective_sample_size(counts);
  return out;
}

}  // namespace gibbsids
