#pragma once

#include <cstdint>
#include <vector>

#include "gibbsids/geometry.hpp"
#include "gibbsids/interaction.hpp"
#include "gibbsids/rng.hpp"

namespace gibbsids {

// Finite-volume target: density proportional to exp(-U_window(eta + gamma))
// against the unit-intensity Poisson reference on the window. Boundary points
// must lie outside the window; they contribute to local energies but are
// never touched by the chain.
struct GibbsTarget {
  GibbsTarget(InteractionModel model_, BoxDomain window_,
              PointConfiguration boundary_);
  static GibbsTarget free_boundary(InteractionModel model_, BoxDomain window_);

  InteractionModel model;
  BoxDomain window;
  PointConfiguration boundary;
};

struct ChainState {
  ChainState(PointConfiguration configuration_, std::uint64_t stream_id_);
  PointConfiguration configuration;
  std::uint64_t step = 0;
  std::uint64_t stream_id = 0;
};

ChainState initial_state(const GibbsTarget& target, std::uint64_t stream_id);

Point uniform_point(const BoxDomain& window, RngStream& rng);

// Count ~ Poisson(z |window|), locations i.i.d. uniform.
PointConfiguration sample_poisson(const BoxDomain& window, double intensity,
                                  RngStream& rng);

// Acceptance probabilities of the three proposal kinds, exposed so the
// detailed-balance flow products can be checked directly.
double birth_acceptance(double local_energy, std::size_t n_before,
                        double volume);
double death_acceptance(double local_energy, std::size_t n_before,
                        double volume);
double move_acceptance(double delta_energy);

// One proposal (birth/death/move, probability 1/3 each; move displacement
// uniform in a ball of radius range/2). Returns true iff accepted; infeasible
// or out-of-window proposals count as rejected.
bool mcmc_step(ChainState& state, const GibbsTarget& target, RngStream& rng);

struct ChainResult {
  std::vector<PointConfiguration> samples;
  double acceptance_rate = 0.0;
  // Effective sample size of the retained window-count series.
  double count_ess = 0.0;
};

// Runs `steps` proposals from the empty configuration, retaining every
// `thinning`-th configuration after `burn_in`.
ChainResult run_chain(const GibbsTarget& target, std::uint64_t steps,
                      std::uint64_t burn_in, std::uint64_t thinning,
                      RngStream& rng);

}  // namespace gibbsids
