#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gibbsids/grid_operator.hpp"
#include "gibbsids/interaction.hpp"
#include "gibbsids/rng.hpp"
#include "gibbsids/site_potential.hpp"

namespace gibbsids {

// Where replica configurations come from: a Poisson process of the given
// intensity when `interaction` is empty, otherwise the interacting chain at
// unit reference intensity with a free boundary. The chain is burned in once
// and replicas are retained `spacing` proposals apart (0 picks conservative
// defaults scaled by the expected point count).
struct IdsSource {
  std::optional<InteractionModel> interaction;
  double intensity = 1.0;
  std::uint64_t burn_in = 0;
  std::uint64_t spacing = 0;
};

struct IdsEstimate {
  std::vector<double> lambdas;
  std::vector<double> n_hat;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  double box_side = 0.0;
  double grid_spacing = 0.0;
  std::size_t replicas = 0;
  std::string model_id;
  std::uint64_t seed = 0;
};

// Per replica: sample a configuration on the observation box padded by the
// potential support plus the interaction range, discretize on the box, count
// eigenvalues <= lambda; the mean count is normalized by the box volume.
IdsEstimate estimate_ids(const IdsSource& source,
                         const SingleSitePotential& u0,
                         std::vector<double> lambdas, int dim, double box_side,
                         double grid_spacing, std::size_t replicas,
                         RngStream& rng);

}  // namespace gibbsids
