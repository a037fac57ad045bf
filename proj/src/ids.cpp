#include "gibbsids/ids.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gibbsids/sampler.hpp"
#include "gibbsids/stats.hpp"

namespace gibbsids {

IdsEstimate estimate_ids(const IdsSource& source,
                         const SingleSitePotential& u0,
                         std::vector<double> lambdas, int dim, double box_side,
                         double grid_spacing, std::size_t replicas,
                         RngStream& rng) {
  if (replicas < 1)
    throw std::invalid_argument("estimate_ids: need at least one replica");
  if (!(box_side > 2.0 * u0.support_radius()))
    throw std::invalid_argument(
        "estimate_ids: box side must exceed twice the potential support");
  if (lambdas.empty())
    throw std::invalid_argument("estimate_ids: empty lambda grid");
  std::sort(lambdas.begin(), lambdas.end());

  const BoxDomain box = BoxDomain::centered_cube(dim, box_side);
  const Grid grid(box, grid_spacing);
  const double pad =
      u0.support_radius() +
      (source.interaction ? source.interaction->range() : 0.0);
  const BoxDomain sampling_box = box.padded(pad);
  const double expected =
      (source.interaction ? 1.0 : source.intensity) * sampling_box.volume();

  std::optional<GibbsTarget> target;
  std::optional<ChainState> state;
  std::uint64_t spacing = 0;
  if (source.interaction) {
    target = GibbsTarget::free_boundary(*source.interaction, sampling_box);
    state = initial_state(*target, rng.stream_id());
    const std::uint64_t burn =
        source.burn_in > 0
            ? source.burn_in
            : static_cast<std::uint64_t>(1e4 * std::ceil(expected));
    spacing = source.spacing > 0
                  ? source.spacing
                  : std::max<std::uint64_t>(
                        100, 20 * static_cast<std::uint64_t>(
                                      std::ceil(expected)));
    for (std::uint64_t i = 0; i < burn; ++i) mcmc_step(*state, *target, rng);
  }

  const double volume = box.volume();
  std::vector<std::vector<double>> counts(
      lambdas.size(), std::vector<double>(replicas, 0.0));
  for (std::size_t r = 0; r < replicas; ++r) {
    PointConfiguration config(sampling_box);
    if (source.interaction) {
      for (std::uint64_t i = 0; i < spacing; ++i)
        mcmc_step(*state, *target, rng);
      config = state->configuration;
    } else {
      config = sample_poisson(sampling_box, source.intensity, rng);
    }
    const DiscreteOperator op = discretize(config, u0, grid);
    for (std::size_t l = 0; l < lambdas.size(); ++l)
      counts[l][r] =
          static_cast<double>(count_eigenvalues_leq(op, lambdas[l])) / volume;
  }

  IdsEstimate out;
  out.lambdas = std::move(lambdas);
  out.box_side = box_side;
  out.grid_spacing = grid_spacing;
  out.replicas = replicas;
  out.seed = rng.seed();
  out.model_id =
      (source.interaction ? source.interaction->id()
                          : "poisson(z=" + std::to_string(source.intensity) +
                                ")") +
      "|" + u0.id();
  for (const auto& per_lambda : counts) {
    const MeanVar mv = mean_var(per_lambda);
    out.n_hat.push_back(mv.mean);
    const double half = 1.959963984540054 * mv.std_error();
    out.ci_low.push_back(std::max(0.0, mv.mean - half));
    out.ci_high.push_back(mv.mean + half);
  }
  return out;
}

}  // namespace gibbsids
