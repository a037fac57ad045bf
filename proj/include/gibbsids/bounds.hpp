// Certified finite bounds: coupled Gaussian lattice sums with tail control,
// independent-family quadratic growth coefficients for Laplace transforms,
// two-sided bounds on the count tail P(M = n), and weak-interaction budgets.
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "gibbsids/geometry.hpp"
#include "gibbsids/interaction.hpp"
#include "gibbsids/window.hpp"

namespace gibbsids {

// Pair structure of a finite cell layout relative to a window S: cells i and j
// are "linked" when every difference x - y with x in the closure of cell i and
// y in the closure of cell j lies in S (checked exactly on the difference
// box). A family of cells is "separable" when no pair inside it is linked,
// i.e. every pair admits a difference escaping S.
class InteractionGraph {
 public:
  InteractionGraph(std::vector<BoxDomain> cells, const InteractionWindow& S);

  int size() const { return static_cast<int>(cells_.size()); }
  const std::vector<BoxDomain>& cells() const { return cells_; }

  bool linked(int i, int j) const;

  // linked pairs (i < j)
  std::vector<std::pair<int, int>> edges() const;

  // no pair of the family is linked
  bool separable(std::span<const int> family) const;

  // all separable families, exhaustively (size() <= 8), as sorted index lists;
  // includes the empty family
  std::vector<std::vector<int>> separable_families() const;

  // max over separable families of the summed weights, with an argmax family
  double max_separable_weight(std::span<const double> weights,
                              std::vector<int>* arg_family = nullptr) const;

 private:
  std::vector<BoxDomain> cells_;
  std::vector<char> linked_;  // row-major size() x size()
};

// Largest summed weight over the independent sets of an explicit edge graph on
// {0, .., k-1}; exhaustive enumeration, k <= 8.
double max_independent_weight(int k,
                              const std::vector<std::pair<int, int>>& edges,
                              std::span<const double> weights,
                              std::vector<int>* arg_set = nullptr);

// log of sum over n in {0,1,2,...}^k of
//   exp(-c sum_j n_j^2 - 2c sum_{(i,j) in edges} n_i n_j + t sum_j v_j n_j),
// computed exactly on a per-axis truncation of ceil(t max(v) / (2c)) plus
// ceil(40 / sqrt(c)) terms with a certified geometric tail bound added, so the
// result never undershoots the infinite sum. The sum factorizes over the
// connected components of the edge graph; a component whose truncated grid
// exceeds ~2.5e8 terms is rejected. truncation = 0 picks the default above.
double gaussian_lattice_sum(double c, std::span<const double> v,
                            const std::vector<std::pair<int, int>>& edges,
                            double t, long truncation = 0);

// Quadratic comparison value (1 + eps) * W * t^2 / (4c) with W the largest
// sum of v_j^2 over independent sets of the edge graph. gaussian_lattice_sum
// stays below this for all t beyond a finite threshold.
double quadratic_comparison_bound(double c, std::span<const double> v,
                                  const std::vector<std::pair<int, int>>& edges,
                                  double t, double eps);

// Scan of log-sum vs comparison bound over a geometric t grid.
struct ValidityScan {
  std::vector<double> grid;
  std::vector<double> log_sums;
  std::vector<double> bounds;
  std::vector<char> holds;         // log_sums[i] <= bounds[i]
  double threshold = 0.0;          // smallest grid t from which on all hold
  bool found = false;              // false when even the last grid point fails
  std::vector<double> violations;  // failing grid points below the threshold
};

ValidityScan find_validity_threshold(
    double c, std::span<const double> v,
    const std::vector<std::pair<int, int>>& edges, double eps, double t_lo,
    double t_hi, int grid_points);

// Growth coefficient for the Laplace transform of a field that is at least
// a * (number of points in the worst cell cluster): for cells whose internal
// differences all stay inside S,
//   limsup_t t^{-2} log E[exp(t X)] <= (1 + eps) * coefficient.
struct LaplaceGrowthBound {
  double coefficient = 0.0;  // max over separable families of sum v_j^2 / (2a)
  double certified = 0.0;    // (1 + eps) * coefficient
  double family_weight = 0.0;
  std::vector<int> arg_family;
};

LaplaceGrowthBound upper_lap_bound(const std::vector<BoxDomain>& cells,
                                   std::span<const double> v,
                                   const InteractionWindow& S, double a,
                                   double eps);

// log lower bound on P(M_window = n) for a Gibbs process of activity z whose
// interaction reaches no farther than R:
//   -z |window + B(0,R)| + n log|window| - log n! - sup_config U.
// The energy sup uses the exact Strauss value a n(n-1) / 2 and the pairwise
// cap (n choose 2) * sup phi for other pair potentials; -inf for hardcore
// with n >= 2 (the sup is infinite), and n |B(0,R)| caps the area model.
double tail_lower_bound(const BoxDomain& window, int n,
                        const InteractionModel& model, double z, double R);

// log upper bound on P(all cell counts equal counts[j]) when the pair cost is
// at least a on S, each cell's internal differences stay in S, and `edges`
// lists the linked cell pairs:
//   sum_j |cell_j| + sum_j (n_j log|cell_j| - log n_j!)
//   - (a/2) sum_j n_j (n_j - 1) - a sum_{(i,j) in edges} n_i n_j.
double tail_upper_bound(const std::vector<BoxDomain>& cells,
                        std::span<const int> counts, double a,
                        const std::vector<std::pair<int, int>>& edges);

// Total interaction budget of an n-point configuration once points are
// (log x)^{-1/p}-separated (soft-shell) or simply counted (area model), and
// its ratio to x log x; the ratio vanishing as x grows is what makes the
// interaction negligible for the leading tail asymptotics.
struct WeakInteractionBudget {
  double budget = 0.0;
  double ratio = 0.0;   // budget / (x log x)
  double radius = 0.0;  // half separation r(x) for shells, ball radius else
};

WeakInteractionBudget weak_condition_budget(const InteractionModel& model,
                                            long n, double x);

}  // namespace gibbsids
