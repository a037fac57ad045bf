#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "gibbsids/geometry.hpp"
#include "gibbsids/site_potential.hpp"

namespace gibbsids {

// Uniform grid of interior nodes of a box; the spacing must divide every side
// length (Dirichlet conditions live on the absent boundary layer).
class Grid {
 public:
  Grid(BoxDomain domain, double spacing);
  const BoxDomain& domain() const { return domain_; }
  double spacing() const { return spacing_; }
  int dim() const { return domain_.dim(); }
  const std::vector<int>& nodes_per_axis() const { return nodes_; }
  std::size_t size() const { return size_; }
  // axis 0 varies fastest in the flat index
  Point node(std::size_t flat) const;
  std::size_t stride(int axis) const;

 private:
  BoxDomain domain_;
  double spacing_;
  std::vector<int> nodes_;
  std::size_t size_;
};

// -Laplacian + V on the grid: diagonal 2d/h^2 + V(node), off-diagonal -1/h^2
// between axis neighbors. Symmetric, banded with bandwidth = stride of the
// last axis.
class DiscreteOperator {
 public:
  DiscreteOperator(Grid grid, std::vector<double> potential_at_nodes);
  const Grid& grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }
  int bandwidth() const { return bandwidth_; }
  double diagonal(std::size_t i) const { return diag_[i]; }
  double coupling() const { return off_; }
  // true iff |i - j| is an axis stride and the nodes are grid neighbors
  bool coupled(std::size_t i, std::size_t j) const;
  double infinity_norm() const;
  std::vector<double> dense() const;  // row-major, for small oracles
  void dump(std::ostream& os) const;  // "i j value" triplets, upper part

 private:
  Grid grid_;
  std::vector<double> diag_;
  double off_;
  int bandwidth_;
};

DiscreteOperator discretize(const PointConfiguration& config,
                            const SingleSitePotential& u0, const Grid& grid);

// Number of eigenvalues <= lambda by the inertia of the shifted operator
// (count of negative pivots in a banded LDL^T). A zero pivot means lambda
// sits on an eigenvalue; the count is retried at lambda + 1e-9 * scale so the
// "<=" convention is preserved. Throws after 3 failed retries.
std::size_t count_eigenvalues_leq(const DiscreteOperator& op, double lambda);

// Tensor sums of (4/h^2) sin^2(k pi / (2 (n_axis + 1))), sorted ascending.
std::vector<double> dirichlet_laplacian_spectrum(const Grid& grid);

}  // namespace gibbsids
