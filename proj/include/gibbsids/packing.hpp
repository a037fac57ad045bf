#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gibbsids/geometry.hpp"
#include "gibbsids/site_potential.hpp"
#include "gibbsids/window.hpp"

namespace gibbsids {

// A finite point set whose pairwise differences all avoid the window S.
struct SeparatedPacking {
  std::vector<Point> points;
  double objective = 0.0;
};

struct NormEstimate {
  double value = 0.0;  // branch-and-bound optimum over the candidate set
  double slack = 0.0;  // off-lattice allowance (continuity modulus x cap)
  SeparatedPacking witness;
  std::size_t cap = 0;  // a-priori packing-size bound from inradius(S)
  std::size_t nodes_explored = 0;
};

// Lattice restriction of sup { sum_j u(x_j)^2 : diffs outside S } with
// u(x) = -u0(-x); candidates live on the resolution-spaced lattice over
// supp u and the reported value is a certified lower bound of the sup.
// The witness is a feasible packing attaining it.
NormEstimate norm_u_S(const SingleSitePotential& u0, const InteractionWindow& S,
                      double resolution);

// Piecewise-constant majorant on the half-open cells (0,1/n]^d + j/n:
// each cell carries the supremum of u over its closure (per-axis sampling
// with profile-knot refinement, exact for the piecewise-linear profiles).
class Staircase {
 public:
  Staircase(const SingleSitePotential& u0, int dim, int n);

  int n() const { return n_; }
  int dim() const { return dim_; }
  double value(std::span<const double> x) const;

  struct Cell {
    std::vector<long> index;  // cell = (index/n, (index+1)/n]^d
    double value;
  };
  const std::vector<Cell>& cells() const { return cells_; }
  Point cell_center(const Cell& c) const;

 private:
  int dim_;
  int n_;
  std::vector<Cell> cells_;  // nonzero cells, lexicographic index order
};

// Cell-closure relaxations on the staircase's own lattice: a pair of cells is
// compatible as soon as some point of the closed difference hull escapes S,
// so the optimum dominates the continuum supremum for u_n. The plain-sum
// variant bounds sum_j u_n(x_j) (potential floors); the squared variant
// bounds the packing norm itself. Witness points are cell centers and need
// not form a feasible packing.
NormEstimate staircase_norm_upper(const Staircase& un,
                                  const InteractionWindow& S);
NormEstimate staircase_sum_upper(const Staircase& un,
                                 const InteractionWindow& S);

// Norm search restricted to the staircase's cell-center lattice with the
// cell suprema as gains: a genuine packing of u_n, so the witness is
// feasible and the value is squeezed between ||u||^2_{S before erosion} and
// the cell-closure bound once S has been eroded by the center-snap distance.
NormEstimate staircase_anchor_norm(const Staircase& un,
                                   const InteractionWindow& S);

// ||u_n||^2 over the eroded window S_{b/n} for each n, on the cell-aligned
// lattice; b = 0 skips the erosion. With b >= 2 sqrt(d) every value
// dominates ||u||^2_S and the sequence tightens toward it as n grows.
std::vector<NormEstimate> upper2_convergence(const SingleSitePotential& u0,
                                             const InteractionWindow& S,
                                             double b,
                                             const std::vector<int>& ns);

}  // namespace gibbsids
