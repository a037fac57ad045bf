#include "gibbsids/grid_operator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace gibbsids {

Grid::Grid(BoxDomain domain, double spacing)
    : domain_(std::move(domain)), spacing_(spacing) {
  if (!(spacing > 0.0))
    throw std::invalid_argument("Grid: spacing must be positive");
  size_ = 1;
  for (int k = 0; k < domain_.dim(); ++k) {
    const double side = domain_.side_lengths()[k];
    const double ratio = side / spacing;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-12 * ratio || rounded < 2.0)
      throw std::invalid_argument(
          "Grid: spacing must divide every side length");
    nodes_.push_back(static_cast<int>(rounded) - 1);
    size_ *= static_cast<std::size_t>(nodes_.back());
  }
}

std::size_t Grid::stride(int axis) const {
  std::size_t s = 1;
  for (int k = 0; k < axis; ++k) s *= static_cast<std::size_t>(nodes_[k]);
  return s;
}

Point Grid::node(std::size_t flat) const {
  Point x(dim());
  for (int k = 0; k < dim(); ++k) {
    const std::size_t nk = static_cast<std::size_t>(nodes_[k]);
    const std::size_t ik = flat % nk;
    flat /= nk;
    x[k] = domain_.lo(k) + spacing_ * static_cast<double>(ik + 1);
  }
  return x;
}

DiscreteOperator::DiscreteOperator(Grid grid,
                                   std::vector<double> potential_at_nodes)
    : grid_(std::move(grid)), diag_(std::move(potential_at_nodes)) {
  if (diag_.size() != grid_.size())
    throw std::invalid_argument("DiscreteOperator: potential size mismatch");
  const double h = grid_.spacing();
  off_ = -1.0 / (h * h);
  const double shift = 2.0 * grid_.dim() / (h * h);
  for (double& v : diag_) v += shift;
  bandwidth_ = static_cast<int>(grid_.stride(grid_.dim() - 1));
}

bool DiscreteOperator::coupled(std::size_t i, std::size_t j) const {
  if (i == j) return false;
  if (i > j) std::swap(i, j);
  for (int k = 0; k < grid_.dim(); ++k) {
    const std::size_t s = grid_.stride(k);
    if (j - i != s) continue;
    // neighbors along axis k iff they agree on all other axes, i.e. the
    // lower index does not sit on the last layer of axis k
    const std::size_t nk = static_cast<std::size_t>(grid_.nodes_per_axis()[k]);
    if ((i / s) % nk != nk - 1) return true;
    return false;
  }
  return false;
}

double DiscreteOperator::infinity_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    double row = std::abs(diag_[i]);
    for (int k = 0; k < grid_.dim(); ++k) {
      const std::size_t s = grid_.stride(k);
      if (i >= s && coupled(i - s, i)) row += std::abs(off_);
      if (i + s < size() && coupled(i, i + s)) row += std::abs(off_);
    }
    best = std::max(best, row);
  }
  return best;
}

std::vector<double> DiscreteOperator::dense() const {
  const std::size_t n = size();
  std::vector<double> a(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    a[i * n + i] = diag_[i];
    for (int k = 0; k < grid_.dim(); ++k) {
      const std::size_t s = grid_.stride(k);
      if (i + s < n && coupled(i, i + s)) {
        a[i * n + i + s] = off_;
        a[(i + s) * n + i] = off_;
      }
    }
  }
  return a;
}

void DiscreteOperator::dump(std::ostream& os) const {
  for (std::size_t i = 0; i < size(); ++i) {
    os << i << ' ' << i << ' ' << diag_[i] << '\n';
    for (int k = 0; k < grid_.dim(); ++k) {
      const std::size_t s = grid_.stride(k);
      if (i + s < size() && coupled(i, i + s))
        os << i << ' ' << i + s << ' ' << off_ << '\n';
    }
  }
}

DiscreteOperator discretize(const PointConfiguration& config,
                            const SingleSitePotential& u0, const Grid& grid) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    v[i] = potential_field(grid.node(i), config, u0);
  return DiscreteOperator(grid, std::move(v));
}

namespace {

// Banded LDL^T pivots of (op - lambda I); returns false on a pivot too close
// to zero relative to the scale (lambda sits essentially on an eigenvalue).
bool banded_negative_pivots(const DiscreteOperator& op, double lambda,
                            double scale, std::size_t* negatives) {
  const std::size_t n = op.size();
  const std::size_t kd = static_cast<std::size_t>(op.bandwidth());
  const std::size_t w = kd + 1;
  const double off = op.coupling();
  // column-major lower band: band[j*w + b] = entry (j + b, j), b = 0..kd
  std::vector<double> band(n * w, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    band[j * w] = op.diagonal(j) - lambda;
    for (int k = 0; k < op.grid().dim(); ++k) {
      const std::size_t s = op.grid().stride(k);
      if (j + s < n && op.coupled(j, j + s)) band[j * w + s] = off;
    }
  }
  const double tiny = 1e-12 * scale;
  std::size_t neg = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double d = band[j * w];
    if (std::abs(d) <= tiny) return false;
    if (d < 0.0) ++neg;
    const std::size_t imax = std::min(n - 1, j + kd);
    // eliminate column j from the trailing block
    for (std::size_t i = j + 1; i <= imax; ++i) {
      const double lij = band[j * w + (i - j)] / d;
      if (lij == 0.0) continue;
      double* coli = &band[i * w];
      const double* colj = &band[j * w + (i - j)];
      const std::size_t len = imax - i;
      for (std::size_t m = 0; m <= len; ++m) coli[m] -= lij * colj[m];
    }
  }
  *negatives = neg;
  return true;
}

}  // namespace

std::size_t count_eigenvalues_leq(const DiscreteOperator& op, double lambda) {
  const double scale = op.infinity_norm() + std::abs(lambda) + 1.0;
  for (int attempt = 0; attempt <= 3; ++attempt) {
    const double shifted = lambda + attempt * 1e-9 * scale;
    std::size_t neg = 0;
    if (banded_negative_pivots(op, shifted, scale, &neg)) return neg;
  }
  throw std::runtime_error(
      "count_eigenvalues_leq: factorization kept hitting zero pivots");
}

std::vector<double> dirichlet_laplacian_spectrum(const Grid& grid) {
  const double h = grid.spacing();
  std::vector<std::vector<double>> axis_eigs;
  for (int k = 0; k < grid.dim(); ++k) {
    const int nk = grid.nodes_per_axis()[k];
    std::vector<double> e(nk);
    for (int j = 1; j <= nk; ++j) {
      const double s = std::sin(j * 3.14159265358979323846 / (2.0 * (nk + 1)));
      e[j - 1] = 4.0 / (h * h) * s * s;
    }
    axis_eigs.push_back(std::move(e));
  }
  std::vector<double> spectrum{0.0};
  for (const auto& axis : axis_eigs) {
    std::vector<double> next;
    next.reserve(spectrum.size() * axis.size());
    for (double base : spectrum)
      for (double e : axis) next.push_back(base + e);
    spectrum = std::move(next);
  }
  std::sort(spectrum.begin(), spectrum.end());
  return spectrum;
}

}  // namespace gibbsids
