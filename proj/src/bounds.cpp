#include "gibbsids/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gibbsids {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// running log-sum-exp accumulator
struct LogAccumulator {
  double max = kNegInf;
  double scaled = 0.0;  // sum of exp(term - max)

  void add(double term) {
    if (term == kNegInf) return;
    if (term <= max) {
      scaled += std::exp(term - max);
    } else {
      scaled = scaled * std::exp(max - term) + 1.0;
      max = term;
    }
  }
  double log() const { return scaled > 0.0 ? max + std::log(scaled) : kNegInf; }
};

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

void validate_edges(int k, const std::vector<std::pair<int, int>>& edges,
                    const char* who) {
  for (const auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= k || j >= k || i == j)
      throw std::invalid_argument(std::string(who) + ": bad edge index");
  }
}

long long binom2(long long n) { return n * (n - 1) / 2; }

}  // namespace

InteractionGraph::InteractionGraph(std::vector<BoxDomain> cells,
                                   const InteractionWindow& S)
    : cells_(std::move(cells)) {
  if (cells_.empty())
    throw std::invalid_argument("InteractionGraph: no cells");
  const int k = size();
  for (const auto& cell : cells_)
    if (cell.dim() != S.dim())
      throw std::invalid_argument("InteractionGraph: dimension mismatch");
  linked_.assign(static_cast<std::size_t>(k) * k, 0);
  const int d = S.dim();
  Point lo(d, 0.0), hi(d, 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      // closed difference box cell_i - cell_j, exact per axis
      for (int ax = 0; ax < d; ++ax) {
        lo[ax] = cells_[i].lo(ax) - cells_[j].hi(ax);
        hi[ax] = cells_[i].hi(ax) - cells_[j].lo(ax);
      }
      const char in = S.contains_box(lo, hi) ? 1 : 0;
      linked_[static_cast<std::size_t>(i) * k + j] = in;
      linked_[static_cast<std::size_t>(j) * k + i] = in;
    }
}

bool InteractionGraph::linked(int i, int j) const {
  if (i < 0 || j < 0 || i >= size() || j >= size())
    throw std::out_of_range("InteractionGraph::linked: index");
  return linked_[static_cast<std::size_t>(i) * size() + j] != 0;
}

std::vector<std::pair<int, int>> InteractionGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < size(); ++i)
    for (int j = i + 1; j < size(); ++j)
      if (linked(i, j)) out.emplace_back(i, j);
  return out;
}

bool InteractionGraph::separable(std::span<const int> family) const {
  for (std::size_t a = 0; a < family.size(); ++a)
    for (std::size_t b = a + 1; b < family.size(); ++b)
      if (linked(family[a], family[b])) return false;
  return true;
}

std::vector<std::vector<int>> InteractionGraph::separable_families() const {
  const int k = size();
  if (k > 8)
    throw std::invalid_argument(
        "InteractionGraph: exhaustive family enumeration needs <= 8 cells");
  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> family;
    for (int j = 0; j < k; ++j)
      if (mask & (1u << j)) family.push_back(j);
    if (separable(family)) out.push_back(std::move(family));
  }
  return out;
}

double InteractionGraph::max_separable_weight(
    std::span<const double> weights, std::vector<int>* arg_family) const {
  if (static_cast<int>(weights.size()) != size())
    throw std::invalid_argument(
        "InteractionGraph: one weight per cell required");
  return max_independent_weight(size(), edges(), weights, arg_family);
}

double max_independent_weight(int k,
                              const std::vector<std::pair<int, int>>& edges,
                              std::span<const double> weights,
                              std::vector<int>* arg_set) {
  if (k < 1 || k > 8)
    throw std::invalid_argument(
        "max_independent_weight: exhaustive enumeration needs 1 <= k <= 8");
  if (static_cast<int>(weights.size()) != k)
    throw std::invalid_argument("max_independent_weight: k weights required");
  validate_edges(k, edges, "max_independent_weight");
  unsigned conflict[8] = {};
  for (const auto& [i, j] : edges) {
    conflict[i] |= 1u << j;
    conflict[j] |= 1u << i;
  }
  double best = 0.0;  // the empty set is always independent
  unsigned best_mask = 0;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    double w = 0.0;
    bool ok = true;
    for (int j = 0; j < k && ok; ++j) {
      if (!(mask & (1u << j))) continue;
      if (conflict[j] & mask) ok = false;
      w += weights[j];
    }
    if (ok && w > best) {
      best = w;
      best_mask = mask;
    }
  }
  if (arg_set) {
    arg_set->clear();
    for (int j = 0; j < k; ++j)
      if (best_mask & (1u << j)) arg_set->push_back(j);
  }
  return best;
}

namespace {

// log of the truncated sum plus a certified tail bound for one connected
// component of the quadratic form. Cross terms are nonpositive on the
// nonnegative orthant, so the tail of the coupled sum is dominated by the
// product of the per-axis one-dimensional tails.
double component_log_sum(double c, std::span<const double> v,
                         const std::vector<std::pair<int, int>>& edges,
                         std::span<const int> axes, double t, long n_trunc) {
  const int m = static_cast<int>(axes.size());
  const double terms = std::pow(static_cast<double>(n_trunc) + 1.0, m);
  if (terms > 2.5e8)
    throw std::invalid_argument(
        "gaussian_lattice_sum: truncated grid too large for one coupled "
        "component (" +
        std::to_string(static_cast<long long>(terms)) + " terms)");

  // per-axis truncated sums and certified geometric tails, in logs
  std::vector<double> log_axis(m, kNegInf);  // log(S_j + T_j)
  std::vector<double> log_tail(m, kNegInf);  // log T_j
  for (int a = 0; a < m; ++a) {
    const double va = v[axes[a]];
    LogAccumulator acc;
    for (long n = 0; n <= n_trunc; ++n)
      acc.add(-c * static_cast<double>(n) * n + t * va * n);
    const double ratio = -c * (2.0 * n_trunc + 3.0) + t * va;
    if (!(ratio < 0.0))
      throw std::invalid_argument(
          "gaussian_lattice_sum: truncation too small for a certified tail");
    const double n1 = static_cast<double>(n_trunc) + 1.0;
    log_tail[a] = -c * n1 * n1 + t * va * n1 - std::log1p(-std::exp(ratio));
    log_axis[a] = log_add(acc.log(), log_tail[a]);
  }

  // edges arrive restricted to this component; map them to local positions
  std::vector<std::pair<int, int>> local;
  local.reserve(edges.size());
  for (const auto& [i, j] : edges) {
    int pi = -1, pj = -1;
    for (int a = 0; a < m; ++a) {
      if (axes[a] == i) pi = a;
      if (axes[a] == j) pj = a;
    }
    local.emplace_back(pi, pj);
  }

  // truncated coupled sum over the component grid
  std::vector<long> n(m, 0);
  LogAccumulator joint;
  for (;;) {
    double e = 0.0;
    for (int a = 0; a < m; ++a) {
      const double na = static_cast<double>(n[a]);
      e += -c * na * na + t * v[axes[a]] * na;
    }
    for (const auto& [pi, pj] : local)
      e += -2.0 * c * static_cast<double>(n[pi]) * static_cast<double>(n[pj]);
    joint.add(e);
    int a = 0;
    while (a < m && ++n[a] > n_trunc) n[a++] = 0;
    if (a == m) break;
  }

  // any term with some n_j beyond the truncation is bounded by the product
  // with that axis replaced by its tail sum
  double tail_total = kNegInf;
  for (int a = 0; a < m; ++a) {
    double part = log_tail[a];
    for (int b = 0; b < m; ++b)
      if (b != a) part += log_axis[b];
    tail_total = log_add(tail_total, part);
  }
  return log_add(joint.log(), tail_total);
}

}  // namespace

double gaussian_lattice_sum(double c, std::span<const double> v,
                            const std::vector<std::pair<int, int>>& edges,
                            double t, long truncation) {
  const int k = static_cast<int>(v.size());
  if (k < 1 || k > 8)
    throw std::invalid_argument("gaussian_lattice_sum: 1 <= k <= 8 required");
  if (!(c > 0.0))
    throw std::invalid_argument("gaussian_lattice_sum: c must be positive");
  if (!(t >= 0.0))
    throw std::invalid_argument("gaussian_lattice_sum: t must be nonnegative");
  for (double w : v)
    if (!(w > 0.0))
      throw std::invalid_argument(
          "gaussian_lattice_sum: weights must be positive");
  validate_edges(k, edges, "gaussian_lattice_sum");
  if (truncation < 0)
    throw std::invalid_argument("gaussian_lattice_sum: negative truncation");

  const double vmax = *std::max_element(v.begin(), v.end());
  const long n_trunc =
      truncation > 0
          ? truncation
          : static_cast<long>(std::ceil(t * vmax / (2.0 * c))) +
                static_cast<long>(std::ceil(40.0 / std::sqrt(c)));

  // the sum factorizes over connected components of the edge graph
  std::vector<int> comp(k, -1);
  int n_comp = 0;
  for (int s = 0; s < k; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = n_comp;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const auto& [i, j] : edges) {
        const int other = i == u ? j : (j == u ? i : -1);
        if (other >= 0 && comp[other] < 0) {
          comp[other] = n_comp;
          stack.push_back(other);
        }
      }
    }
    ++n_comp;
  }

  double total = 0.0;
  for (int cidx = 0; cidx < n_comp; ++cidx) {
    std::vector<int> axes;
    for (int j = 0; j < k; ++j)
      if (comp[j] == cidx) axes.push_back(j);
    std::vector<std::pair<int, int>> sub;
    for (const auto& e : edges)
      if (comp[e.first] == cidx) sub.push_back(e);
    total += component_log_sum(c, v, sub, axes, t, n_trunc);
  }
  return total;
}

double quadratic_comparison_bound(double c, std::span<const double> v,
                                  const std::vector<std::pair<int, int>>& edges,
                                  double t, double eps) {
  const int k = static_cast<int>(v.size());
  if (!(c > 0.0))
    throw std::invalid_argument(
        "quadratic_comparison_bound: c must be positive");
  if (!(eps >= 0.0))
    throw std::invalid_argument(
        "quadratic_comparison_bound: eps must be nonnegative");
  for (double w : v)
    if (!(w > 0.0))
      throw std::invalid_argument(
          "quadratic_comparison_bound: weights must be positive");
  std::vector<double> squares(v.size());
  std::transform(v.begin(), v.end(), squares.begin(),
                 [](double w) { return w * w; });
  const double weight = max_independent_weight(k, edges, squares);
  return (1.0 + eps) * weight * t * t / (4.0 * c);
}

ValidityScan find_validity_threshold(
    double c, std::span<const double> v,
    const std::vector<std::pair<int, int>>& edges, double eps, double t_lo,
    double t_hi, int grid_points) {
  if (!(t_lo > 0.0) || !(t_hi > t_lo))
    throw std::invalid_argument(
        "find_validity_threshold: need 0 < t_lo < t_hi");
  if (grid_points < 2)
    throw std::invalid_argument(
        "find_validity_threshold: need at least 2 grid points");

  ValidityScan scan;
  const double step = std::log(t_hi / t_lo) / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    const double t = t_lo * std::exp(step * i);
    scan.grid.push_back(t);
    scan.log_sums.push_back(gaussian_lattice_sum(c, v, edges, t));
    scan.bounds.push_back(quadratic_comparison_bound(c, v, edges, t, eps));
    scan.holds.push_back(scan.log_sums.back() <= scan.bounds.back() ? 1 : 0);
  }
  int first_good = grid_points;
  for (int i = grid_points - 1; i >= 0 && scan.holds[i]; --i) first_good = i;
  scan.found = first_good < grid_points;
  scan.threshold = scan.found ? scan.grid[first_good]
                              : std::numeric_limits<double>::infinity();
  for (int i = 0; i < first_good; ++i)
    if (!scan.holds[i]) scan.violations.push_back(scan.grid[i]);
  return scan;
}

LaplaceGrowthBound upper_lap_bound(const std::vector<BoxDomain>& cells,
                                   std::span<const double> v,
                                   const InteractionWindow& S, double a,
                                   double eps) {
  if (cells.empty()) throw std::invalid_argument("upper_lap_bound: no cells");
  if (cells.size() != v.size())
    throw std::invalid_argument("upper_lap_bound: one weight per cell");
  if (!(a > 0.0))
    throw std::invalid_argument("upper_lap_bound: a must be positive");
  if (!(eps >= 0.0))
    throw std::invalid_argument("upper_lap_bound: eps must be nonnegative");

  // every internal difference of a cell must stay inside S, or the pair cost
  // floor a does not apply within the cell
  const int d = S.dim();
  Point lo(d, 0.0), hi(d, 0.0);
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (cells[j].dim() != d)
      throw std::invalid_argument("upper_lap_bound: dimension mismatch");
    for (int ax = 0; ax < d; ++ax) {
      lo[ax] = cells[j].lo(ax) - cells[j].hi(ax);
      hi[ax] = -lo[ax];
    }
    if (!S.contains_box(lo, hi))
      throw std::invalid_argument(
          "upper_lap_bound: cell " + std::to_string(j) +
          " has internal differences escaping the window");
  }

  InteractionGraph graph(cells, S);
  std::vector<double> squares(v.size());
  std::transform(v.begin(), v.end(), squares.begin(),
                 [](double w) { return w * w; });
  LaplaceGrowthBound out;
  out.family_weight = graph.max_separable_weight(squares, &out.arg_family);
  out.coefficient = out.family_weight / (2.0 * a);
  out.certified = (1.0 + eps) * out.coefficient;
  return out;
}

double tail_lower_bound(const BoxDomain& window, int n,
                        const InteractionModel& model, double z, double R) {
  if (n < 0) throw std::invalid_argument("tail_lower_bound: negative count");
  if (!(z > 0.0))
    throw std::invalid_argument("tail_lower_bound: activity must be positive");
  if (!(R >= 0.0))
    throw std::invalid_argument("tail_lower_bound: negative reach");

  const double padded_volume =
      R > 0.0 ? window.padded(R).volume() : window.volume();
  double log_p = -z * padded_volume;
  if (n == 0) return log_p;
  log_p += n * std::log(window.volume()) - std::lgamma(n + 1.0);

  double sup_energy = 0.0;
  if (model.is_area()) {
    sup_energy = n * ball_volume(model.area_dim(), model.ball_radius());
  } else if (n >= 2) {
    const double diam = window.diameter();
    const double pair_sup = model.pair_potential()->sup_on(diam);
    if (pair_sup == kInfiniteEnergy) return kNegInf;
    sup_energy = static_cast<double>(binom2(n)) * pair_sup;
  }
  return log_p - sup_energy;
}

double tail_upper_bound(const std::vector<BoxDomain>& cells,
                        std::span<const int> counts, double a,
                        const std::vector<std::pair<int, int>>& edges) {
  if (cells.empty()) throw std::invalid_argument("tail_upper_bound: no cells");
  if (cells.size() != counts.size())
    throw std::invalid_argument("tail_upper_bound: one count per cell");
  if (!(a >= 0.0))
    throw std::invalid_argument("tail_upper_bound: a must be nonnegative");
  validate_edges(static_cast<int>(cells.size()), edges, "tail_upper_bound");

  double log_p = 0.0;
  for (std::size_t j = 0; j < cells.size(); ++j) {
    if (counts[j] < 0)
      throw std::invalid_argument("tail_upper_bound: negative count");
    const double vol = cells[j].volume();
    log_p += vol;
    log_p += counts[j] * std::log(vol) - std::lgamma(counts[j] + 1.0);
    log_p -= a * static_cast<double>(binom2(counts[j]));
  }
  for (const auto& [i, j] : edges)
    log_p -= a * static_cast<double>(counts[i]) * counts[j];
  return log_p;
}

WeakInteractionBudget weak_condition_budget(const InteractionModel& model,
                                            long n, double x) {
  if (n < 0) throw std::invalid_argument("weak_condition_budget: negative n");
  if (!(x > 1.0))
    throw std::invalid_argument("weak_condition_budget: x must exceed 1");

  WeakInteractionBudget out;
  if (model.is_area()) {
    out.radius = model.ball_radius();
    out.budget =
        static_cast<double>(n) * ball_volume(model.area_dim(), out.radius);
  } else {
    const auto* shell =
        dynamic_cast<const SoftShellPotential*>(model.pair_potential());
    if (shell == nullptr)
      throw std::invalid_argument(
          "weak_condition_budget: needs a soft-shell or area model (bounded "
          "pair costs do not vanish under separation)");
    out.radius = 0.5 * std::pow(std::log(x), -1.0 / shell->exponent());
    out.budget =
        static_cast<double>(binom2(n)) * shell->sup_on(2.0 * out.radius);
  }
  out.ratio = out.budget / (x * std::log(x));
  return out;
}

}  // namespace gibbsids
