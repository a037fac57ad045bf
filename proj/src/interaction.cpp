#include "gibbsids/interaction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gibbsids {
namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

StraussPotential::StraussPotential(double a, double radius)
    : a_(a), radius_(radius) {
  if (!(a > 0.0) || !(radius > 0.0))
    throw std::invalid_argument("StraussPotential: parameters must be positive");
}

double StraussPotential::at_distance(double r) const {
  return r <= radius_ ? a_ : 0.0;
}

double StraussPotential::sup_on(double r_hi) const {
  return r_hi > 0.0 ? a_ : 0.0;
}

std::string StraussPotential::id() const {
  return "strauss(a=" + fmt(a_) + ",R=" + fmt(radius_) + ")";
}

HardcorePotential::HardcorePotential(double radius) : radius_(radius) {
  if (!(radius > 0.0))
    throw std::invalid_argument("HardcorePotential: radius must be positive");
}

double HardcorePotential::at_distance(double r) const {
  return r <= radius_ ? kInfiniteEnergy : 0.0;
}

double HardcorePotential::sup_on(double r_hi) const {
  return r_hi > 0.0 ? kInfiniteEnergy : 0.0;
}

std::string HardcorePotential::id() const {
  return "hardcore(R=" + fmt(radius_) + ")";
}

SoftShellPotential::SoftShellPotential(double p, double radius)
    : p_(p), radius_(radius) {
  if (!(p > 0.0) || !(radius > 0.0))
    throw std::invalid_argument(
        "SoftShellPotential: parameters must be positive");
}

double SoftShellPotential::at_distance(double r) const {
  if (r <= 0.0 || r > radius_) return 0.0;
  return std::exp(-std::pow(r, -p_));
}

double SoftShellPotential::sup_on(double r_hi) const {
  // increasing on (0, R], zero beyond: the sup sits at min(r_hi, R)
  if (!(r_hi > 0.0)) return 0.0;
  return at_distance(std::min(r_hi, radius_));
}

std::string SoftShellPotential::id() const {
  return "softshell(p=" + fmt(p_) + ",R=" + fmt(radius_) + ")";
}

TabulatedPotential::TabulatedPotential(
    std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
  if (knots_.empty())
    throw std::invalid_argument("TabulatedPotential: no knots");
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (knots_[i].first < 0.0 || knots_[i].second < 0.0)
      throw std::invalid_argument(
          "TabulatedPotential: radii and values must be nonnegative");
    if (i > 0 && knots_[i].first <= knots_[i - 1].first)
      throw std::invalid_argument(
          "TabulatedPotential: radii must be strictly increasing");
  }
}

double TabulatedPotential::at_distance(double r) const {
  if (r >= knots_.back().first)
    return r == knots_.back().first ? knots_.back().second : 0.0;
  if (r <= knots_.front().first) return knots_.front().second;
  auto it = std::upper_bound(
      knots_.begin(), knots_.end(), r,
      [](double v, const std::pair<double, double>& k) { return v < k.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (r - lo.first) / (hi.first - lo.first);
  return lo.second + w * (hi.second - lo.second);
}

double TabulatedPotential::sup_on(double r_hi) const {
  // piecewise linear: the sup over (0, r_hi] sits at a knot or at r_hi itself
  if (!(r_hi > 0.0)) return 0.0;
  double best = at_distance(std::min(r_hi, knots_.back().first));
  best = std::max(best, knots_.front().second);  // clamped left plateau
  for (const auto& [r, value] : knots_)
    if (r <= r_hi) best = std::max(best, value);
  return best;
}

std::string TabulatedPotential::id() const {
  return "tabulated(R=" + fmt(knots_.back().first) + "," +
         std::to_string(knots_.size()) + " knots)";
}

InteractionModel InteractionModel::pairwise(
    std::shared_ptr<const PairPotential> phi) {
  if (!phi) throw std::invalid_argument("InteractionModel: null potential");
  InteractionModel m;
  m.phi_ = std::move(phi);
  return m;
}

InteractionModel InteractionModel::area(int dim, double ball_radius) {
  if (dim < 1 || !(ball_radius > 0.0))
    throw std::invalid_argument("InteractionModel: bad area parameters");
  InteractionModel m;
  m.area_dim_ = dim;
  m.ball_radius_ = ball_radius;
  return m;
}

double InteractionModel::range() const {
  return is_area() ? 2.0 * ball_radius_ : phi_->range();
}

std::string InteractionModel::id() const {
  if (is_area())
    return "area(d=" + std::to_string(area_dim_) + ",R=" + fmt(ball_radius_) +
           ")";
  return phi_->id();
}

double InteractionModel::total_energy(const PointConfiguration& c) const {
  if (is_area()) {
    std::vector<Point> centers;
    centers.reserve(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto p = c.point(i);
      centers.emplace_back(p.begin(), p.end());
    }
    return union_of_balls_volume(centers, ball_radius_, c.dim());
  }
  double u = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      const double v = phi_->at_distance(distance(c.point(i), c.point(j)));
      if (v == kInfiniteEnergy) return kInfiniteEnergy;
      u += v;
    }
  return u;
}

double InteractionModel::conditional_energy(const PointConfiguration& c,
                                            const BoxDomain& window) const {
  if (is_area()) {
    std::vector<Point> all;
    std::vector<Point> outside;
    for (std::size_t i = 0; i < c.size(); ++i) {
      auto p = c.point(i);
      all.emplace_back(p.begin(), p.end());
      if (!window.contains(p)) outside.emplace_back(p.begin(), p.end());
    }
    return union_of_balls_volume(all, ball_radius_, c.dim()) -
           union_of_balls_volume(outside, ball_radius_, c.dim());
  }
  double u = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) {
      if (!window.contains(c.point(i)) && !window.contains(c.point(j)))
        continue;
      const double v = phi_->at_distance(distance(c.point(i), c.point(j)));
      if (v == kInfiniteEnergy) return kInfiniteEnergy;
      u += v;
    }
  return u;
}

double InteractionModel::local_energy(std::span<const double> x,
                                      const PointConfiguration& c) const {
  return local_energy(x, c, PointConfiguration(c.domain()));
}

double InteractionModel::local_energy(std::span<const double> x,
                                      const PointConfiguration& c,
                                      const PointConfiguration& boundary) const {
  const double tol2 = kDistinctTolerance * kDistinctTolerance;
  if (is_area()) {
    // Only balls overlapping B(x, R) matter: centers within 2R of x.
    std::vector<Point> near;
    auto collect = [&](const PointConfiguration& cfg) {
      for (std::size_t i = 0; i < cfg.size(); ++i) {
        auto p = cfg.point(i);
        const double d2 = squared_distance(x, p);
        if (d2 <= tol2)
          throw std::invalid_argument(
              "local_energy: point coincides with an existing one");
        if (d2 < 4.0 * ball_radius_ * ball_radius_)
          near.emplace_back(p.begin(), p.end());
      }
    };
    collect(c);
    collect(boundary);
    const int d = c.dim();
    const double base = union_of_balls_volume(near, ball_radius_, d);
    near.emplace_back(x.begin(), x.end());
    const double grown = union_of_balls_volume(near, ball_radius_, d);
    // 0 <= h <= |B(0,R)| holds exactly; keep numerics inside the bracket.
    return std::clamp(grown - base, 0.0, ball_volume(d, ball_radius_));
  }
  double h = 0.0;
  auto accumulate = [&](const PointConfiguration& cfg) {
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      const double d2 = squared_distance(x, cfg.point(i));
      if (d2 <= tol2)
        throw std::invalid_argument(
            "local_energy: point coincides with an existing one");
      const double v = phi_->at_distance(std::sqrt(d2));
      if (v == kInfiniteEnergy) {
        h = kInfiniteEnergy;
        return;
      }
      h += v;
    }
  };
  accumulate(c);
  if (h == kInfiniteEnergy) return h;
  accumulate(boundary);
  return h;
}

namespace {

double union_intervals(const std::vector<Point>& centers, double r) {
  std::vector<std::pair<double, double>> iv;
  iv.reserve(centers.size());
  for (const auto& c : centers) iv.emplace_back(c[0] - r, c[0] + r);
  std::sort(iv.begin(), iv.end());
  double total = 0.0;
  double lo = 0.0, hi = -1.0;
  bool open = false;
  for (const auto& [a, b] : iv) {
    if (!open) {
      lo = a;
      hi = b;
      open = true;
    } else if (a <= hi) {
      hi = std::max(hi, b);
    } else {
      total += hi - lo;
      lo = a;
      hi = b;
    }
  }
  if (open) total += hi - lo;
  return total;
}

// Area of the intersection of two discs of equal radius r at center distance t.
double disc_lens_area(double t, double r) {
  if (t >= 2.0 * r) return 0.0;
  const double q = std::clamp(t / (2.0 * r), 0.0, 1.0);
  return 2.0 * r * r * std::acos(q) - 0.5 * t * std::sqrt(4.0 * r * r - t * t);
}

// Radius of the smallest circle enclosing three points in the plane.
double min_enclosing_radius3(std::span<const double> a,
                             std::span<const double> b,
                             std::span<const double> c) {
  const double ab = distance(a, b), bc = distance(b, c), ca = distance(c, a);
  // Longest side as diameter, if the opposite point fits inside.
  struct Side {
    double len;
    std::span<const double> p, q, other;
  };
  Side sides[3] = {{ab, a, b, c}, {bc, b, c, a}, {ca, c, a, b}};
  const Side* longest = &sides[0];
  for (int i = 1; i < 3; ++i)
    if (sides[i].len > longest->len) longest = &sides[i];
  Point mid = {0.5 * (longest->p[0] + longest->q[0]),
               0.5 * (longest->p[1] + longest->q[1])};
  if (distance(mid, longest->other) <= 0.5 * longest->len + 1e-15)
    return 0.5 * longest->len;
  const double area2 = std::abs((b[0] - a[0]) * (c[1] - a[1]) -
                                (c[0] - a[0]) * (b[1] - a[1]));
  return ab * bc * ca / (2.0 * area2);
}

bool has_triple_overlap(const std::vector<Point>& centers, double r) {
  const std::size_t n = centers.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (distance(centers[i], centers[j]) >= 2.0 * r) continue;
      for (std::size_t k = j + 1; k < n; ++k) {
        if (distance(centers[i], centers[k]) >= 2.0 * r) continue;
        if (distance(centers[j], centers[k]) >= 2.0 * r) continue;
        if (min_enclosing_radius3(centers[i], centers[j], centers[k]) <= r)
          return true;
      }
    }
  return false;
}

// Certified adaptive subdivision: cells wholly inside some ball count fully,
// cells wholly outside every ball count zero, and undecided cells below the
// size cutoff are bracketed. Refines the cutoff until the bracket is within
// relative tolerance 1e-4.
double union_volume_subdivision(const std::vector<Point>& centers, double r,
                                int dim) {
  Point lo(dim, 0.0), hi(dim, 0.0);
  for (int k = 0; k < dim; ++k) {
    lo[k] = centers[0][k];
    hi[k] = centers[0][k];
  }
  for (const auto& c : centers)
    for (int k = 0; k < dim; ++k) {
      lo[k] = std::min(lo[k], c[k] - r);
      hi[k] = std::max(hi[k], c[k] + r);
    }
  double root_vol = 1.0;
  for (int k = 0; k < dim; ++k) root_vol *= hi[k] - lo[k];

  struct Cell {
    Point lo, hi;
  };
  double min_cell = root_vol / 64.0;
  for (int pass = 0; pass < 20; ++pass, min_cell /= 16.0) {
    double inside = 0.0, uncertain = 0.0;
    std::vector<Cell> stack{{lo, hi}};
    Point q(dim, 0.0);
    while (!stack.empty()) {
      Cell cell = std::move(stack.back());
      stack.pop_back();
      double vol = 1.0, rad2 = 0.0;
      int widest = 0;
      for (int k = 0; k < dim; ++k) {
        const double w = cell.hi[k] - cell.lo[k];
        vol *= w;
        rad2 += 0.25 * w * w;
        q[k] = 0.5 * (cell.lo[k] + cell.hi[k]);
        if (w > cell.hi[widest] - cell.lo[widest]) widest = k;
      }
      const double rad = std::sqrt(rad2);
      bool in = false, maybe = false;
      for (const auto& c : centers) {
        const double d = distance(q, c);
        if (d + rad <= r) {
          in = true;
          break;
        }
        if (d - rad < r) maybe = true;
      }
      if (in) {
        inside += vol;
      } else if (maybe) {
        if (vol <= min_cell) {
          uncertain += vol;
        } else {
          Cell left = cell, right = cell;
          const double m = 0.5 * (cell.lo[widest] + cell.hi[widest]);
          left.hi[widest] = m;
          right.lo[widest] = m;
          stack.push_back(std::move(left));
          stack.push_back(std::move(right));
        }
      }
    }
    if (inside > 0.0 && uncertain <= 1e-4 * inside)
      return inside + 0.5 * uncertain;
  }
  throw std::runtime_error("union_of_balls_volume: tolerance not reached");
}

}  // namespace

double union_of_balls_volume(const std::vector<Point>& centers, double radius,
                             int dim) {
  if (centers.empty()) return 0.0;
  if (!(radius > 0.0) || dim < 1)
    throw std::invalid_argument("union_of_balls_volume: bad parameters");
  if (dim == 1) return union_intervals(centers, radius);

  bool any_overlap = false;
  for (std::size_t i = 0; i < centers.size() && !any_overlap; ++i)
    for (std::size_t j = i + 1; j < centers.size(); ++j)
      if (distance(centers[i], centers[j]) < 2.0 * radius) {
        any_overlap = true;
        break;
      }
  if (!any_overlap)
    return static_cast<double>(centers.size()) * ball_volume(dim, radius);

  if (dim == 2 && !has_triple_overlap(centers, radius)) {
    double area = static_cast<double>(centers.size()) * ball_volume(2, radius);
    for (std::size_t i = 0; i < centers.size(); ++i)
      for (std::size_t j = i + 1; j < centers.size(); ++j)
        area -= disc_lens_area(distance(centers[i], centers[j]), radius);
    return area;
  }
  return union_volume_subdivision(centers, radius, dim);
}

}  // namespace gibbsids
