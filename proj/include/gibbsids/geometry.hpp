// Points, boxes, and finite point configurations in R^d.
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace gibbsids {

using Point = std::vector<double>;

// Two points closer than this are treated as coincident; configurations are
// simple, so samplers must never produce such pairs.
inline constexpr double kDistinctTolerance = 1e-12;

double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

// volume of the Euclidean ball B(0, r) in d dimensions
double ball_volume(int dim, double radius);

// Axis-aligned open box with positive volume.
class BoxDomain {
 public:
  BoxDomain(Point center, Point side_lengths);

  // the centered cube (-L/2, L/2)^d
  static BoxDomain centered_cube(int dim, double side);

  int dim() const { return static_cast<int>(center_.size()); }
  const Point& center() const { return center_; }
  const Point& side_lengths() const { return sides_; }
  double lo(int axis) const { return center_[axis] - 0.5 * sides_[axis]; }
  double hi(int axis) const { return center_[axis] + 0.5 * sides_[axis]; }
  double volume() const;
  double diameter() const;

  bool contains(std::span<const double> x) const;

  // the Minkowski sum with the closed ball B(0, pad)
  BoxDomain padded(double pad) const;

 private:
  Point center_;
  Point sides_;
};

// Finite simple point set inside a bounding box, stored as flat coordinates.
class PointConfiguration {
 public:
  explicit PointConfiguration(BoxDomain domain);
  PointConfiguration(BoxDomain domain, const std::vector<Point>& points);

  int dim() const { return domain_.dim(); }
  std::size_t size() const { return coords_.size() / domain_.dim(); }
  bool empty() const { return coords_.empty(); }
  const BoxDomain& domain() const { return domain_; }

  std::span<const double> point(std::size_t i) const {
    const int d = dim();
    return {coords_.data() + i * d, static_cast<std::size_t>(d)};
  }

  // mutation used by the samplers; push_back enforces simplicity and bounds
  void push_back(std::span<const double> x);
  void swap_remove(std::size_t i);
  void set_point(std::size_t i, std::span<const double> x);

  // number of points inside a window (M_Lambda)
  std::size_t count_in(const BoxDomain& window) const;

  // points lying inside `window`, rebased onto that window
  PointConfiguration restrict(const BoxDomain& window) const;

  // all points shifted by v, bounding box shifted along
  PointConfiguration translated(std::span<const double> v) const;

  bool is_simple() const;

 private:
  BoxDomain domain_;
  std::vector<double> coords_;
};

}  // namespace gibbsids
