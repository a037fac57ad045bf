#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gibbsids/geometry.hpp"

namespace gibbsids {

// Symmetric star-shaped neighborhood of the origin: a ball, a centered box,
// or a general radial profile (2D). Open by default; the flag decides whether
// boundary points belong to the set. Everything downstream (packing
// feasibility = difference not in the window) hinges on contains().
class InteractionWindow {
 public:
  enum class Shape { Ball, Box, StarRadial };

  static InteractionWindow ball(int dim, double radius, bool open = true);
  static InteractionWindow box(std::vector<double> half_widths,
                               bool open = true);
  // profile(theta) > 0, with profile(theta + pi) = profile(theta); 2D only
  static InteractionWindow star(std::function<double(double)> profile,
                                bool open = true);

  Shape shape() const { return shape_; }
  int dim() const { return dim_; }
  bool open() const { return open_; }

  bool contains(std::span<const double> x) const;
  // gauge radius of the set along the given direction (need not be unit)
  double radius_in_direction(std::span<const double> dir) const;
  double inradius() const;

  // (complement + closed eps-ball) complement: points with the whole eps-ball
  // inside the set. Exact for Ball/Box; direction-sampled for StarRadial.
  InteractionWindow eroded(double eps) const;

  // true iff the whole closed box [lo, hi] lies inside the set; exact for
  // Ball/Box (corner gauge maximum), sampled for StarRadial.
  bool contains_box(std::span<const double> lo,
                    std::span<const double> hi) const;

  std::string id() const;

 private:
  InteractionWindow() = default;
  double star_profile(double theta) const;

  Shape shape_ = Shape::Ball;
  int dim_ = 0;
  bool open_ = true;
  double radius_ = 0.0;                  // Ball
  std::vector<double> half_widths_;      // Box
  std::function<double(double)> profile_;  // StarRadial (angle)
  std::vector<double> star_table_;       // eroded stars: tabulated profile
};

// Does alpha * closure(S) fit strictly inside S? Verified on a dense set of
// directions (closure radii take the upper envelope of neighboring direction
// samples, which is what makes discontinuous-profile spikes fail).
struct ConditionSReport {
  bool pass = false;
  double worst_margin = 0.0;
  double worst_alpha = 0.0;
  std::vector<double> worst_direction;
};

ConditionSReport check_condition_S(const InteractionWindow& S,
                                   const std::vector<double>& alphas,
                                   int directions = 720);

}  // namespace gibbsids
