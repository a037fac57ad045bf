#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gibbsids/geometry.hpp"

namespace gibbsids {

// Nonpositive single-site profile u0 with compact support, either radial
// (piecewise-linear in |x|) or a separable product of one even per-axis
// profile. The reflected form u(x) = -u0(-x) >= 0 is what Laplace-functional
// and packing computations consume.
class SingleSitePotential {
 public:
  // knots (radius, value) with value <= 0; clamped left of the first knot,
  // exactly 0 beyond the last. Works in any dimension.
  static SingleSitePotential radial(
      std::vector<std::pair<double, double>> knots);
  // axis profile q >= 0 on radii >= 0; u0(x) = -prod_k q(|x_k|), dim fixed.
  static SingleSitePotential separable(
      std::vector<std::pair<double, double>> axis_knots, int dim);

  double operator()(std::span<const double> x) const;
  double reflected(std::span<const double> x) const;  // -u0(-x)
  double at_origin() const;
  double support_radius() const;
  bool is_radial() const { return kind_ == Kind::Radial; }
  // Profile value at distance rho from the origin (radial form only).
  double radial_value(double rho) const;
  // Knot radii of the defining profile (integration breakpoints).
  std::vector<double> knot_radii() const;
  // Upper estimate of the gradient norm (piecewise-linear profiles).
  double lipschitz_bound() const;
  std::string id() const;

 private:
  enum class Kind { Radial, Separable };
  SingleSitePotential(Kind kind, std::vector<std::pair<double, double>> knots,
                      int dim);
  double axis_profile(double r) const;

  Kind kind_;
  std::vector<std::pair<double, double>> knots_;
  int dim_;
};

// V_eta(x) = sum_j u0(x - x_j); 0 when no point is within the support radius.
double potential_field(std::span<const double> x, const PointConfiguration& c,
                       const SingleSitePotential& u0);

// sum_j u(x_j) with u the reflected form.
double reflected_sum(const PointConfiguration& c,
                     const SingleSitePotential& u0);

}  // namespace gibbsids
