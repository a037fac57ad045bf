#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gibbsids/geometry.hpp"

namespace gibbsids {

inline constexpr double kInfiniteEnergy =
    std::numeric_limits<double>::infinity();

// Radial pair cost phi(|x-y|): nonnegative or +inf, zero beyond range().
class PairPotential {
 public:
  virtual ~PairPotential() = default;
  virtual double at_distance(double r) const = 0;
  virtual double range() const = 0;
  // sup of phi over (0, r_hi]; exact per family, +inf for hardcore
  virtual double sup_on(double r_hi) const = 0;
  virtual std::string id() const = 0;
};

// a on the closed ball of radius R, 0 beyond.
class StraussPotential final : public PairPotential {
 public:
  StraussPotential(double a, double radius);
  double at_distance(double r) const override;
  double range() const override { return radius_; }
  double sup_on(double r_hi) const override;
  std::string id() const override;
  double strength() const { return a_; }

 private:
  double a_;
  double radius_;
};

// +inf on the closed ball of radius R, 0 beyond.
class HardcorePotential final : public PairPotential {
 public:
  explicit HardcorePotential(double radius);
  double at_distance(double r) const override;
  double range() const override { return radius_; }
  double sup_on(double r_hi) const override;
  std::string id() const override;

 private:
  double radius_;
};

// exp(-r^{-p}) for 0 < r <= R, 0 at r = 0 (continuous extension), 0 beyond R.
class SoftShellPotential final : public PairPotential {
 public:
  SoftShellPotential(double p, double radius);
  double at_distance(double r) const override;
  double range() const override { return radius_; }
  double sup_on(double r_hi) const override;
  std::string id() const override;
  double exponent() const { return p_; }

 private:
  double p_;
  double radius_;
};

// Piecewise-linear in r between knots; clamped left of the first knot and
// exactly 0 beyond the last.
class TabulatedPotential final : public PairPotential {
 public:
  explicit TabulatedPotential(std::vector<std::pair<double, double>> knots);
  double at_distance(double r) const override;
  double range() const override { return knots_.back().first; }
  double sup_on(double r_hi) const override;
  std::string id() const override;

 private:
  std::vector<std::pair<double, double>> knots_;
};

// Total energy is either a sum of phi over unordered pairs or the volume of
// the union of balls of a fixed radius around the points.
class InteractionModel {
 public:
  static InteractionModel pairwise(std::shared_ptr<const PairPotential> phi);
  static InteractionModel area(int dim, double ball_radius);

  bool is_area() const { return phi_ == nullptr; }
  const PairPotential* pair_potential() const { return phi_.get(); }
  double ball_radius() const { return ball_radius_; }
  int area_dim() const { return area_dim_; }

  // True interaction range: two points farther apart than this never affect
  // each other's energy contribution (2 * ball radius for the area model).
  double range() const;
  double local_energy_lower_bound() const { return 0.0; }
  double domination_intensity() const { return 1.0; }

  double total_energy(const PointConfiguration& c) const;
  // U(eta) - U(eta restricted to the window complement): for pair energies
  // this is the sum over pairs with at least one endpoint in the window.
  double conditional_energy(const PointConfiguration& c,
                            const BoxDomain& window) const;
  double local_energy(std::span<const double> x,
                      const PointConfiguration& c) const;
  // Same with the configuration split into interior and boundary parts.
  double local_energy(std::span<const double> x, const PointConfiguration& c,
                      const PointConfiguration& boundary) const;

  std::string id() const;

 private:
  InteractionModel() = default;
  std::shared_ptr<const PairPotential> phi_;
  int area_dim_ = 0;
  double ball_radius_ = 0.0;
};

// Volume of the union of equal balls. Exact in d = 1 (interval sweep) and in
// d = 2 without triple overlaps (pair inclusion-exclusion); otherwise a
// certified adaptive cell subdivision to relative tolerance 1e-4.
double union_of_balls_volume(const std::vector<Point>& centers, double radius,
                             int dim);

}  // namespace gibbsids
