#include "gibbsids/site_potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gibbsids {
namespace {

double interp_knots(const std::vector<std::pair<double, double>>& knots,
                    double r) {
  if (r >= knots.back().first)
    return r == knots.back().first ? knots.back().second : 0.0;
  if (r <= knots.front().first) return knots.front().second;
  auto it = std::upper_bound(
      knots.begin(), knots.end(), r,
      [](double v, const std::pair<double, double>& k) { return v < k.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double w = (r - lo.first) / (hi.first - lo.first);
  return lo.second + w * (hi.second - lo.second);
}

void check_knots(const std::vector<std::pair<double, double>>& knots,
                 bool nonpositive) {
  if (knots.empty())
    throw std::invalid_argument("SingleSitePotential: no knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (knots[i].first < 0.0)
      throw std::invalid_argument("SingleSitePotential: negative radius");
    if (nonpositive ? knots[i].second > 0.0 : knots[i].second < 0.0)
      throw std::invalid_argument("SingleSitePotential: value sign violation");
    if (i > 0 && knots[i].first <= knots[i - 1].first)
      throw std::invalid_argument(
          "SingleSitePotential: radii must be strictly increasing");
  }
}

}  // namespace

SingleSitePotential::SingleSitePotential(
    Kind kind, std::vector<std::pair<double, double>> knots, int dim)
    : kind_(kind), knots_(std::move(knots)), dim_(dim) {}

SingleSitePotential SingleSitePotential::radial(
    std::vector<std::pair<double, double>> knots) {
  check_knots(knots, /*nonpositive=*/true);
  return SingleSitePotential(Kind::Radial, std::move(knots), 0);
}

SingleSitePotential SingleSitePotential::separable(
    std::vector<std::pair<double, double>> axis_knots, int dim) {
  check_knots(axis_knots, /*nonpositive=*/false);
  if (dim < 1)
    throw std::invalid_argument("SingleSitePotential: dimension must be >= 1");
  return SingleSitePotential(Kind::Separable, std::move(axis_knots), dim);
}

double SingleSitePotential::axis_profile(double r) const {
  return interp_knots(knots_, r);
}

double SingleSitePotential::operator()(std::span<const double> x) const {
  if (kind_ == Kind::Radial) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return interp_knots(knots_, std::sqrt(r2));
  }
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("SingleSitePotential: dimension mismatch");
  double prod = 1.0;
  for (double v : x) prod *= axis_profile(std::abs(v));
  return -prod;
}

double SingleSitePotential::reflected(std::span<const double> x) const {
  Point neg(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) neg[i] = -x[i];
  return -(*this)(neg);
}

double SingleSitePotential::at_origin() const {
  if (kind_ == Kind::Radial) return interp_knots(knots_, 0.0);
  double prod = 1.0;
  for (int k = 0; k < dim_; ++k) prod *= axis_profile(0.0);
  return -prod;
}

double SingleSitePotential::support_radius() const {
  const double w = knots_.back().first;
  if (kind_ == Kind::Radial) return w;
  return w * std::sqrt(static_cast<double>(dim_));
}

double SingleSitePotential::radial_value(double rho) const {
  if (kind_ != Kind::Radial)
    throw std::logic_error("SingleSitePotential: not a radial profile");
  return interp_knots(knots_, rho);
}

std::vector<double> SingleSitePotential::knot_radii() const {
  std::vector<double> r;
  r.reserve(knots_.size());
  for (const auto& k : knots_) r.push_back(k.first);
  return r;
}

double SingleSitePotential::lipschitz_bound() const {
  double slope = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    peak = std::max(peak, std::abs(knots_[i].second));
    if (i > 0)
      slope = std::max(slope,
                       std::abs(knots_[i].second - knots_[i - 1].second) /
                           (knots_[i].first - knots_[i - 1].first));
  }
  if (kind_ == Kind::Radial) return slope;
  // product rule across axes, then the gradient-norm factor
  double axis = slope;
  for (int k = 1; k < dim_; ++k) axis *= peak;
  return axis * std::sqrt(static_cast<double>(dim_));
}

std::string SingleSitePotential::id() const {
  std::ostringstream os;
  os << (kind_ == Kind::Radial ? "radial" : "separable") << "(";
  os << knots_.size() << " knots,R=" << support_radius() << ")";
  return os.str();
}

double potential_field(std::span<const double> x, const PointConfiguration& c,
                       const SingleSitePotential& u0) {
  Point diff(x.size());
  double v = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    auto p = c.point(j);
    for (std::size_t k = 0; k < x.size(); ++k) diff[k] = x[k] - p[k];
    v += u0(diff);
  }
  return v;
}

double reflected_sum(const PointConfiguration& c,
                     const SingleSitePotential& u0) {
  double s = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) s += u0.reflected(c.point(j));
  return s;
}

}  // namespace gibbsids
