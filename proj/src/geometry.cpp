#include "gibbsids/geometry.hpp"

#include <cmath>

namespace gibbsids {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

double ball_volume(int dim, double radius) {
  const double d = static_cast<double>(dim);
  return std::pow(3.14159265358979323846, 0.5 * d) * std::pow(radius, d) /
         std::tgamma(0.5 * d + 1.0);
}

BoxDomain::BoxDomain(Point center, Point side_lengths)
    : center_(std::move(center)), sides_(std::move(side_lengths)) {
  if (center_.empty() || center_.size() != sides_.size())
    throw std::invalid_argument("BoxDomain: dimension mismatch");
  for (double s : sides_)
    if (!(s > 0.0) || !std::isfinite(s))
      throw std::invalid_argument("BoxDomain: side lengths must be positive");
  for (double c : center_)
    if (!std::isfinite(c))
      throw std::invalid_argument("BoxDomain: non-finite center");
}

BoxDomain BoxDomain::centered_cube(int dim, double side) {
  return BoxDomain(Point(dim, 0.0), Point(dim, side));
}

double BoxDomain::volume() const {
  double v = 1.0;
  for (double s : sides_) v *= s;
  return v;
}

double BoxDomain::diameter() const {
  double s2 = 0.0;
  for (double s : sides_) s2 += s * s;
  return std::sqrt(s2);
}

bool BoxDomain::contains(std::span<const double> x) const {
  for (int i = 0; i < dim(); ++i)
    if (!(x[i] > lo(i) && x[i] < hi(i))) return false;
  return true;
}

BoxDomain BoxDomain::padded(double pad) const {
  Point sides = sides_;
  for (double& s : sides) s += 2.0 * pad;
  return BoxDomain(center_, sides);
}

PointConfiguration::PointConfiguration(BoxDomain domain)
    : domain_(std::move(domain)) {}

PointConfiguration::PointConfiguration(BoxDomain domain,
                                       const std::vector<Point>& points)
    : domain_(std::move(domain)) {
  coords_.reserve(points.size() * domain_.dim());
  for (const Point& p : points) push_back(p);
}

void PointConfiguration::push_back(std::span<const double> x) {
  if (static_cast<int>(x.size()) != dim())
    throw std::invalid_argument("PointConfiguration: dimension mismatch");
  if (!domain_.contains(x))
    throw std::invalid_argument(
        "PointConfiguration: point outside bounding domain");
  const double tol2 = kDistinctTolerance * kDistinctTolerance;
  for (std::size_t i = 0; i < size(); ++i)
    if (squared_distance(point(i), x) <= tol2)
      throw std::invalid_argument(
          "PointConfiguration: coincident point violates simplicity");
  coords_.insert(coords_.end(), x.begin(), x.end());
}

void PointConfiguration::swap_remove(std::size_t i) {
  const int d = dim();
  const std::size_t n = size();
  for (int k = 0; k < d; ++k) coords_[i * d + k] = coords_[(n - 1) * d + k];
  coords_.resize((n - 1) * d);
}

void PointConfiguration::set_point(std::size_t i, std::span<const double> x) {
  const int d = dim();
  for (int k = 0; k < d; ++k) coords_[i * d + k] = x[k];
}

std::size_t PointConfiguration::count_in(const BoxDomain& window) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < size(); ++i)
    if (window.contains(point(i))) ++n;
  return n;
}

PointConfiguration PointConfiguration::restrict(const BoxDomain& window) const {
  PointConfiguration out(window);
  for (std::size_t i = 0; i < size(); ++i)
    if (window.contains(point(i))) out.push_back(point(i));
  return out;
}

PointConfiguration PointConfiguration::translated(
    std::span<const double> v) const {
  Point c = domain_.center();
  for (int k = 0; k < dim(); ++k) c[k] += v[k];
  PointConfiguration out(BoxDomain(c, domain_.side_lengths()));
  Point p(dim());
  for (std::size_t i = 0; i < size(); ++i) {
    const auto src = point(i);
    for (int k = 0; k < dim(); ++k) p[k] = src[k] + v[k];
    out.push_back(p);
  }
  return out;
}

bool PointConfiguration::is_simple() const {
  const double tol2 = kDistinctTolerance * kDistinctTolerance;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i + 1; j < size(); ++j)
      if (squared_distance(point(i), point(j)) <= tol2) return false;
  return true;
}

}  // namespace gibbsids
