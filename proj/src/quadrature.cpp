#include "gibbsids/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gibbsids/geometry.hpp"

namespace gibbsids {
namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double eps, double whole, double fa, double fb, double fm,
                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps)
    return left + right + delta / 15.0;
  return simpson_rec(f, a, m, 0.5 * eps, left, fa, fm, flm, depth - 1) +
         simpson_rec(f, m, b, 0.5 * eps, right, fm, fb, frm, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol) {
  if (!(b > a)) return 0.0;
  // Rough composite pass fixes the absolute budget for the recursion.
  const int n = 64;
  double rough = 0.0;
  const double h = (b - a) / n;
  for (int i = 0; i < n; ++i) {
    const double x0 = a + i * h, x1 = x0 + h;
    rough += h / 6.0 * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1));
  }
  const double eps = rel_tol * std::max(std::abs(rough), 1e-12);
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, eps, whole, fa, fb, fm, 48);
}

double adaptive_simpson_split(const std::function<double(double)>& f, double a,
                              double b, const std::vector<double>& breakpoints,
                              double rel_tol) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a, b};
  for (double c : breakpoints)
    if (c > a && c < b) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += adaptive_simpson(f, cuts[i], cuts[i + 1], rel_tol);
  return total;
}

double integrate_radial(const std::function<double(double)>& g, int dim,
                        double r_max, const std::vector<double>& breakpoints,
                        double rel_tol) {
  if (dim < 1) throw std::invalid_argument("integrate_radial: dim must be >= 1");
  const double surface = dim * ball_volume(dim, 1.0);
  auto integrand = [&](double rho) {
    return g(rho) * std::pow(rho, dim - 1);
  };
  return surface *
         adaptive_simpson_split(integrand, 0.0, r_max, breakpoints, rel_tol);
}

}  // namespace gibbsids
