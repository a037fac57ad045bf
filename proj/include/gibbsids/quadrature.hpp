#pragma once

#include <functional>
#include <vector>

namespace gibbsids {

// Adaptive Simpson on [a, b] to the given relative tolerance (with a small
// absolute floor so integrals near zero terminate).
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol = 1e-8);

// Same, but the integration range is pre-split at the given interior
// breakpoints (integrand kinks); breakpoints outside (a, b) are ignored.
double adaptive_simpson_split(const std::function<double(double)>& f, double a,
                              double b, const std::vector<double>& breakpoints,
                              double rel_tol = 1e-8);

// Integral over R^d of a radial function: d * |B(0,1)| * \int_0^{r_max}
// g(rho) rho^{d-1} drho, pre-split at the breakpoints.
double integrate_radial(const std::function<double(double)>& g, int dim,
                        double r_max, const std::vector<double>& breakpoints,
                        double rel_tol = 1e-8);

}  // namespace gibbsids
