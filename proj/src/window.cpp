#include "gibbsids/window.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "gibbsids/rng.hpp"

namespace gibbsids {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace

InteractionWindow InteractionWindow::ball(int dim, double radius, bool open) {
  if (dim < 1) throw std::invalid_argument("window dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw std::invalid_argument("ball window needs a positive finite radius");
  InteractionWindow w;
  w.shape_ = Shape::Ball;
  w.dim_ = dim;
  w.open_ = open;
  w.radius_ = radius;
  return w;
}

InteractionWindow InteractionWindow::box(std::vector<double> half_widths,
                                         bool open) {
  if (half_widths.empty())
    throw std::invalid_argument("box window needs at least one half-width");
  for (double h : half_widths)
    if (!(h > 0.0) || !std::isfinite(h))
      throw std::invalid_argument("box half-widths must be positive finite");
  InteractionWindow w;
  w.shape_ = Shape::Box;
  w.dim_ = static_cast<int>(half_widths.size());
  w.open_ = open;
  w.half_widths_ = std::move(half_widths);
  return w;
}

InteractionWindow InteractionWindow::star(
    std::function<double(double)> profile, bool open) {
  if (!profile) throw std::invalid_argument("star window needs a profile");
  // symmetry (S = -S) and positivity, spot-checked on a coarse angle grid
  for (int i = 0; i < 64; ++i) {
    const double t = kTwoPi * i / 64.0;
    const double r = profile(t);
    if (!(r > 0.0) || !std::isfinite(r))
      throw std::invalid_argument("star profile must be positive finite");
    const double mirror = profile(std::fmod(t + std::numbers::pi, kTwoPi));
    if (std::abs(r - mirror) > 1e-9 * std::max(1.0, r))
      throw std::invalid_argument("star profile must be symmetric under x -> -x");
  }
  InteractionWindow w;
  w.shape_ = Shape::StarRadial;
  w.dim_ = 2;
  w.open_ = open;
  w.profile_ = std::move(profile);
  return w;
}

double InteractionWindow::star_profile(double theta) const {
  theta = std::fmod(theta, kTwoPi);
  if (theta < 0.0) theta += kTwoPi;
  if (star_table_.empty()) return profile_(theta);
  const auto n = star_table_.size();
  const double pos = theta / kTwoPi * static_cast<double>(n);
  const auto i0 = static_cast<std::size_t>(pos) % n;
  const auto i1 = (i0 + 1) % n;
  const double frac = pos - std::floor(pos);
  return star_table_[i0] * (1.0 - frac) + star_table_[i1] * frac;
}

double InteractionWindow::radius_in_direction(std::span<const double> dir) const {
  if (static_cast<int>(dir.size()) != dim_)
    throw std::invalid_argument("direction dimension mismatch");
  const double len = norm2(dir);
  if (len == 0.0) throw std::invalid_argument("zero direction");
  switch (shape_) {
    case Shape::Ball:
      return radius_;
    case Shape::Box: {
      double scale = std::numeric_limits<double>::infinity();
      for (int k = 0; k < dim_; ++k)
        if (dir[k] != 0.0)
          scale = std::min(scale, half_widths_[k] / std::abs(dir[k]));
      return scale * len;
    }
    case Shape::StarRadial:
      return star_profile(std::atan2(dir[1], dir[0]));
  }
  throw std::logic_error("unreachable");
}

bool InteractionWindow::contains(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("point dimension mismatch");
  const double r = norm2(x);
  if (r == 0.0) return true;
  const double rho = radius_in_direction(x);
  return open_ ? r < rho : r <= rho;
}

double InteractionWindow::inradius() const {
  switch (shape_) {
    case Shape::Ball:
      return radius_;
    case Shape::Box:
      return *std::min_element(half_widths_.begin(), half_widths_.end());
    case Shape::StarRadial: {
      double r = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 720; ++i)
        r = std::min(r, star_profile(kTwoPi * i / 720.0));
      return r;
    }
  }
  throw std::logic_error("unreachable");
}

InteractionWindow InteractionWindow::eroded(double eps) const {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw std::invalid_argument("erosion amount must be positive finite");
  if (eps >= inradius())
    throw std::invalid_argument("erosion would empty the window");
  switch (shape_) {
    case Shape::Ball:
      return ball(dim_, radius_ - eps, open_);
    case Shape::Box: {
      std::vector<double> hw(half_widths_);
      for (double& h : hw) h -= eps;
      return box(std::move(hw), open_);
    }
    case Shape::StarRadial:
      break;
  }
  // Numeric erosion: along each sampled direction, the largest t such that
  // the closed eps-ball around t*dir stays inside the set (ball probed on a
  // direction fan). The result is tabulated and interpolated.
  constexpr int kDirs = 720;
  constexpr int kProbe = 180;
  std::vector<std::array<double, 2>> probe(kProbe);
  for (int j = 0; j < kProbe; ++j) {
    const double psi = kTwoPi * j / kProbe;
    probe[j] = {std::cos(psi), std::sin(psi)};
  }
  auto ball_fits = [&](double cx, double cy) {
    for (const auto& v : probe) {
      const double p[2] = {cx + eps * v[0], cy + eps * v[1]};
      if (!contains(p)) return false;
    }
    return true;
  };
  std::vector<double> table(kDirs);
  for (int i = 0; i < kDirs; ++i) {
    const double theta = kTwoPi * i / kDirs;
    const double cx = std::cos(theta), sy = std::sin(theta);
    const double rho = star_profile(theta);
    // coarse descent to the first feasible shell, then bisect the bracket
    constexpr int kScan = 128;
    double lo = 0.0, hi = rho;
    for (int s = kScan; s >= 0; --s) {
      const double t = rho * s / kScan;
      if (ball_fits(t * cx, t * sy)) {
        lo = t;
        hi = (s == kScan) ? t : rho * (s + 1) / kScan;
        break;
      }
    }
    for (int it = 0; it < 48 && hi - lo > 1e-15 * rho; ++it) {
      const double mid = 0.5 * (lo + hi);
      (ball_fits(mid * cx, mid * sy) ? lo : hi) = mid;
    }
    table[i] = lo;
  }
  InteractionWindow w;
  w.shape_ = Shape::StarRadial;
  w.dim_ = 2;
  w.open_ = open_;
  w.star_table_ = std::move(table);
  return w;
}

bool InteractionWindow::contains_box(std::span<const double> lo,
                                     std::span<const double> hi) const {
  if (static_cast<int>(lo.size()) != dim_ ||
      static_cast<int>(hi.size()) != dim_)
    throw std::invalid_argument("box dimension mismatch");
  switch (shape_) {
    case Shape::Ball: {
      // the gauge is a norm, so its maximum over the box sits at a corner
      double s = 0.0;
      for (int k = 0; k < dim_; ++k) {
        const double m = std::max(std::abs(lo[k]), std::abs(hi[k]));
        s += m * m;
      }
      const double r = std::sqrt(s);
      return open_ ? r < radius_ : r <= radius_;
    }
    case Shape::Box: {
      for (int k = 0; k < dim_; ++k) {
        const double m = std::max(std::abs(lo[k]), std::abs(hi[k]));
        if (open_ ? m >= half_widths_[k] : m > half_widths_[k]) return false;
      }
      return true;
    }
    case Shape::StarRadial: {
      // non-convex gauge: corner checks are not enough, sample a sub-grid
      constexpr int kGrid = 9;
      for (int a = 0; a < kGrid; ++a)
        for (int b = 0; b < kGrid; ++b) {
          const double p[2] = {
              lo[0] + (hi[0] - lo[0]) * a / (kGrid - 1),
              lo[1] + (hi[1] - lo[1]) * b / (kGrid - 1)};
          if (!contains(p)) return false;
        }
      return true;
    }
  }
  throw std::logic_error("unreachable");
}

std::string InteractionWindow::id() const {
  std::ostringstream os;
  switch (shape_) {
    case Shape::Ball:
      os << "ball(d=" << dim_ << ",r=" << radius_;
      break;
    case Shape::Box:
      os << "box(";
      for (std::size_t k = 0; k < half_widths_.size(); ++k)
        os << (k ? "x" : "") << half_widths_[k];
      break;
    case Shape::StarRadial:
      os << "star(" << (star_table_.empty() ? "profile" : "tabulated");
      break;
  }
  os << (open_ ? ",open)" : ",closed)");
  return os.str();
}

ConditionSReport check_condition_S(const InteractionWindow& S,
                                   const std::vector<double>& alphas,
                                   int directions) {
  if (alphas.empty())
    throw std::invalid_argument("need at least one scaling factor");
  for (double a : alphas)
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument("scaling factors must lie in (0,1)");
  if (directions < 8) throw std::invalid_argument("too few directions");

  std::vector<std::vector<double>> dirs;
  const int d = S.dim();
  if (d == 1) {
    dirs = {{1.0}, {-1.0}};
  } else if (d == 2) {
    dirs.reserve(directions);
    for (int i = 0; i < directions; ++i) {
      const double t = kTwoPi * i / directions;
      dirs.push_back({std::cos(t), std::sin(t)});
    }
  } else {
    RngStream rng(611953, 17);  // fixed fan: the report must be reproducible
    dirs.reserve(directions);
    while (static_cast<int>(dirs.size()) < directions) {
      std::vector<double> v(d);
      double n2 = 0.0;
      for (double& c : v) {
        c = rng.normal();
        n2 += c * c;
      }
      if (n2 < 1e-12) continue;
      for (double& c : v) c /= std::sqrt(n2);
      dirs.push_back(std::move(v));
    }
  }

  std::vector<double> rho(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i)
    rho[i] = S.radius_in_direction(dirs[i]);

  // Closure can pick up radii from arbitrarily close directions, and the
  // interior can lose them; approximate both envelopes by the neighbor
  // max/min. Continuous profiles are unaffected; a profile jump shows up.
  const bool smooth = S.shape() != InteractionWindow::Shape::StarRadial;
  ConditionSReport rep;
  rep.pass = true;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    double upper = rho[i], lower = rho[i];
    if (!smooth && d == 2) {
      const std::size_t prev = (i + dirs.size() - 1) % dirs.size();
      const std::size_t next = (i + 1) % dirs.size();
      upper = std::max({rho[prev], rho[i], rho[next]});
      lower = std::min({rho[prev], rho[i], rho[next]});
    }
    for (double a : alphas) {
      const double margin = lower - a * upper;
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_alpha = a;
        rep.worst_direction = dirs[i];
      }
    }
  }
  rep.pass = rep.worst_margin > 0.0;
  return rep;
}

}  // namespace gibbsids
