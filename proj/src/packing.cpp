#include "gibbsids/packing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>

namespace gibbsids {

namespace {

struct Candidate {
  std::vector<long> index;
  Point anchor;
  double gain;
};

// gain descending, then lexicographic index: keeps the search and its
// witness deterministic across runs
void sort_candidates(std::vector<Candidate>& cand) {
  std::sort(cand.begin(), cand.end(), [](const Candidate& a, const Candidate& b) {
    if (a.gain != b.gain) return a.gain > b.gain;
    return a.index < b.index;
  });
}

std::size_t packing_cap(double diameter, double inradius, int dim) {
  const double per_axis = std::ceil(diameter / inradius + 1.0);
  const double cap = std::pow(per_axis, dim);
  return cap > 1e9 ? static_cast<std::size_t>(1e9)
                   : static_cast<std::size_t>(cap);
}

// Pair feasibility depends only on the index difference, which lives in a
// small box; cache verdicts in a flat lazily-filled table under a
// sign-canonical key (the window is symmetric).
class PairTable {
 public:
  PairTable(const std::vector<Candidate>& cand,
            std::function<bool(const std::vector<long>&)> eval)
      : eval_(std::move(eval)) {
    if (cand.empty()) return;
    const std::size_t d = cand.front().index.size();
    std::vector<long> mn(d, std::numeric_limits<long>::max());
    std::vector<long> mx(d, std::numeric_limits<long>::min());
    for (const auto& c : cand)
      for (std::size_t k = 0; k < d; ++k) {
        mn[k] = std::min(mn[k], c.index[k]);
        mx[k] = std::max(mx[k], c.index[k]);
      }
    lo_.resize(d);
    stride_.resize(d);
    double total = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      lo_[k] = mn[k] - mx[k];
      total *= static_cast<double>(2 * (mx[k] - mn[k]) + 1);
    }
    if (total <= 1.5e8) {
      std::size_t s = 1;
      for (std::size_t k = 0; k < d; ++k) {
        stride_[k] = s;
        s *= static_cast<std::size_t>(-2 * lo_[k] + 1);
      }
      cache_.assign(s, -1);
    }
    diff_.resize(d);
  }

  bool operator()(const Candidate& a, const Candidate& b) {
    const std::size_t d = diff_.size();
    for (std::size_t k = 0; k < d; ++k) diff_[k] = a.index[k] - b.index[k];
    for (std::size_t k = 0; k < d; ++k) {
      if (diff_[k] > 0) break;
      if (diff_[k] < 0) {
        for (long& w : diff_) w = -w;
        break;
      }
    }
    if (!cache_.empty()) {
      std::size_t flat = 0;
      for (std::size_t k = 0; k < d; ++k)
        flat += static_cast<std::size_t>(diff_[k] - lo_[k]) * stride_[k];
      signed char& slot = cache_[flat];
      if (slot < 0) slot = eval_(diff_) ? 1 : 0;
      return slot == 1;
    }
    auto it = overflow_.find(diff_);
    if (it != overflow_.end()) return it->second;
    const bool f = eval_(diff_);
    overflow_.emplace(diff_, f);
    return f;
  }

 private:
  std::function<bool(const std::vector<long>&)> eval_;
  std::vector<long> lo_;
  std::vector<std::size_t> stride_;
  std::vector<signed char> cache_;
  std::map<std::vector<long>, bool> overflow_;
  std::vector<long> diff_;
};

// Max-weight search over the pairwise-compatibility graph. Candidates are
// gain-sorted, so the bound "current + top remaining gains, at most the cap
// room" shrinks along each pool and the loop can stop at the first miss.
template <class Feasible>
class PackingSearch {
 public:
  PackingSearch(const std::vector<Candidate>& cand, Feasible& feasible,
                std::size_t cap)
      : cand_(cand), feasible_(feasible), cap_(std::max<std::size_t>(cap, 1)) {}

  void run() {
    std::vector<std::size_t> pool(cand_.size());
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<std::size_t> chosen;
    expand(pool, 0.0, chosen);
  }

  double best_value() const { return best_; }
  const std::vector<std::size_t>& best_set() const { return best_set_; }
  std::size_t nodes() const { return nodes_; }

 private:
  void expand(const std::vector<std::size_t>& pool, double value,
              std::vector<std::size_t>& chosen) {
    ++nodes_;
    if (value > best_) {
      best_ = value;
      best_set_ = chosen;
    }
    if (pool.empty() || chosen.size() >= cap_) return;
    const std::size_t room = cap_ - chosen.size();

    std::vector<double> pref(pool.size() + 1, 0.0);
    for (std::size_t i = 0; i < pool.size(); ++i)
      pref[i + 1] = pref[i] + cand_[pool[i]].gain;

    std::vector<std::size_t> sub;
    for (std::size_t pos = 0; pos < pool.size(); ++pos) {
      const std::size_t take = std::min(room, pool.size() - pos);
      if (value + pref[pos + take] - pref[pos] <= best_) break;
      const std::size_t p = pool[pos];
      sub.clear();
      for (std::size_t j = pos + 1; j < pool.size(); ++j)
        if (feasible_(cand_[p], cand_[pool[j]])) sub.push_back(pool[j]);
      chosen.push_back(p);
      expand(sub, value + cand_[p].gain, chosen);
      chosen.pop_back();
    }
  }

  const std::vector<Candidate>& cand_;
  Feasible& feasible_;
  std::size_t cap_;
  double best_ = 0.0;
  std::vector<std::size_t> best_set_;
  std::size_t nodes_ = 0;
};

NormEstimate run_packing(std::vector<Candidate> cand,
                         std::function<bool(const std::vector<long>&)> diff_eval,
                         std::size_t cap) {
  sort_candidates(cand);
  PairTable feasible(cand, std::move(diff_eval));
  PackingSearch<PairTable> search(cand, feasible, cap);
  search.run();
  NormEstimate est;
  est.value = search.best_value();
  est.cap = cap;
  est.nodes_explored = search.nodes();
  std::vector<std::size_t> chosen = search.best_set();
  std::sort(chosen.begin(), chosen.end(),
            [&](std::size_t a, std::size_t b) { return cand[a].index < cand[b].index; });
  for (std::size_t i : chosen) est.witness.points.push_back(cand[i].anchor);
  est.witness.objective = est.value;
  return est;
}

}  // namespace

NormEstimate norm_u_S(const SingleSitePotential& u0, const InteractionWindow& S,
                      double resolution) {
  const int d = S.dim();
  if (!(resolution > 0.0) || !std::isfinite(resolution))
    throw std::invalid_argument("resolution must be positive finite");
  const double rax = u0.knot_radii().back();  // per-axis support half-extent
  const long m = static_cast<long>(std::floor(rax / resolution + 1e-12));
  if (2 * m + 1 < 4)
    throw std::invalid_argument(
        "resolution too coarse: fewer than 4 lattice nodes span the support");
  const double nodes_total = std::pow(2.0 * m + 1.0, d);
  if (nodes_total > 3.4e7)
    throw std::invalid_argument("lattice too large for this resolution");

  std::vector<Candidate> cand;
  std::vector<long> idx(d, -m);
  Point x(d);
  double umax = 0.0;
  while (true) {
    for (int k = 0; k < d; ++k) x[k] = idx[k] * resolution;
    const double u = u0.reflected(x);
    umax = std::max(umax, u);
    if (u > 0.0) cand.push_back({idx, x, u * u});
    int k = 0;
    while (k < d) {
      if (++idx[k] <= m) break;
      idx[k] = -m;
      ++k;
    }
    if (k == d) break;
  }

  const std::size_t cap =
      packing_cap(2.0 * u0.support_radius(), S.inradius(), d);
  auto diff_eval = [&S, resolution, d](const std::vector<long>& dv) {
    Point diff(d);
    for (int k = 0; k < d; ++k) diff[k] = dv[k] * resolution;
    return !S.contains(diff);
  };

  NormEstimate est = run_packing(std::move(cand), diff_eval, cap);
  // off-lattice allowance: each optimum point moves at most half a lattice
  // diagonal, changing each squared gain by at most delta*(2*umax + delta)
  const double delta = u0.lipschitz_bound() *
                       std::sqrt(static_cast<double>(d)) * resolution / 2.0;
  est.slack = static_cast<double>(est.cap) * delta * (2.0 * umax + delta);
  return est;
}

Staircase::Staircase(const SingleSitePotential& u0, int dim, int n)
    : dim_(dim), n_(n) {
  if (dim < 1) throw std::invalid_argument("staircase dimension must be >= 1");
  if (n < 1) throw std::invalid_argument("staircase refinement must be >= 1");
  const double rax = u0.knot_radii().back();
  const long jlo = static_cast<long>(std::floor(-rax * n)) - 1;
  const long jhi = static_cast<long>(std::ceil(rax * n));
  const std::vector<double> radii = u0.knot_radii();

  // per-axis sample abscissae for one cell closure [a, b]
  auto axis_samples = [&](double a, double b) {
    std::vector<double> t;
    for (int i = 0; i <= 8; ++i) t.push_back(a + (b - a) * i / 8.0);
    for (double r : radii) {
      if (a < r && r < b) t.push_back(r);
      if (a < -r && -r < b) t.push_back(-r);
    }
    return t;
  };

  std::vector<long> j(dim, jlo);
  while (true) {
    std::vector<std::vector<double>> axes(dim);
    for (int k = 0; k < dim; ++k)
      axes[k] = axis_samples(static_cast<double>(j[k]) / n,
                             static_cast<double>(j[k] + 1) / n);
    double sup = 0.0;
    std::vector<std::size_t> pick(dim, 0);
    Point x(dim);
    while (true) {
      for (int k = 0; k < dim; ++k) x[k] = axes[k][pick[k]];
      sup = std::max(sup, u0.reflected(x));
      int k = 0;
      while (k < dim) {
        if (++pick[k] < axes[k].size()) break;
        pick[k] = 0;
        ++k;
      }
      if (k == dim) break;
    }
    if (sup > 0.0) cells_.push_back({j, sup});
    int k = 0;
    while (k < dim) {
      if (++j[k] <= jhi) break;
      j[k] = jlo;
      ++k;
    }
    if (k == dim) break;
  }
  std::sort(cells_.begin(), cells_.end(),
            [](const Cell& a, const Cell& b) { return a.index < b.index; });
}

double Staircase::value(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("staircase dimension mismatch");
  std::vector<long> j(dim_);
  for (int k = 0; k < dim_; ++k)
    j[k] = static_cast<long>(std::ceil(x[k] * n_)) - 1;  // x in (j/n,(j+1)/n]
  auto it = std::lower_bound(
      cells_.begin(), cells_.end(), j,
      [](const Cell& c, const std::vector<long>& key) { return c.index < key; });
  if (it == cells_.end() || it->index != j) return 0.0;
  return it->value;
}

Point Staircase::cell_center(const Cell& c) const {
  Point p(dim_);
  for (int k = 0; k < dim_; ++k)
    p[k] = (static_cast<double>(c.index[k]) + 0.5) / n_;
  return p;
}

namespace {

NormEstimate staircase_upper_impl(const Staircase& un,
                                  const InteractionWindow& S, bool squared) {
  const int d = un.dim();
  if (S.dim() != d)
    throw std::invalid_argument("window/staircase dimension mismatch");
  const double step = 1.0 / un.n();

  // two points of one cell differ by something in the cell-size box; if that
  // box is not swallowed by S, a set-per-cell search would undercount
  {
    std::vector<double> lo(d, -step), hi(d, step);
    if (!S.contains_box(lo, hi))
      throw std::invalid_argument(
          "cell size too coarse for the window: same-cell pairs could separate");
  }

  std::vector<Candidate> cand;
  std::vector<double> bb_lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> bb_hi(d, -std::numeric_limits<double>::infinity());
  for (const auto& c : un.cells()) {
    cand.push_back({c.index, un.cell_center(c),
                    squared ? c.value * c.value : c.value});
    for (int k = 0; k < d; ++k) {
      bb_lo[k] = std::min(bb_lo[k], c.index[k] * step);
      bb_hi[k] = std::max(bb_hi[k], (c.index[k] + 1) * step);
    }
  }
  double diam2 = 0.0;
  for (int k = 0; k < d; ++k) diam2 += (bb_hi[k] - bb_lo[k]) * (bb_hi[k] - bb_lo[k]);
  const std::size_t cap = cand.empty()
                              ? 1
                              : packing_cap(std::sqrt(diam2), S.inradius(), d);

  auto diff_eval = [&S, step, d](const std::vector<long>& dv) {
    // closed hull of realizable differences between the two cell closures
    std::vector<double> lo(d), hi(d);
    for (int k = 0; k < d; ++k) {
      lo[k] = (dv[k] - 1) * step;
      hi[k] = (dv[k] + 1) * step;
    }
    return !S.contains_box(lo, hi);
  };
  return run_packing(std::move(cand), diff_eval, cap);
}

}  // namespace

NormEstimate staircase_norm_upper(const Staircase& un,
                                  const InteractionWindow& S) {
  return staircase_upper_impl(un, S, /*squared=*/true);
}

NormEstimate staircase_sum_upper(const Staircase& un,
                                 const InteractionWindow& S) {
  return staircase_upper_impl(un, S, /*squared=*/false);
}

NormEstimate staircase_anchor_norm(const Staircase& un,
                                   const InteractionWindow& S) {
  const int d = un.dim();
  if (S.dim() != d)
    throw std::invalid_argument("window/staircase dimension mismatch");
  const double step = 1.0 / un.n();

  std::vector<Candidate> cand;
  std::vector<double> bb_lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> bb_hi(d, -std::numeric_limits<double>::infinity());
  for (const auto& c : un.cells()) {
    cand.push_back({c.index, un.cell_center(c), c.value * c.value});
    for (int k = 0; k < d; ++k) {
      bb_lo[k] = std::min(bb_lo[k], c.index[k] * step);
      bb_hi[k] = std::max(bb_hi[k], (c.index[k] + 1) * step);
    }
  }
  double diam2 = 0.0;
  for (int k = 0; k < d; ++k)
    diam2 += (bb_hi[k] - bb_lo[k]) * (bb_hi[k] - bb_lo[k]);
  const std::size_t cap =
      cand.empty() ? 1 : packing_cap(std::sqrt(diam2), S.inradius(), d);

  auto diff_eval = [&S, step, d](const std::vector<long>& dv) {
    Point diff(d);  // center differences are exact index multiples of 1/n
    for (int k = 0; k < d; ++k) diff[k] = dv[k] * step;
    return !S.contains(diff);
  };
  return run_packing(std::move(cand), diff_eval, cap);
}

std::vector<NormEstimate> upper2_convergence(const SingleSitePotential& u0,
                                             const InteractionWindow& S,
                                             double b,
                                             const std::vector<int>& ns) {
  if (!(b >= 0.0) || !std::isfinite(b))
    throw std::invalid_argument("erosion scale must be a nonnegative real");
  std::vector<NormEstimate> out;
  out.reserve(ns.size());
  for (int n : ns) {
    Staircase un(u0, S.dim(), n);
    out.push_back(
        staircase_anchor_norm(un, b == 0.0 ? S : S.eroded(b / n)));
  }
  return out;
}

}  // namespace gibbsids
