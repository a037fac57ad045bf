#include "gibbsids/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "gibbsids/bounds.hpp"
#include "gibbsids/csv.hpp"
#include "gibbsids/estimators.hpp"
#include "gibbsids/geometry.hpp"
#include "gibbsids/grid_operator.hpp"
#include "gibbsids/ids.hpp"
#include "gibbsids/interaction.hpp"
#include "gibbsids/packing.hpp"
#include "gibbsids/rng.hpp"
#include "gibbsids/sampler.hpp"
#include "gibbsids/slope_fit.hpp"
#include "gibbsids/stats.hpp"
#include "gibbsids/version.hpp"
#include "gibbsids/window.hpp"

namespace gibbsids {
namespace {

namespace fs = std::filesystem;

// ---------------------------------------------------------------- artifacts

struct Artifacts {
  std::string dir;
  std::string base;  // "<experiment>__<confighash>"
  std::vector<std::string> names;

  std::string add(const std::string& suffix, const std::string& body) {
    const std::string name = base + suffix;
    const fs::path path = fs::path(dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
    if (!out) throw std::runtime_error("write failed for " + path.string());
    names.push_back(name);
    return name;
  }

  void remove_all() {
    for (const auto& name : names) {
      std::error_code ec;
      fs::remove(fs::path(dir) / name, ec);
    }
    names.clear();
  }
};

// -------------------------------------------------------------- key parsing

std::pair<double, double> split_pair(const std::string& key,
                                     const std::string& token, char sep) {
  const auto at = token.find(sep);
  if (at == std::string::npos || at == 0 || at + 1 == token.size())
    throw ConfigError("config key '" + key + "': token '" + token +
                      "' must look like a" + sep + "b");
  try {
    std::size_t used = 0;
    const double lo = std::stod(token.substr(0, at), &used);
    if (used != at) throw std::invalid_argument("lhs");
    const std::string rhs = token.substr(at + 1);
    const double hi = std::stod(rhs, &used);
    if (used != rhs.size()) throw std::invalid_argument("rhs");
    return {lo, hi};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': token '" + token +
                      "' is not a numeric pair");
  }
}

std::vector<std::pair<double, double>> get_pairs(const ExperimentConfig& c,
                                                 const std::string& key,
                                                 char sep) {
  std::istringstream in(c.get_string(key));
  std::vector<std::pair<double, double>> out;
  std::string token;
  while (in >> token) out.push_back(split_pair(key, token, sep));
  if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
  return out;
}

SingleSitePotential parse_u0(const ExperimentConfig& c, int dim) {
  const auto knots = get_pairs(c, "u0_knots", ':');
  const std::string kind = c.get_string_or("u0_kind", "radial");
  if (kind == "radial") return SingleSitePotential::radial(knots);
  if (kind == "separable") return SingleSitePotential::separable(knots, dim);
  throw ConfigError("config key 'u0_kind': expected radial or separable, got '" +
                    kind + "'");
}

InteractionWindow parse_window(const ExperimentConfig& c, int dim) {
  const std::string shape = c.get_string("window.shape");
  const bool open = c.get_long_or("window.open", 1) != 0;
  if (shape == "ball")
    return InteractionWindow::ball(dim, c.get_double("window.radius"), open);
  if (shape == "box") {
    const auto hw = c.get_doubles("window.half_widths");
    if (static_cast<int>(hw.size()) != dim)
      throw ConfigError("config key 'window.half_widths': expected " +
                        std::to_string(dim) + " entries");
    return InteractionWindow::box(hw, open);
  }
  throw ConfigError("config key 'window.shape': expected ball or box, got '" +
                    shape + "'");
}

std::vector<std::pair<int, int>> parse_edges(const ExperimentConfig& c,
                                             const std::string& key) {
  if (!c.has(key)) return {};
  std::vector<std::pair<int, int>> out;
  for (const auto& [a, b] : get_pairs(c, key, '-')) {
    if (a != std::floor(a) || b != std::floor(b) || a < 0 || b < 0)
      throw ConfigError("config key '" + key +
                        "': edges need nonnegative integer endpoints");
    out.emplace_back(static_cast<int>(a), static_cast<int>(b));
  }
  return out;
}

BoxDomain interval_box(double lo, double hi) {
  return BoxDomain({0.5 * (lo + hi)}, {hi - lo});
}

std::string iso_utc(std::chrono::system_clock::time_point tp) {
  const std::time_t t = std::chrono::system_clock::to_time_t(tp);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char out[32];
  std::strftime(out, sizeof(out), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return out;
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

// ------------------------------------------------------------- experiments

bool run_ids_kind(const ExperimentConfig& c, Artifacts& arts,
                  std::ostringstream& summary, bool interacting) {
  const int dim = static_cast<int>(c.get_long("dim"));
  const double box_side = c.get_double("box_side");
  const double h = c.get_double("grid_spacing");
  const auto lambdas = c.get_doubles("lambdas");
  const auto replicas = static_cast<std::size_t>(c.get_long("replicas"));
  const auto u0 = parse_u0(c, dim);

  IdsSource source;
  source.intensity = c.get_double_or("intensity", 1.0);
  double a = 0.0, reach = 0.0;
  if (interacting) {
    a = c.get_double("model.a");
    reach = c.get_double("model.R");
    source.interaction = InteractionModel::pairwise(
        std::make_shared<StraussPotential>(a, reach));
    source.burn_in = static_cast<std::uint64_t>(
        c.get_long_or("sampler.burn_in", 0));
    source.spacing = static_cast<std::uint64_t>(
        c.get_long_or("sampler.spacing", 0));
  }

  RngStream rng(c.seed(), 1);
  CsvWriter table({"h", "lambda", "n_hat", "ci_low", "ci_high", "replicas"});
  IdsEstimate fine;
  for (const double spacing : {h, 0.5 * h}) {
    const IdsEstimate ids = estimate_ids(source, u0, lambdas, dim, box_side,
                                         spacing, replicas, rng);
    for (std::size_t i = 0; i < ids.lambdas.size(); ++i) {
      table.cell(spacing)
          .cell(ids.lambdas[i])
          .cell(ids.n_hat[i])
          .cell(ids.ci_low[i])
          .cell(ids.ci_high[i])
          .cell(ids.replicas);
      table.end_row();
    }
    fine = ids;
  }
  arts.add(".csv", table.body());

  SlopeFitOptions options;
  options.window_fraction = c.get_double_or("fit.window_fraction", 1.0 / 3.0);
  options.max_ci_ratio = c.get_double_or("fit.max_ci_ratio", 0.5);

  SlopeFit fit;
  std::string ordinate_kind;
  if (interacting) {
    const double resolution =
        c.get_double_or("norm.resolution", dim == 1 ? 1e-3 : 5e-2);
    const auto S = InteractionWindow::ball(dim, reach, /*open=*/false);
    const NormEstimate norm = norm_u_S(u0, S, resolution);
    fit = quadratic_slope_fit(fine, a, norm.value, options);
    ordinate_kind = "quadratic";
    summary << "packing norm value " << csv_number(norm.value) << " (slack "
            << csv_number(norm.slack) << ")\n";
  } else {
    fit = pastur_slope_fit(fine, u0, options);
    ordinate_kind = "pastur";
  }

  CsvWriter fit_table({"kind", "lambda", "ordinate", "plateau", "ci_low",
                       "ci_high", "target", "spread", "valid_points"});
  for (std::size_t i = 0; i < fit.lambdas.size(); ++i) {
    fit_table.cell(ordinate_kind)
        .cell(fit.lambdas[i])
        .cell(fit.ordinates[i])
        .cell(fit.plateau)
        .cell(fit.ci_low)
        .cell(fit.ci_high)
        .cell(fit.target)
        .cell(fit.spread)
        .cell(fit.valid_points);
    fit_table.end_row();
  }
  arts.add("__fit.csv", fit_table.body());

  summary << ordinate_kind << " plateau " << csv_number(fit.plateau)
          << " vs target " << csv_number(fit.target) << " over "
          << fit.lambdas.size() << " window points\n";
  return true;
}

bool run_hardcore_floor(const ExperimentConfig& c, Artifacts& arts,
                        std::ostringstream& summary) {
  const int dim = static_cast<int>(c.get_long("dim"));
  const double box_side = c.get_double("box_side");
  const double h = c.get_double("grid_spacing");
  const auto replicas = static_cast<std::size_t>(c.get_long("replicas"));
  const double reach = c.get_double("model.R");
  const auto u0 = parse_u0(c, dim);
  if (!u0.is_radial())
    throw ConfigError("hardcore-floor: u0_kind must be radial");

  // points affecting one node sit in a ball of radius supp(u0) around it and
  // are pairwise farther than the core reach: the usual grid cap bounds how
  // many can fit, and each contributes at least the profile minimum
  double deepest = 0.0;
  for (const double r : u0.knot_radii())
    deepest = std::min(deepest, u0.radial_value(r));
  const double rsupp = u0.support_radius();
  const double cap =
      std::pow(std::ceil(2.0 * rsupp / reach + 1.0), dim);
  const double floor = cap * deepest;

  std::vector<double> lambdas =
      c.has("lambdas") ? c.get_doubles("lambdas")
                       : std::vector<double>{floor - 1.0, floor - 0.1,
                                             floor + 0.5, 0.0};

  const auto model = InteractionModel::pairwise(
      std::make_shared<HardcorePotential>(reach));
  const BoxDomain window = BoxDomain::centered_cube(dim, box_side);
  const BoxDomain padded = window.padded(rsupp + model.range());
  const GibbsTarget target = GibbsTarget::free_boundary(model, padded);
  const double expected_points = padded.volume();
  const auto spacing = static_cast<std::uint64_t>(c.get_long_or(
      "sampler.spacing",
      50 * std::max<long>(1, static_cast<long>(expected_points))));
  const auto burn_in = static_cast<std::uint64_t>(c.get_long_or(
      "sampler.burn_in",
      500 * std::max<long>(1, static_cast<long>(expected_points))));

  RngStream rng(c.seed(), 2);
  const ChainResult chain =
      run_chain(target, burn_in + spacing * replicas, burn_in, spacing, rng);
  const Grid grid(window, h);

  CsvWriter table({"replica", "lambda", "count", "n_hat", "min_potential",
                   "floor", "potential_ok"});
  bool potentials_ok = true;
  bool counts_ok = true;
  const double volume = window.volume();
  for (std::size_t r = 0; r < chain.samples.size(); ++r) {
    const DiscreteOperator op = discretize(chain.samples[r], u0, grid);
    double min_v = 0.0;
    const double kinetic = 2.0 * dim / (h * h);
    for (std::size_t i = 0; i < op.size(); ++i)
      min_v = std::min(min_v, op.diagonal(i) - kinetic);
    const bool v_ok = min_v >= floor - 1e-9;
    potentials_ok = potentials_ok && v_ok;
    for (const double lam : lambdas) {
      const std::size_t count = count_eigenvalues_leq(op, lam);
      if (lam < floor && count > 0) counts_ok = false;
      table.cell(r)
          .cell(lam)
          .cell(count)
          .cell(static_cast<double>(count) / volume)
          .cell(min_v)
          .cell(floor)
          .cell(static_cast<long long>(v_ok));
      table.end_row();
    }
  }
  arts.add(".csv", table.body());

  const bool pass = potentials_ok && counts_ok;
  summary << verdict(potentials_ok) << ": sampled potentials stay above the "
          << "floor " << csv_number(floor) << "\n";
  summary << verdict(counts_ok)
          << ": no eigenvalue below the floor in any replica\n";
  return pass;
}

bool run_tail_sandwich(const ExperimentConfig& c, Artifacts& arts,
                       std::ostringstream& summary) {
  const int dim = static_cast<int>(c.get_long("dim"));
  const double box_side = c.get_double("box_side");
  const std::string phi = c.get_string("model.phi");
  const double reach = c.get_double("model.R");
  if (phi != "strauss")
    throw ConfigError("tail-sandwich: model.phi must be strauss (the cell "
                      "upper bound needs a uniform pair-cost floor)");
  const double a = c.get_double("model.a");
  const auto model = InteractionModel::pairwise(
      std::make_shared<StraussPotential>(a, reach));

  const BoxDomain window = BoxDomain::centered_cube(dim, box_side);
  if (window.diameter() > reach + 1e-12)
    throw ConfigError(
        "tail-sandwich: the window diameter must not exceed model.R, or the "
        "pair-cost floor fails inside the window");

  const auto steps = static_cast<std::uint64_t>(c.get_long("sampler.steps"));
  const auto burn_in =
      static_cast<std::uint64_t>(c.get_long_or("sampler.burn_in", steps / 10));
  const auto thinning =
      static_cast<std::uint64_t>(c.get_long_or("sampler.thinning", 10));
  const long n_max = c.get_long_or("n_max", 6);
  const long min_hits = c.get_long_or("min_hits", 30);

  RngStream rng(c.seed(), 3);
  const GibbsTarget target = GibbsTarget::free_boundary(model, window);
  const ChainResult chain = run_chain(target, steps, burn_in, thinning, rng);
  std::vector<std::size_t> counts;
  counts.reserve(chain.samples.size());
  for (const auto& sample : chain.samples) counts.push_back(sample.size());
  const CountPmfEstimate pmf = estimate_count_pmf(counts);

  CsvWriter table({"n", "hits", "p_hat", "ci_low", "ci_high", "log_lower",
                   "log_upper", "checked", "pass"});
  bool all_pass = true;
  long checked = 0;
  for (long n = 0; n <= n_max; ++n) {
    const std::uint64_t hits =
        n < static_cast<long>(pmf.histogram.size()) ? pmf.histogram[n] : 0;
    const WilsonInterval ci = pmf.pmf(static_cast<std::size_t>(n));
    const double lower =
        tail_lower_bound(window, static_cast<int>(n), model, 1.0, reach);
    const double upper = tail_upper_bound(
        {window}, std::vector<int>{static_cast<int>(n)}, a, {});
    const bool check = hits >= static_cast<std::uint64_t>(min_hits);
    bool ok = true;
    if (check) {
      ++checked;
      ok = lower <= std::log(ci.hi) && std::log(ci.lo) <= upper;
      all_pass = all_pass && ok;
    }
    table.cell(static_cast<long long>(n))
        .cell(static_cast<long long>(hits))
        .cell(ci.p_hat)
        .cell(ci.lo)
        .cell(ci.hi)
        .cell(lower)
        .cell(upper)
        .cell(static_cast<long long>(check))
        .cell(static_cast<long long>(ok));
    table.end_row();
  }
  arts.add(".csv", table.body());

  const bool pass = all_pass && checked > 0;
  summary << verdict(pass) << ": " << checked
          << " occupancy levels sandwiched between certified tail bounds ("
          << chain.samples.size() << " retained samples, count ESS "
          << csv_number(chain.count_ess) << ")\n";
  return pass;
}

bool run_laplace_bound(const ExperimentConfig& c, Artifacts& arts,
                       std::ostringstream& summary) {
  const int dim = static_cast<int>(c.get_long("dim"));
  if (dim != 1)
    throw ConfigError("laplace-bound: cells are interval specs, dim must be 1");
  const double box_side = c.get_double("box_side");
  const double a = c.get_double("model.a");
  const double reach = c.get_double("model.R");
  const double eps = c.get_double("eps");
  const auto t_schedule = c.get_doubles("t_schedule");
  const auto weights = c.get_doubles("v");

  std::vector<BoxDomain> cells;
  for (const auto& [lo, hi] : get_pairs(c, "cells", ':')) {
    if (!(hi > lo))
      throw ConfigError("config key 'cells': intervals need lo < hi");
    if (lo < -0.5 * box_side || hi > 0.5 * box_side)
      throw ConfigError("config key 'cells': interval escapes the box");
    cells.push_back(interval_box(lo, hi));
  }
  if (cells.size() != weights.size())
    throw ConfigError("config key 'v': one weight per cell required");

  const auto S = InteractionWindow::ball(1, reach, /*open=*/false);
  const LaplaceGrowthBound bound = upper_lap_bound(cells, weights, S, a, eps);

  const auto model = InteractionModel::pairwise(
      std::make_shared<StraussPotential>(a, reach));
  const BoxDomain window = BoxDomain::centered_cube(1, box_side);
  const auto steps = static_cast<std::uint64_t>(c.get_long("sampler.steps"));
  const auto burn_in =
      static_cast<std::uint64_t>(c.get_long_or("sampler.burn_in", steps / 10));
  const auto thinning =
      static_cast<std::uint64_t>(c.get_long_or("sampler.thinning", 10));

  RngStream rng(c.seed(), 4);
  const GibbsTarget target = GibbsTarget::free_boundary(model, window);
  const ChainResult chain = run_chain(target, steps, burn_in, thinning, rng);

  std::vector<double> field;
  field.reserve(chain.samples.size());
  for (const auto& sample : chain.samples) {
    double x = 0.0;
    for (std::size_t j = 0; j < cells.size(); ++j)
      x += weights[j] * static_cast<double>(sample.count_in(cells[j]));
    field.push_back(x);
  }

  CsvWriter table({"t", "log_laplace", "log_ci_high", "scaled", "slack",
                   "certified_bound", "pass"});
  bool all_pass = true;
  std::vector<double> log_terms(field.size());
  for (const double t : t_schedule) {
    if (!(t > 0.0))
      throw ConfigError("config key 't_schedule': t values must be positive");
    for (std::size_t i = 0; i < field.size(); ++i)
      log_terms[i] = t * field[i];
    const LogMeanEstimate lm = log_mean_exp_jackknife(log_terms);
    const double scaled = lm.log_mean / (t * t);
    const double slack = (lm.hi - lm.log_mean) / (t * t);
    const bool ok = scaled <= bound.certified + slack;
    all_pass = all_pass && ok;
    table.cell(t)
        .cell(lm.log_mean)
        .cell(lm.hi)
        .cell(scaled)
        .cell(slack)
        .cell(bound.certified)
        .cell(static_cast<long long>(ok));
    table.end_row();
  }
  arts.add(".csv", table.body());

  summary << verdict(all_pass) << ": scaled log-Laplace stays below the "
          << "certified coefficient " << csv_number(bound.certified)
          << " (family weight " << csv_number(bound.family_weight) << ")\n";
  return all_pass;
}

bool run_validity_scan(const ExperimentConfig& c, Artifacts& arts,
                       std::ostringstream& summary) {
  const double cc = c.get_double("c");
  const auto v = c.get_doubles("v");
  const auto edges = parse_edges(c, "edges");
  const double eps = c.get_double("eps");
  const auto scan = find_validity_threshold(
      cc, v, edges, eps, c.get_double("t_lo"), c.get_double("t_hi"),
      static_cast<int>(c.get_long("t_points")));

  CsvWriter table({"t", "log_sum", "bound", "holds"});
  for (std::size_t i = 0; i < scan.grid.size(); ++i) {
    table.cell(scan.grid[i])
        .cell(scan.log_sums[i])
        .cell(scan.bounds[i])
        .cell(static_cast<long long>(scan.holds[i]));
    table.end_row();
  }
  arts.add(".csv", table.body());

  summary << verdict(scan.found) << ": quadratic comparison holds from t = "
          << csv_number(scan.threshold) << " on (" << scan.violations.size()
          << " violations below)\n";
  return scan.found;
}

bool run_norm_s(const ExperimentConfig& c, Artifacts& arts,
                std::ostringstream& summary) {
  const int dim = static_cast<int>(c.get_long("dim"));
  const auto u0 = parse_u0(c, dim);
  const auto S = parse_window(c, dim);
  const NormEstimate norm = norm_u_S(u0, S, c.get_double("resolution"));

  CsvWriter table({"value", "slack", "cap", "nodes_explored", "witness_size"});
  table.cell(norm.value)
      .cell(norm.slack)
      .cell(static_cast<long long>(norm.cap))
      .cell(static_cast<long long>(norm.nodes_explored))
      .cell(static_cast<long long>(norm.witness.points.size()));
  table.end_row();
  arts.add(".csv", table.body());

  std::vector<std::string> header = {"point"};
  for (int k = 0; k < dim; ++k) header.push_back("x" + std::to_string(k));
  CsvWriter witness(header);
  for (std::size_t i = 0; i < norm.witness.points.size(); ++i) {
    witness.cell(i);
    for (int k = 0; k < dim; ++k) witness.cell(norm.witness.points[i][k]);
    witness.end_row();
  }
  arts.add("__witness.csv", witness.body());

  summary << "norm value " << csv_number(norm.value) << " + slack "
          << csv_number(norm.slack) << " with " << norm.witness.points.size()
          << " witness points\n";
  return true;
}

bool run_staircase_scan(const ExperimentConfig& c, Artifacts& arts,
                        std::ostringstream& summary) {
  const int dim = static_cast<int>(c.get_long("dim"));
  const auto u0 = parse_u0(c, dim);
  const auto S = parse_window(c, dim);
  const double b =
      c.get_double_or("erosion_factor", 2.0 * std::sqrt(double(dim)));
  std::vector<int> ns;
  for (const double n : c.get_doubles("ns")) {
    if (n < 1 || n != std::floor(n))
      throw ConfigError("config key 'ns': positive integers required");
    ns.push_back(static_cast<int>(n));
  }
  const NormEstimate lower = norm_u_S(u0, S, c.get_double("resolution"));
  const std::vector<NormEstimate> uppers = upper2_convergence(u0, S, b, ns);

  CsvWriter table({"n", "upper", "lower", "relative_gap", "pass"});
  bool all_pass = true;
  double final_gap = 0.0;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    const bool ok = uppers[i].value >= lower.value - 1e-12;
    all_pass = all_pass && ok;
    final_gap = (uppers[i].value - lower.value) / lower.value;
    table.cell(static_cast<long long>(ns[i]))
        .cell(uppers[i].value)
        .cell(lower.value)
        .cell(final_gap)
        .cell(static_cast<long long>(ok));
    table.end_row();
  }
  arts.add(".csv", table.body());

  summary << verdict(all_pass)
          << ": staircase values dominate the lattice lower bound; final gap "
          << csv_number(final_gap) << "\n";
  return all_pass;
}

bool run_weak_budget(const ExperimentConfig& c, Artifacts& arts,
                     std::ostringstream& summary) {
  const std::string kind = c.get_string("model.kind");
  InteractionModel model = [&] {
    if (kind == "softshell")
      return InteractionModel::pairwise(std::make_shared<SoftShellPotential>(
          c.get_double("model.p"), c.get_double("model.R")));
    if (kind == "area")
      return InteractionModel::area(
          static_cast<int>(c.get_long_or("dim", 1)),
          c.get_double("model.R"));
    throw ConfigError(
        "config key 'model.kind': expected softshell or area, got '" + kind +
        "'");
  }();
  const double factor = c.get_double_or("n_factor", 1.1);

  CsvWriter table({"x", "n", "budget", "ratio"});
  std::vector<double> ratios;
  for (const double x : c.get_doubles("xs")) {
    const long n = static_cast<long>(std::ceil(factor * x));
    const WeakInteractionBudget budget = weak_condition_budget(model, n, x);
    ratios.push_back(budget.ratio);
    table.cell(x)
        .cell(static_cast<long long>(n))
        .cell(budget.budget)
        .cell(budget.ratio);
    table.end_row();
  }
  arts.add(".csv", table.body());

  bool decaying = true;
  for (std::size_t i = 1; i < ratios.size(); ++i)
    decaying = decaying && ratios[i] < ratios[i - 1];
  summary << verdict(decaying)
          << ": interaction budget ratios decay along the x grid\n";
  return decaying;
}

}  // namespace

const std::vector<ExperimentSpec>& experiment_catalog() {
  static const std::vector<ExperimentSpec> catalog = {
      {"poisson-ids",
       "free-process spectral counting on a lambda grid with a log-linear "
       "plateau fit",
       {"dim", "box_side", "grid_spacing", "lambdas", "replicas", "u0_knots"},
       {"intensity", "u0_kind", "fit.window_fraction", "fit.max_ci_ratio"}},
      {"strauss-ids",
       "interacting-chain spectral counting with a quadratic plateau fit "
       "against the packing norm",
       {"dim", "box_side", "grid_spacing", "lambdas", "replicas", "u0_knots",
        "model.a", "model.R"},
       {"u0_kind", "sampler.burn_in", "sampler.spacing", "norm.resolution",
        "fit.window_fraction", "fit.max_ci_ratio"}},
      {"hardcore-floor",
       "certifies that sampled potentials and spectra respect the "
       "packing-derived hardcore floor",
       {"dim", "box_side", "grid_spacing", "replicas", "u0_knots", "model.R"},
       {"u0_kind", "sampler.burn_in", "sampler.spacing", "lambdas"}},
      {"tail-sandwich",
       "brackets empirical occupancy probabilities between certified tail "
       "bounds",
       {"dim", "box_side", "model.phi", "model.a", "model.R",
        "sampler.steps"},
       {"sampler.burn_in", "sampler.thinning", "n_max", "min_hits"}},
      {"laplace-bound",
       "checks Monte Carlo cell-field Laplace growth against the certified "
       "quadratic coefficient",
       {"dim", "box_side", "cells", "v", "model.a", "model.R", "t_schedule",
        "eps", "sampler.steps"},
       {"sampler.burn_in", "sampler.thinning"}},
      {"validity-scan",
       "locates the threshold beyond which the lattice sum obeys its "
       "quadratic comparison bound",
       {"c", "v", "eps", "t_lo", "t_hi", "t_points"},
       {"edges"}},
      {"norm-S",
       "computes the separated-packing norm with witness and certified slack",
       {"dim", "u0_knots", "resolution", "window.shape"},
       {"u0_kind", "window.radius", "window.half_widths", "window.open"}},
      {"staircase-scan",
       "checks that eroded-window staircase values dominate the packing norm "
       "along a refinement sequence",
       {"dim", "u0_knots", "window.shape", "ns", "resolution"},
       {"u0_kind", "window.radius", "window.half_widths", "window.open",
        "erosion_factor"}},
      {"weak-budget",
       "evaluates weak-interaction budgets and their decay against x log x",
       {"model.kind", "xs"},
       {"model.p", "model.R", "dim", "n_factor"}},
  };
  return catalog;
}

const ExperimentSpec* find_experiment(const std::string& name) {
  for (const auto& spec : experiment_catalog())
    if (spec.name == name) return &spec;
  return nullptr;
}

void validate_config(const ExperimentConfig& config) {
  const std::string kind = config.experiment();
  const ExperimentSpec* spec = find_experiment(kind);
  if (spec == nullptr)
    throw ConfigError("unknown experiment '" + kind +
                      "' (run the list command for the catalog)");
  config.require_keys(spec->required, spec->optional);
}

RunResult run_experiment(const ExperimentConfig& config,
                         const std::string& out_dir, int jobs) {
  validate_config(config);
  if (jobs < 1) throw ConfigError("--jobs must be at least 1");
  fs::create_directories(out_dir);

  const std::string kind = config.experiment();
  Artifacts arts{out_dir, kind + "__" + config.hash_hex(), {}};
  const auto started = std::chrono::system_clock::now();
  std::ostringstream summary;
  bool pass = true;
  try {
    if (kind == "poisson-ids") {
      pass = run_ids_kind(config, arts, summary, /*interacting=*/false);
    } else if (kind == "strauss-ids") {
      pass = run_ids_kind(config, arts, summary, /*interacting=*/true);
    } else if (kind == "hardcore-floor") {
      pass = run_hardcore_floor(config, arts, summary);
    } else if (kind == "tail-sandwich") {
      pass = run_tail_sandwich(config, arts, summary);
    } else if (kind == "laplace-bound") {
      pass = run_laplace_bound(config, arts, summary);
    } else if (kind == "validity-scan") {
      pass = run_validity_scan(config, arts, summary);
    } else if (kind == "norm-S") {
      pass = run_norm_s(config, arts, summary);
    } else if (kind == "staircase-scan") {
      pass = run_staircase_scan(config, arts, summary);
    } else if (kind == "weak-budget") {
      pass = run_weak_budget(config, arts, summary);
    } else {
      throw ConfigError("unknown experiment '" + kind + "'");
    }
  } catch (...) {
    arts.remove_all();
    throw;
  }

  RunResult result;
  result.exit_code = pass ? 0 : 2;
  result.summary = summary.str();

  nlohmann::json manifest;
  manifest["experiment"] = kind;
  manifest["config_hash"] = config.hash_hex();
  manifest["toolkit_version"] = kVersion;
  manifest["started"] = iso_utc(started);
  manifest["finished"] = iso_utc(std::chrono::system_clock::now());
  manifest["exit_code"] = result.exit_code;
  manifest["summary"] = result.summary;
  manifest["jobs"] = jobs;
  auto files = nlohmann::json::array();
  for (const auto& name : arts.names) files.push_back(name);
  files.push_back(arts.base + "__manifest.json");
  manifest["files"] = files;
  arts.add("__manifest.json", manifest.dump(2) + "\n");

  result.files = arts.names;
  return result;
}

}  // namespace gibbsids
