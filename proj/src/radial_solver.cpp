// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

#include "quasispec/radial_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "quasispec/errors.hpp"
#include "quasispec/potential.hpp"

namespace quasispec::radial
{

namespace
{

// |u| above this triggers a rescale by its inverse.
constexpr double rescale_threshold = 1e150;
// Decay exponent int sqrt(w) ds past the outer turning point after which chi is set to 0.
constexpr double max_tail_exponent = 500.0;
// Numerov needs h^2 w / 12 well below one.
constexpr double max_numerov_load = 0.5;

int sign_of(double v)
{
  return (v > 0.0) - (v < 0.0);
}

double trapezoid_chi2(const std::vector<double> &r, const std::vector<double> &chi)
{
  double s = 0.0;
  for (std::size_t i = 1; i < r.size(); ++i)
  {
    s += 0.5 * (r[i] - r[i - 1]) * (chi[i] * chi[i] + chi[i - 1] * chi[i - 1]);
  }
  return s;
}

}  // namespace

int count_nodes(std::span<const double> chi)
{
  int nodes = 0;
  int last = 0;
  for (double v : chi)
  {
    const int s = sign_of(v);
    if (s == 0)
    {
      continue;
    }
    if (last != 0 && s != last)
    {
      ++nodes;
    }
    last = s;
  }
  return nodes;
}

RadialGrid default_grid(const ModelParams &params, double binding, double e_param, std::size_t n_points)
{
  params.validate();
  if (!(binding > 0.0))
  {
    throw DomainError("default_grid: binding energy estimate must be > 0");
  }
  if (!(e_param >= 0.0))
  {
    throw DomainError("default_grid: e_param must be >= 0");
  }
  const double bohr = 2.0 / (params.mass * params.alpha);
  const double kappa = std::sqrt(params.mass * binding);
  double r_max = std::max(20.0 / kappa, 50.0 * bohr);
  if (e_param > 0.0)
  {
    r_max = std::max(r_max, 20.0 / e_param);
  }
  RadialGrid g;
  g.r_min = 1e-5 * bohr;
  g.r_max = r_max;
  g.n_points = n_points;
  g.spacing = GridSpacing::logarithmic;
  g.validate();
  return g;
}

FrozenProblem::FrozenProblem(const ModelParams &params, double e_param, const RadialGrid &grid, SolverOptions options)
  : params_(params), e_param_(e_param), grid_(grid), options_(options)
{
  params_.validate();
  grid_.validate();
  if (!(e_param >= 0.0) || !std::isfinite(e_param))
  {
    throw DomainError("FrozenProblem: e_param must be finite and >= 0");
  }
  log_grid_ = grid_.spacing == GridSpacing::logarithmic;
  h_ = grid_.step();
  r_ = grid_.radii();
  base_.resize(r_.size());
  slope_.resize(r_.size());
  const double m = params_.mass;
  const double l = params_.l;
  for (std::size_t i = 0; i < r_.size(); ++i)
  {
    const double r = r_[i];
    const double v = potential::v_of_r(params_, e_param_, r);
    if (log_grid_)
    {
      base_[i] = r * r * m * v + (l + 0.5) * (l + 0.5);
      slope_[i] = r * r * m;
    }
    else
    {
      base_[i] = m * v + l * (l + 1.0) / (r * r);
      slope_[i] = m;
    }
  }
}

void FrozenProblem::start_values(double binding, double &u0, double &u1) const
{
  (void)binding;
  // chi ~ r^{l+1} (1 + c r) from the Coulomb-like core of the potential.
  const double l = params_.l;
  const double c = -params_.mass * params_.alpha * params_.charge_sign / (2.0 * (l + 1.0));
  auto u_at = [&](double r) {
    const double chi = std::pow(r, l + 1.0) * (1.0 + c * r);
    return log_grid_ ? chi / std::sqrt(r) : chi;
  };
  u0 = u_at(r_[0]);
  u1 = u_at(r_[1]);
}

std::size_t FrozenProblem::outer_cut(double binding, std::size_t *turning_point) const
{
  const std::size_t n = r_.size();
  std::size_t it = 0;
  for (std::size_t i = n; i-- > 0;)
  {
    if (base_[i] + slope_[i] * binding <= 0.0)
    {
      it = i;
      break;
    }
  }
  if (turning_point != nullptr)
  {
    *turning_point = it;
  }
  double phi = 0.0;
  const double h2 = h_ * h_ / 12.0;
  for (std::size_t i = it + 1; i < n; ++i)
  {
    const double w = base_[i] + slope_[i] * binding;
    if (h2 * w > max_numerov_load)
    {
      return std::max<std::size_t>(i - 1, std::min<std::size_t>(it + 2, n - 1));
    }
    phi += h_ * std::sqrt(std::max(w, 0.0));
    if (phi > max_tail_exponent)
    {
      return i;
    }
  }
  return n - 1;
}

FrozenProblem::Sweep FrozenProblem::sweep(double binding) const
{
  Sweep out;
  out.cut = outer_cut(binding, nullptr);
  const double h2 = h_ * h_ / 12.0;
  auto f = [&](std::size_t i) { return 1.0 - h2 * (base_[i] + slope_[i] * binding); };

  double u_prev = 0.0;
  double u_cur = 0.0;
  start_values(binding, u_prev, u_cur);
  int last = sign_of(u_cur) != 0 ? sign_of(u_cur) : sign_of(u_prev);
  double f_prev = f(0);
  double f_cur = f(1);
  for (std::size_t i = 1; i < out.cut; ++i)
  {
    const double f_next = f(i + 1);
    const double u_next = ((12.0 - 10.0 * f_cur) * u_cur - f_prev * u_prev) / f_next;
    const int s = sign_of(u_next);
    if (s != 0)
    {
      if (last != 0 && s != last)
      {
        ++out.nodes;
      }
      last = s;
    }
    u_prev = u_cur;
    u_cur = u_next;
    f_prev = f_cur;
    f_cur = f_next;
    if (std::abs(u_cur) > rescale_threshold)
    {
      u_prev /= rescale_threshold;
      u_cur /= rescale_threshold;
    }
  }
  return out;
}

double FrozenProblem::bisect(int n_radial, int *iterations) const
{
  if (n_radial < 0)
  {
    throw DomainError("radial solver: n_radial must be >= 0");
  }
  const double m = params_.mass;
  double shallow = options_.min_binding * m;
  double deep = options_.max_binding * m;
  if (sweep(deep).nodes > n_radial)
  {
    throw NoBoundState("radial solver: level lies deeper than the search interval");
  }
  if (sweep(shallow).nodes <= n_radial)
  {
    throw NoBoundState("radial solver: no level with " + std::to_string(n_radial) + " nodes (l = "
                       + std::to_string(params_.l) + ", e_param = " + std::to_string(e_param_) + ")");
  }
  int it = 0;
  // Geometric bisection across the decades, then arithmetic to full precision.
  while (deep / shallow > 1.01 && it < 400)
  {
    const double mid = std::sqrt(deep * shallow);
    (sweep(mid).nodes > n_radial ? shallow : deep) = mid;
    ++it;
  }
  while (deep - shallow > options_.eigen_rel_tolerance * deep && it < 400)
  {
    const double mid = 0.5 * (deep + shallow);
    if (mid <= shallow || mid >= deep)
    {
      break;
    }
    (sweep(mid).nodes > n_radial ? shallow : deep) = mid;
    ++it;
  }
  if (iterations != nullptr)
  {
    *iterations = it;
  }
  return 0.5 * (deep + shallow);
}

double FrozenProblem::binding_energy(int n_radial) const
{
  return bisect(n_radial, nullptr);
}

Wavefunction FrozenProblem::outward_solution(double binding) const
{
  const std::size_t n = r_.size();
  const double h2 = h_ * h_ / 12.0;
  auto f = [&](std::size_t i) { return 1.0 - h2 * (base_[i] + slope_[i] * binding); };
  std::vector<double> u(n);
  Wavefunction out;
  start_values(binding, u[0], u[1]);
  for (std::size_t i = 1; i + 1 < n; ++i)
  {
    u[i + 1] = ((12.0 - 10.0 * f(i)) * u[i] - f(i - 1) * u[i - 1]) / f(i + 1);
    if (std::abs(u[i + 1]) > rescale_threshold)
    {
      for (std::size_t k = 0; k <= i + 1; ++k)
      {
        u[k] /= rescale_threshold;
      }
      ++out.rescalings;
    }
  }
  out.r = r_;
  out.chi.resize(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    out.chi[i] = log_grid_ ? u[i] * std::sqrt(r_[i]) : u[i];
  }
  return out;
}

EigenResult FrozenProblem::solve(int n_radial) const
{
  EigenResult res;
  res.e_param = e_param_;
  res.l = params_.l;
  res.n_radial = n_radial;
  res.grid = grid_;
  res.binding_energy = bisect(n_radial, &res.iterations);
  const double binding = res.binding_energy;

  const std::size_t n = r_.size();
  std::size_t turning = 0;
  const std::size_t cut = outer_cut(binding, &turning);
  std::size_t match = turning;
  if (match < 2 || match + 2 > cut)
  {
    match = cut / 2;
  }

  const double h2 = h_ * h_ / 12.0;
  std::vector<double> w(n);
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    w[i] = base_[i] + slope_[i] * binding;
    f[i] = 1.0 - h2 * w[i];
  }

  // Outward up to match + 1.
  std::vector<double> u(n, 0.0);
  start_values(binding, u[0], u[1]);
  for (std::size_t i = 1; i <= match; ++i)
  {
    u[i + 1] = ((12.0 - 10.0 * f[i]) * u[i] - f[i - 1] * u[i - 1]) / f[i + 1];
    if (std::abs(u[i + 1]) > rescale_threshold)
    {
      for (std::size_t k = 0; k <= i + 1; ++k)
      {
        u[k] /= rescale_threshold;
      }
      ++res.rescalings;
    }
  }
  const double u_out_match = u[match];
  const double u_out_next = u[match + 1];

  // Inward from the cut with WKB-decaying start values, down to match.
  std::vector<double> v(n, 0.0);
  v[cut] = 1.0;
  {
    const double wa = std::max(w[cut - 1], 1e-300);
    const double wb = std::max(w[cut], 1e-300);
    v[cut - 1] = std::pow(wb / wa, 0.25) * std::exp(0.5 * h_ * (std::sqrt(wa) + std::sqrt(wb)));
  }
  for (std::size_t i = cut - 1; i > match; --i)
  {
    v[i - 1] = ((12.0 - 10.0 * f[i]) * v[i] - f[i + 1] * v[i + 1]) / f[i - 1];
    if (std::abs(v[i - 1]) > rescale_threshold)
    {
      for (std::size_t k = i - 1; k <= cut; ++k)
      {
        v[k] /= rescale_threshold;
      }
      ++res.rescalings;
    }
  }
  const double scale = u_out_match / v[match];
  for (std::size_t i = match + 1; i <= cut; ++i)
  {
    u[i] = scale * v[i];
  }
  for (std::size_t i = cut + 1; i < n; ++i)
  {
    u[i] = 0.0;
  }

  // Relative residual of the three-point recurrence over the interior.
  double u_max = 0.0;
  for (std::size_t i = 0; i <= cut; ++i)
  {
    u_max = std::max(u_max, std::abs(u[i]));
  }
  double residual = 0.0;
  for (std::size_t i = 1; i < cut; ++i)
  {
    if (std::abs(u[i]) < 1e-100 * u_max)
    {
      continue;
    }
    const double a = f[i + 1] * u[i + 1];
    const double b = (12.0 - 10.0 * f[i]) * u[i];
    const double c = f[i - 1] * u[i - 1];
    const double denom = std::abs(a) + std::abs(b) + std::abs(c);
    if (denom > 0.0)
    {
      residual = std::max(residual, std::abs(a - b + c) / denom);
    }
  }
  (void)u_out_next;
  res.residual = residual;

  res.r = r_;
  res.chi.resize(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    res.chi[i] = log_grid_ ? u[i] * std::sqrt(r_[i]) : u[i];
  }
  double chi_max = 0.0;
  for (double c : res.chi)
  {
    chi_max = std::max(chi_max, std::abs(c));
  }
  if (chi_max > 0.0)
  {
    for (double &c : res.chi)
    {
      c /= chi_max;
    }
  }
  const double norm = trapezoid_chi2(res.r, res.chi);
  const double inv = 1.0 / std::sqrt(norm);
  for (double &c : res.chi)
  {
    c *= inv;
  }
  // Fix the overall sign so chi > 0 near the origin.
  if (res.chi[1] < 0.0)
  {
    for (double &c : res.chi)
    {
      c = -c;
    }
  }
  res.norm = trapezoid_chi2(res.r, res.chi);
  res.node_count = count_nodes(res.chi);
  res.converged = res.node_count == n_radial && res.residual <= 1e-6 && std::abs(res.norm - 1.0) <= 1e-8;
  return res;
}

Wavefunction integrate_outward(const ModelParams &params, double e_param, double trial_energy, const RadialGrid &grid)
{
  if (!(trial_energy < 0.0))
  {
    throw DomainError("integrate_outward: trial_energy must be < 0 (bound-state convention)");
  }
  const FrozenProblem problem(params, e_param, grid);
  return problem.outward_solution(-trial_energy);
}

namespace
{

bool tail_decayed(const EigenResult &state, double fraction)
{
  double chi_max = 0.0;
  for (double c : state.chi)
  {
    chi_max = std::max(chi_max, std::abs(c));
  }
  return std::abs(state.chi.back()) <= fraction * chi_max;
}

// Binding energy with grid extension until the decay exponent at the last grid point
// corresponds to the tail fraction.
double frozen_binding(const ModelParams &params, double e_param, int n_radial, const RadialGrid &grid,
                      const SolverOptions &options)
{
  RadialGrid g = grid;
  for (int ext = 0;; ++ext)
  {
    const FrozenProblem problem(params, e_param, g, options);
    const double binding = problem.binding_energy(n_radial);
    if (ext >= options.max_extensions || problem.tail_resolved(binding, options.tail_fraction))
    {
      return binding;
    }
    g = g.extended(2.0);
  }
}

}  // namespace

bool FrozenProblem::tail_resolved(double binding, double fraction) const
{
  std::size_t turning = 0;
  const std::size_t cut = outer_cut(binding, &turning);
  if (cut + 1 < r_.size())
  {
    return true;
  }
  double phi = 0.0;
  for (std::size_t i = turning + 1; i < r_.size(); ++i)
  {
    phi += h_ * std::sqrt(std::max(base_[i] + slope_[i] * binding, 0.0));
  }
  return phi >= -std::log(fraction);
}

EigenResult solve_linear_eigenvalue(const ModelParams &params, double e_param, int n_radial, const RadialGrid &grid,
                                    SolverOptions options)
{
  RadialGrid g = grid;
  for (int ext = 0;; ++ext)
  {
    const FrozenProblem problem(params, e_param, g, options);
    EigenResult res = problem.solve(n_radial);
    if (ext >= options.max_extensions || tail_decayed(res, options.tail_fraction))
    {
      return res;
    }
    g = g.extended(2.0);
  }
}

double self_consistency_mismatch(const ModelParams &params, int n_radial, double e_param, const RadialGrid &grid,
                                 SolverOptions options)
{
  if (!(e_param > 0.0))
  {
    throw DomainError("self_consistency_mismatch: e_param must be > 0");
  }
  try
  {
    return e_param - frozen_binding(params, e_param, n_radial, grid, options);
  }
  catch (const NoBoundState &)
  {
    return e_param;
  }
}

namespace
{

struct MismatchTracker
{
  const ModelParams &params;
  int n_radial;
  const RadialGrid &grid;
  const SolverOptions &options;
  SelfConsistencyReport report;

  double operator()(double e)
  {
    const double g = self_consistency_mismatch(params, n_radial, e, grid, options);
    report.e_param_history.push_back(e);
    report.mismatch_history.push_back(g);
    return g;
  }

  int evaluations() const { return static_cast<int>(report.e_param_history.size()); }
};

// TOMS 748 refinement of a sign-changing bracket of g; returns the root estimate.
template <class G>
double refine_root(G &g, double lo, double hi, double g_lo, double g_hi, const SolverOptions &options,
                   std::uintmax_t max_iter, std::pair<double, double> *bracket)
{
  const double rel = options.self_consistency_rel_tolerance;
  auto tol = [rel](double a, double b) { return std::abs(b - a) <= rel * std::min(std::abs(a), std::abs(b)); };
  auto fn = [&g](double e) { return g(e); };
  std::pair<double, double> r = boost::math::tools::toms748_solve(fn, lo, hi, g_lo, g_hi, tol, max_iter);
  if (bracket != nullptr)
  {
    *bracket = r;
  }
  return 0.5 * (r.first + r.second);
}

}  // namespace

SelfConsistentLevel solve_self_consistent(const ModelParams &params, int n_radial, const RadialGrid &grid,
                                          double e_init, SolverOptions options)
{
  params.validate();
  if (!(e_init > 0.0) || !std::isfinite(e_init))
  {
    throw DomainError("solve_self_consistent: e_init must be > 0");
  }
  MismatchTracker g{params, n_radial, grid, options, {}};
  const int max_evals = options.max_self_consistency_iterations;
  const double m = params.mass;

  double lo = e_init;
  double hi = e_init;
  double g_lo = g(e_init);
  double g_hi = g_lo;
  if (g_lo == 0.0)
  {
    g.report.bracket = {e_init, e_init};
    return {solve_linear_eigenvalue(params, e_init, n_radial, grid, options), g.report};
  }
  if (g_lo < 0.0)
  {
    while (g_hi < 0.0)
    {
      lo = hi;
      g_lo = g_hi;
      hi *= 2.0;
      if (hi > 4.0 * m)
      {
        throw NoBoundState("solve_self_consistent: no upper bracket for g(E)", g.report);
      }
      if (g.evaluations() >= max_evals)
      {
        throw NoConvergence("solve_self_consistent: iteration budget exhausted while bracketing", g.report);
      }
      g_hi = g(hi);
    }
  }
  else
  {
    while (g_lo > 0.0)
    {
      hi = lo;
      g_hi = g_lo;
      lo *= 0.5;
      if (lo < 1e-14 * m)
      {
        throw NoBoundState("solve_self_consistent: no lower bracket for g(E)", g.report);
      }
      if (g.evaluations() >= max_evals)
      {
        throw NoConvergence("solve_self_consistent: iteration budget exhausted while bracketing", g.report);
      }
      g_lo = g(lo);
    }
  }

  const int used = g.evaluations();
  if (used >= max_evals)
  {
    throw NoConvergence("solve_self_consistent: iteration budget exhausted while bracketing", g.report);
  }
  std::uintmax_t max_iter = static_cast<std::uintmax_t>(max_evals - used);
  std::pair<double, double> bracket{lo, hi};
  double root = lo;
  if (g_hi == 0.0)
  {
    root = hi;
  }
  else if (g_lo != 0.0)
  {
    try
    {
      root = refine_root(g, lo, hi, g_lo, g_hi, options, max_iter, &bracket);
    }
    catch (const std::exception &e)
    {
      throw NoConvergence(std::string("solve_self_consistent: root refinement failed: ") + e.what(), g.report);
    }
  }
  g.report.bracket = bracket;
  const double g_root = g(root);
  const bool width_ok = std::abs(bracket.second - bracket.first)
                        <= 2.0 * options.self_consistency_rel_tolerance * std::abs(root);
  if (std::abs(g_root) > options.self_consistency_tolerance * m || !width_ok)
  {
    if (g.evaluations() >= max_evals || std::abs(g_root) > options.self_consistency_tolerance * m)
    {
      throw NoConvergence("solve_self_consistent: |g(E*)| = " + std::to_string(std::abs(g_root))
                              + " after " + std::to_string(g.evaluations()) + " evaluations",
                          g.report);
    }
  }
  EigenResult state = solve_linear_eigenvalue(params, root, n_radial, grid, options);
  return {std::move(state), std::move(g.report)};
}

std::pair<int, double> nearest_coulomb_level(const ModelParams &params, double binding)
{
  params.validate();
  if (!(binding > 0.0))
  {
    throw DomainError("nearest_coulomb_level: binding must be > 0");
  }
  const double n_real = std::sqrt(params.mass * params.alpha * params.alpha / (4.0 * binding));
  const int n_floor = std::max(1, static_cast<int>(std::floor(n_real)));
  int best_n = n_floor;
  double best = std::numeric_limits<double>::infinity();
  for (int n = std::max(1, n_floor - 1); n <= n_floor + 2; ++n)
  {
    const double e_n = params.coulomb_level(n);
    const double dev = std::abs(binding - e_n) / e_n;
    if (dev < best)
    {
      best = dev;
      best_n = n;
    }
  }
  return {best_n, best};
}

std::vector<ScannedLevel> scan_extra_levels(const ModelParams &params, const RadialGrid &grid, int n_max,
                                            std::pair<double, double> e_window, LevelScanOptions options)
{
  params.validate();
  grid.validate();
  const auto [e_lo, e_hi] = e_window;
  if (n_max < 0)
  {
    throw DomainError("scan_extra_levels: n_max must be >= 0");
  }
  if (!(e_lo > 0.0) || !(e_hi <= 2.0 * params.mass))
  {
    throw DomainError("scan_extra_levels: energy window must lie inside (0, 2m]");
  }
  std::vector<ScannedLevel> out;
  if (!(e_hi > e_lo))
  {
    return out;
  }
  const double decades = std::log10(e_hi / e_lo);
  const std::size_t n_mesh = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(decades * static_cast<double>(options.mesh_points_per_decade))) + 1);
  std::vector<double> energies(n_mesh);
  for (std::size_t k = 0; k < n_mesh; ++k)
  {
    energies[k] = e_lo * std::pow(e_hi / e_lo, static_cast<double>(k) / static_cast<double>(n_mesh - 1));
  }
  energies.back() = e_hi;

  // g_n(E_k) for all n at once: one tabulation per mesh energy.
  const auto n_levels = static_cast<std::size_t>(n_max) + 1;
  std::vector<std::vector<double>> g(n_levels, std::vector<double>(n_mesh));
  for (std::size_t k = 0; k < n_mesh; ++k)
  {
    const FrozenProblem problem(params, energies[k], grid, options.solver);
    for (std::size_t n = 0; n < n_levels; ++n)
    {
      const int nr = static_cast<int>(n);
      double binding = 0.0;
      try
      {
        binding = problem.binding_energy(nr);
        if (!problem.tail_resolved(binding, options.solver.tail_fraction))
        {
          binding = frozen_binding(params, energies[k], nr, grid, options.solver);
        }
      }
      catch (const NoBoundState &)
      {
        binding = 0.0;
      }
      g[n][k] = energies[k] - binding;
    }
  }

  for (std::size_t n = 0; n < n_levels; ++n)
  {
    const int nr = static_cast<int>(n);
    auto gn = [&](double e) { return self_consistency_mismatch(params, nr, e, grid, options.solver); };
    for (std::size_t k = 0; k < n_mesh; ++k)
    {
      double root = 0.0;
      bool found = false;
      if (g[n][k] == 0.0)
      {
        root = energies[k];
        found = true;
      }
      else if (k + 1 < n_mesh && g[n][k + 1] != 0.0 && sign_of(g[n][k]) != sign_of(g[n][k + 1]))
      {
        root = refine_root(gn, energies[k], energies[k + 1], g[n][k], g[n][k + 1], options.solver,
                           static_cast<std::uintmax_t>(options.solver.max_self_consistency_iterations), nullptr);
        found = true;
      }
      if (!found)
      {
        continue;
      }
      ScannedLevel level;
      level.state = solve_linear_eigenvalue(params, root, nr, grid, options.solver);
      const auto [nearest, dev] = nearest_coulomb_level(params, level.state.binding_energy);
      level.nearest_coulomb_n = nearest;
      level.coulomb_deviation = dev;
      level.anomalous_candidate = dev >= options.coulomb_threshold;
      out.push_back(std::move(level));
    }
  }
  return out;
}

}  // namespace quasispec::radial
