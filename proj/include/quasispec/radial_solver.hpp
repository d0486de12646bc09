// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

/** \file radial_solver.hpp
 *
 *  \brief Bound states of the radial equation
 *
 *      chi'' = [ m E_b + m V_E(r) + l(l+1)/r^2 ] chi,
 *
 *  with E_b > 0 the binding energy of the level and E the energy parameter inside the
 *  potential. For a frozen E this is a linear eigenproblem in E_b; the physical levels
 *  are the self-consistent roots E_b(E) = E.
 *
 *  On logarithmic grids the equation is integrated in s = ln r for u = chi / sqrt(r):
 *
 *      u'' = [ r^2 m (E_b + V) + (l + 1/2)^2 ] u.
 */

#ifndef QUASISPEC_RADIAL_SOLVER_HPP
#define QUASISPEC_RADIAL_SOLVER_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "quasispec/model.hpp"
#include "quasispec/radial_grid.hpp"

namespace quasispec
{

/// Converged bound state on a radial grid.
struct EigenResult
{
  double binding_energy = 0.0;
  /// Energy parameter inside the potential the state was solved for.
  double e_param = 0.0;
  int l = 0;
  int n_radial = 0;
  int node_count = 0;
  RadialGrid grid;
  std::vector<double> r;
  /// Normalized so that the trapezoid of chi^2 over r is one.
  std::vector<double> chi;
  double norm = 0.0;
  bool converged = false;
  /// Eigenvalue bisection steps.
  int iterations = 0;
  /// Largest relative residual of the discretized equation over the grid interior.
  double residual = 0.0;
  /// Overflow rescalings applied while integrating.
  int rescalings = 0;
};

struct SelfConsistencyReport
{
  std::vector<double> e_param_history;
  /// g(E) = eps(E) + E = E - E_b(E) at each entry of e_param_history.
  std::vector<double> mismatch_history;
  std::pair<double, double> bracket{0.0, 0.0};
};

class NoBoundState : public std::runtime_error
{
public:
  explicit NoBoundState(const std::string &what, std::optional<SelfConsistencyReport> report = std::nullopt)
    : std::runtime_error(what), report_(std::move(report))
  {
  }
  const std::optional<SelfConsistencyReport> &report() const { return report_; }

private:
  std::optional<SelfConsistencyReport> report_;
};

class NoConvergence : public std::runtime_error
{
public:
  NoConvergence(const std::string &what, SelfConsistencyReport report)
    : std::runtime_error(what), report_(std::move(report))
  {
  }
  const SelfConsistencyReport &report() const { return report_; }

private:
  SelfConsistencyReport report_;
};

namespace radial
{

struct SolverOptions
{
  /// Relative width at which the eigenvalue bisection stops.
  double eigen_rel_tolerance = 1e-14;
  /// Binding-energy search interval in units of the mass.
  double min_binding = 1e-12;
  double max_binding = 10.0;
  /// Tail must fall below this fraction of max|chi| at the last grid point, or the grid
  /// is extended.
  double tail_fraction = 1e-8;
  int max_extensions = 8;
  /// Absolute tolerance on g(E) (in units of the mass) for self-consistent solves.
  double self_consistency_tolerance = 1e-10;
  /// Relative bracket width at which a self-consistent root is accepted.
  double self_consistency_rel_tolerance = 1e-12;
  int max_self_consistency_iterations = 200;
};

/// Grid satisfying r_max >= max(20/kappa, 20/E) for a state of `binding` (estimate) and
/// potential parameter `e_param` (0 skips the second term); r_min is 1e-5 Bohr radii.
RadialGrid default_grid(const ModelParams &params, double binding, double e_param, std::size_t n_points = 20000);

/// Unnormalized outward solution with chi ~ r^{l+1} at r_min.
struct Wavefunction
{
  std::vector<double> r;
  std::vector<double> chi;
  int rescalings = 0;
};

/// Outward Numerov integration over the whole grid at energy `trial_energy` < 0
/// (Hamiltonian convention, trial_energy = -E_b). Growth is rescaled when |chi| gets large.
Wavefunction integrate_outward(const ModelParams &params, double e_param, double trial_energy, const RadialGrid &grid);

/// Strict interior sign changes; exact zeros on grid points are counted once.
int count_nodes(std::span<const double> chi);

/// The potential of one energy parameter tabulated on one grid; can be solved for any
/// node count without re-tabulation.
class FrozenProblem
{
public:
  FrozenProblem(const ModelParams &params, double e_param, const RadialGrid &grid, SolverOptions options = {});

  /// Binding energy of the level with `n_radial` nodes; throws NoBoundState.
  double binding_energy(int n_radial) const;

  /// Full state (wavefunction and diagnostics) with `n_radial` nodes.
  EigenResult solve(int n_radial) const;

  /// Outward solution over the whole grid at binding energy `binding`.
  Wavefunction outward_solution(double binding) const;

  /// True when the decay exponent past the outer turning point reaches -ln(fraction)
  /// before the end of the grid.
  bool tail_resolved(double binding, double fraction) const;

  const RadialGrid &grid() const { return grid_; }

private:
  struct Sweep
  {
    int nodes = 0;
    std::size_t cut = 0;
  };

  Sweep sweep(double binding) const;
  std::size_t outer_cut(double binding, std::size_t *turning_point) const;
  double bisect(int n_radial, int *iterations) const;
  void start_values(double binding, double &u0, double &u1) const;

  ModelParams params_;
  double e_param_;
  RadialGrid grid_;
  SolverOptions options_;
  bool log_grid_;
  double h_;
  std::vector<double> r_;
  // w_i(E_b) = base_[i] + slope_[i] * E_b
  std::vector<double> base_;
  std::vector<double> slope_;
};

/// Frozen-potential eigenstate with `n_radial` nodes. Extends the grid outward when the
/// tail has not decayed by SolverOptions::tail_fraction.
EigenResult solve_linear_eigenvalue(const ModelParams &params, double e_param, int n_radial, const RadialGrid &grid,
                                    SolverOptions options = {});

/// g(E) = eps_n(E) + E = E - E_b,n(E). If the frozen problem has no level with n nodes,
/// E_b is taken as zero so g(E) = E.
double self_consistency_mismatch(const ModelParams &params, int n_radial, double e_param, const RadialGrid &grid,
                                 SolverOptions options = {});

struct SelfConsistentLevel
{
  EigenResult state;
  SelfConsistencyReport report;
};

/// Root E* of g(E) = 0, bracketed from `e_init` by halving/doubling, then refined by
/// TOMS 748. Throws NoBoundState (no bracket) or NoConvergence; both carry the report.
SelfConsistentLevel solve_self_consistent(const ModelParams &params, int n_radial, const RadialGrid &grid,
                                          double e_init, SolverOptions options = {});

struct LevelScanOptions
{
  std::size_t mesh_points_per_decade = 6;
  /// Coulomb-like when min_n |E* - E_n| / E_n is below this.
  double coulomb_threshold = 0.5;
  SolverOptions solver{};
};

struct ScannedLevel
{
  EigenResult state;
  /// Principal number of the closest Coulomb level and the relative deviation from it.
  int nearest_coulomb_n = 1;
  double coulomb_deviation = 0.0;
  bool anomalous_candidate = false;
};

/// Relative distance of `binding` to the nearest Coulomb level and that level's index.
std::pair<int, double> nearest_coulomb_level(const ModelParams &params, double binding);

/// All self-consistent levels with node count <= n_max and E* in [e_lo, e_hi], found by
/// sign changes of g on a logarithmic energy mesh. Ordered by node count, then energy.
std::vector<ScannedLevel> scan_extra_levels(const ModelParams &params, const RadialGrid &grid, int n_max,
                                            std::pair<double, double> e_window, LevelScanOptions options = {});

}  // namespace radial
}  // namespace quasispec

#endif
