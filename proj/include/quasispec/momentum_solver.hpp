// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

/** \file momentum_solver.hpp
 *
 *  \brief Partial-wave Nystrom solution of the momentum-space bound-state equation
 *
 *      (p^2/m + E) psi(p) = alpha / (2 pi^2) int d^3q psi(q) / (|p - q| (E + |p - q|)).
 *
 *  The right-hand side is linear in alpha, so at fixed E the equation is an eigenproblem
 *  for the coupling: the couplings alpha_n(E) at which a level with n nodes sits at E.
 *  The physical level solves alpha_n(E) = alpha.
 */

#ifndef QUASISPEC_MOMENTUM_SOLVER_HPP
#define QUASISPEC_MOMENTUM_SOLVER_HPP

#include <cstddef>
#include <string_view>
#include <vector>

#include "quasispec/model.hpp"

namespace quasispec::momentum
{

enum class Mapping
{
  rational  ///< p = p0 (1 + t) / (1 - t), t Gauss-Legendre on (-1, 1)
};

std::string_view to_string(Mapping mapping);

struct MomentumDiscretization
{
  std::vector<double> nodes;
  std::vector<double> weights;
  int l = 0;
  double scale = 1.0;
  Mapping mapping = Mapping::rational;
};

/// Gauss-Legendre nodes and weights on (-1, 1), ascending.
void gauss_legendre(std::size_t n, std::vector<double> &x, std::vector<double> &w);

/// Mapped rule with n >= 40 nodes for partial wave 0 <= l <= 3.
MomentumDiscretization make_discretization(int l, std::size_t n_nodes, double scale);

/// max(sqrt(m E), m alpha).
double default_momentum_scale(const ModelParams &params, double E);

/// int_{-1}^{1} P_l(z) / (x (E + x)) dz with x = sqrt(p^2 + q^2 - 2 p q z), evaluated in the
/// variable ln(E + x). E = 0 (Coulomb) is allowed for p != q.
double angular_integral(double e_param, double p, double q, int l);

/// K_l(p, q) = 2 pi q^2 angular_integral(E, p, q, l); requires E, p, q > 0.
double partial_wave_kernel(double e_param, double p, double q, int l);

/// int_0^inf angular_integral(E, p, q, 0) dq; equals pi^2 / (2 p) at E = 0.
double subtraction_integral(double e_param, double p);

struct CouplingSpectrum
{
  double e_param = 0.0;
  double trial_binding = 0.0;
  /// Ascending; alpha_0 is the coupling of the nodeless level.
  std::vector<double> eigen_couplings;
};

/// Couplings at which a level with binding `trial_binding` exists when the kernel carries
/// energy parameter `e_param` (E >= 0; 0 is the Coulomb kernel).
CouplingSpectrum coupling_spectrum(double mass, double e_param, double trial_binding,
                                   const MomentumDiscretization &disc);

struct MomentumLevel
{
  double binding_energy = 0.0;
  double coupling = 0.0;
  int evaluations = 0;
  std::size_t n_nodes = 0;
};

/// Self-consistent level: root of alpha_n(E) - alpha with trial binding = e_param = E.
MomentumLevel solve_self_consistent(const ModelParams &params, int n_radial, std::size_t n_nodes = 200,
                                    double rel_tolerance = 1e-12);

}  // namespace quasispec::momentum

#endif
