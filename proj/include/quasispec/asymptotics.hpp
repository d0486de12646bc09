// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

/** \file asymptotics.hpp
 *
 *  \brief Large-r classification of the radial equation.
 *
 *  For E r >> 1 the potential falls off as -2 alpha / (pi E r^2) and the radial equation
 *  becomes chi'' = [kappa^2 - gamma(E) / r^2] chi with
 *
 *      kappa^2 = m E,    gamma(E) = 2 alpha m / (pi E) - l(l+1).
 *
 *  Its decaying solution is sqrt(r) K_nu(kappa r) with nu^2 = 1/4 - gamma. For gamma > 1/4
 *  the order is imaginary and chi oscillates, but only where kappa r < sqrt(gamma - 1/4).
 *  Whether that oscillation zone reaches the region E r >> 1 where the asymptotic form
 *  holds is what decides if extra levels can appear.
 */

#ifndef QUASISPEC_ASYMPTOTICS_HPP
#define QUASISPEC_ASYMPTOTICS_HPP

#include <optional>
#include <string_view>

#include "quasispec/model.hpp"

namespace quasispec::asymptotics
{

/// E r at and above which the large-r form is trusted.
inline constexpr double default_r_cut = 10.0;

enum class Branch
{
  A_finite,   ///< gamma < 1/4: no zeros at infinity, finitely many levels
  B_infinite  ///< gamma > 1/4: imaginary order, oscillating tail
};

std::string_view to_string(Branch branch);

struct AsymptoticsReport
{
  double energy = 0.0;
  double gamma = 0.0;
  double kappa = 0.0;
  /// 1/4 - gamma; negative on branch B.
  double nu_squared = 0.0;
  Branch branch = Branch::A_finite;
  /// gamma > 1/4  <=>  alpha > alpha_threshold = pi E / (8 m) + l(l+1) pi E / (2 m).
  double alpha_threshold = 0.0;
  /// Largest radius of the oscillation zone, sqrt(gamma - 1/4) / kappa (branch B only).
  std::optional<double> r_star;
  /// |nu| on branch B.
  std::optional<double> mu;
  /// Large-ness threshold for E r used below.
  double r_cut = default_r_cut;
  /// True when the oscillation zone extends into E r > r_cut, i.e. r_star * E > r_cut.
  bool oscillation_reaches_asymptotic_zone = false;
};

/// gamma(E) = 2 alpha m / (pi E) - l(l+1), E > 0.
double gamma_of(const ModelParams &params, double E);

/// pi E / (8 m) + l(l+1) pi E / (2 m).
double alpha_threshold(const ModelParams &params, double E);

AsymptoticsReport classify(const ModelParams &params, double E, double r_cut = default_r_cut);

/// Smallest coupling for which the oscillation zone of K_{i mu}(kappa r) contains radius r:
///   pi E / (2 m) [1/4 + l(l+1)] + (pi / 2) (E r)^2.
double critical_alpha_at_radius(const ModelParams &params, double E, double r);

/// sqrt(r) K_nu(kappa r) with nu = sqrt(1/4 - gamma), real or imaginary. Requires E r >= r_cut.
double asymptotic_chi(const ModelParams &params, double E, double r, double r_cut = default_r_cut);

}  // namespace quasispec::asymptotics

#endif
