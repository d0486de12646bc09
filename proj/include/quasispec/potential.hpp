// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

/** \file potential.hpp
 *
 *  \brief Coordinate-space energy-dependent potential
 *
 *      V_E(r) = -(2 alpha / pi) f(E r) / r,
 *
 *  with E > 0 the binding energy. E = 0 is the pure Coulomb sentinel and is evaluated
 *  by its own branch, never as a limit of f(E r)/r.
 */

#ifndef QUASISPEC_POTENTIAL_HPP
#define QUASISPEC_POTENTIAL_HPP

#include <vector>

#include "quasispec/model.hpp"
#include "quasispec/radial_grid.hpp"

namespace quasispec::potential
{

struct PotentialSample
{
  double r = 0.0;
  double v = 0.0;
};

enum class Branch
{
  coulomb,          ///< E == 0
  energy_dependent  ///< E > 0
};

/// Which evaluation path v_of_r() takes for binding energy E (E < 0 throws).
Branch branch_for(double E);

/// charge_sign * (-2 alpha / pi) f(E r) / r for E > 0, charge_sign * (-alpha / r) for E = 0.
double v_of_r(const ModelParams &params, double E, double r);

/// -charge_sign * alpha / r.
double coulomb(const ModelParams &params, double r);

/// Leading large-r form -charge_sign * 2 alpha / (pi E r^2), E > 0.
double large_r_asymptote(const ModelParams &params, double E, double r);

/// Four-term small-(E r) expansion
///   -(alpha/r) [1 + (2/pi) x ln x + (2/pi)(gamma - 1) x - x^2 / 2],   x = E r < 0.1,
/// used as an independent check of v_of_r(). Throws PreconditionError for x >= 0.1.
double small_r_expansion(const ModelParams &params, double E, double r);

std::vector<PotentialSample> tabulate(const ModelParams &params, double E, const RadialGrid &grid);

}  // namespace quasispec::potential

#endif
