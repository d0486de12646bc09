// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

#include "quasispec/potential.hpp"

#include <cmath>

#include "quasispec/errors.hpp"
#include "quasispec/specfun.hpp"

namespace quasispec::potential
{

namespace
{

using specfun::constants::euler_gamma;
using specfun::constants::pi;

void check_energy(double E)
{
  if (!(E >= 0.0) || !std::isfinite(E))
  {
    throw DomainError("potential: binding energy E must be finite and >= 0");
  }
}

void check_radius(double r)
{
  if (!(r > 0.0) || !std::isfinite(r))
  {
    throw DomainError("potential: r must be finite and > 0");
  }
}

}  // namespace

Branch branch_for(double E)
{
  check_energy(E);
  return E == 0.0 ? Branch::coulomb : Branch::energy_dependent;
}

double coulomb(const ModelParams &params, double r)
{
  check_radius(r);
  return -params.charge_sign * params.alpha / r;
}

double v_of_r(const ModelParams &params, double E, double r)
{
  params.validate();
  check_radius(r);
  switch (branch_for(E))
  {
    case Branch::coulomb:
      return coulomb(params, r);
    case Branch::energy_dependent:
      break;
  }
  return -params.charge_sign * (2.0 * params.alpha / pi) * specfun::f_kernel(E * r) / r;
}

double large_r_asymptote(const ModelParams &params, double E, double r)
{
  check_radius(r);
  if (branch_for(E) == Branch::coulomb)
  {
    throw DomainError("large_r_asymptote: requires E > 0");
  }
  return -params.charge_sign * 2.0 * params.alpha / (pi * E * r * r);
}

double small_r_expansion(const ModelParams &params, double E, double r)
{
  check_radius(r);
  check_energy(E);
  const double x = E * r;
  if (x >= 0.1)
  {
    throw PreconditionError("small_r_expansion: requires E r < 0.1");
  }
  double bracket = 1.0;
  if (x > 0.0)
  {
    bracket += (2.0 / pi) * x * std::log(x) + (2.0 / pi) * (euler_gamma - 1.0) * x - 0.5 * x * x;
  }
  return -params.charge_sign * params.alpha / r * bracket;
}

std::vector<PotentialSample> tabulate(const ModelParams &params, double E, const RadialGrid &grid)
{
  const std::vector<double> r = grid.radii();
  std::vector<PotentialSample> out;
  out.reserve(r.size());
  for (double ri : r)
  {
    out.push_back({ri, v_of_r(params, E, ri)});
  }
  return out;
}

}  // namespace quasispec::potential
