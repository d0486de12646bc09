// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

#include "quasispec/radial_grid.hpp"

#include <cmath>
#include <string>

#include "quasispec/errors.hpp"
#include "quasispec/model.hpp"

namespace quasispec
{

void ModelParams::validate() const
{
  if (!(alpha > 0.0) || !std::isfinite(alpha))
  {
    throw DomainError("ModelParams: alpha must be > 0");
  }
  if (!(mass > 0.0) || !std::isfinite(mass))
  {
    throw DomainError("ModelParams: mass must be > 0");
  }
  if (l < 0)
  {
    throw DomainError("ModelParams: l must be >= 0");
  }
  if (charge_sign != 1 && charge_sign != -1)
  {
    throw DomainError("ModelParams: charge_sign must be +1 or -1");
  }
}

double ModelParams::coulomb_level(int principal) const
{
  if (principal < 1)
  {
    throw DomainError("coulomb_level: principal quantum number must be >= 1");
  }
  const double n = principal;
  return mass * alpha * alpha / (4.0 * n * n);
}

std::string_view to_string(GridSpacing spacing)
{
  return spacing == GridSpacing::uniform ? "uniform" : "logarithmic";
}

GridSpacing grid_spacing_from_string(std::string_view name)
{
  if (name == "uniform")
  {
    return GridSpacing::uniform;
  }
  if (name == "logarithmic" || name == "log")
  {
    return GridSpacing::logarithmic;
  }
  throw DomainError("unknown grid spacing '" + std::string(name) + "'");
}

void RadialGrid::validate() const
{
  if (!(r_min > 0.0) || !std::isfinite(r_min))
  {
    throw DomainError("RadialGrid: r_min must be > 0");
  }
  if (!(r_max > r_min) || !std::isfinite(r_max))
  {
    throw DomainError("RadialGrid: r_max must exceed r_min");
  }
  if (n_points < 100)
  {
    throw DomainError("RadialGrid: at least 100 points are required");
  }
}

double RadialGrid::step() const
{
  const double n = static_cast<double>(n_points - 1);
  if (spacing == GridSpacing::logarithmic)
  {
    return std::log(r_max / r_min) / n;
  }
  return (r_max - r_min) / n;
}

std::vector<double> RadialGrid::radii() const
{
  validate();
  std::vector<double> r(n_points);
  const double h = step();
  for (std::size_t i = 0; i < n_points; ++i)
  {
    const double t = static_cast<double>(i) * h;
    r[i] = spacing == GridSpacing::logarithmic ? r_min * std::exp(t) : r_min + t;
  }
  r.back() = r_max;
  return r;
}

RadialGrid RadialGrid::extended(double factor) const
{
  validate();
  if (!(factor > 1.0))
  {
    throw DomainError("RadialGrid::extended: factor must be > 1");
  }
  const double h = step();
  RadialGrid g = *this;
  double span = 0.0;
  if (spacing == GridSpacing::logarithmic)
  {
    span = std::log(r_max * factor / r_min);
  }
  else
  {
    span = r_max * factor - r_min;
  }
  g.n_points = static_cast<std::size_t>(std::ceil(span / h)) + 1;
  g.r_max = spacing == GridSpacing::logarithmic ? r_min * std::exp(h * static_cast<double>(g.n_points - 1))
                                                 : r_min + h * static_cast<double>(g.n_points - 1);
  return g;
}

}  // namespace quasispec
