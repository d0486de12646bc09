// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUASISPEC_RADIAL_GRID_HPP
#define QUASISPEC_RADIAL_GRID_HPP

#include <cstddef>
#include <string_view>
#include <vector>

namespace quasispec
{

enum class GridSpacing
{
  uniform,
  logarithmic
};

std::string_view to_string(GridSpacing spacing);
GridSpacing grid_spacing_from_string(std::string_view name);

/// Radial mesh description; the points themselves are generated on demand.
struct RadialGrid
{
  double r_min = 1e-6;
  double r_max = 1e3;
  std::size_t n_points = 20000;
  GridSpacing spacing = GridSpacing::logarithmic;

  /// Throws DomainError unless 0 < r_min < r_max and n_points >= 100.
  void validate() const;

  /// Step of the integration variable: ln r for logarithmic grids, r otherwise.
  double step() const;

  std::vector<double> radii() const;

  /// Same spacing and step; r_max grows by at least `factor`, rounded up to a whole step.
  RadialGrid extended(double factor) const;

  bool operator==(const RadialGrid &) const = default;
};

}  // namespace quasispec

#endif
