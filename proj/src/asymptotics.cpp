// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

#include "quasispec/asymptotics.hpp"

#include <cmath>

#include "quasispec/errors.hpp"
#include "quasispec/specfun.hpp"

namespace quasispec::asymptotics
{

namespace
{

using specfun::constants::pi;

void check_energy(double E)
{
  if (!(E > 0.0) || !std::isfinite(E))
  {
    throw DomainError("asymptotics: E must be finite and > 0");
  }
}

double centrifugal(const ModelParams &params)
{
  return static_cast<double>(params.l) * (params.l + 1.0);
}

}  // namespace

std::string_view to_string(Branch branch)
{
  return branch == Branch::A_finite ? "A_finite" : "B_infinite";
}

double gamma_of(const ModelParams &params, double E)
{
  params.validate();
  check_energy(E);
  return 2.0 * params.alpha * params.mass / (pi * E) - centrifugal(params);
}

double alpha_threshold(const ModelParams &params, double E)
{
  params.validate();
  check_energy(E);
  return pi * E / (8.0 * params.mass) + centrifugal(params) * pi * E / (2.0 * params.mass);
}

AsymptoticsReport classify(const ModelParams &params, double E, double r_cut)
{
  if (!(r_cut > 0.0))
  {
    throw DomainError("classify: r_cut must be > 0");
  }
  AsymptoticsReport rep;
  rep.energy = E;
  rep.gamma = gamma_of(params, E);
  rep.kappa = std::sqrt(params.mass * E);
  rep.nu_squared = 0.25 - rep.gamma;
  rep.branch = rep.gamma > 0.25 ? Branch::B_infinite : Branch::A_finite;
  rep.alpha_threshold = alpha_threshold(params, E);
  rep.r_cut = r_cut;
  if (rep.branch == Branch::B_infinite)
  {
    const double mu = std::sqrt(rep.gamma - 0.25);
    rep.mu = mu;
    rep.r_star = mu / rep.kappa;
    rep.oscillation_reaches_asymptotic_zone = *rep.r_star * E > r_cut;
  }
  return rep;
}

double critical_alpha_at_radius(const ModelParams &params, double E, double r)
{
  params.validate();
  check_energy(E);
  if (!(r > 0.0) || !std::isfinite(r))
  {
    throw DomainError("critical_alpha_at_radius: r must be > 0");
  }
  const double x = E * r;
  return pi * E / (2.0 * params.mass) * (0.25 + centrifugal(params)) + 0.5 * pi * x * x;
}

double asymptotic_chi(const ModelParams &params, double E, double r, double r_cut)
{
  params.validate();
  check_energy(E);
  if (!(r > 0.0) || !std::isfinite(r))
  {
    throw DomainError("asymptotic_chi: r must be > 0");
  }
  if (E * r < r_cut)
  {
    throw PreconditionError("asymptotic_chi: requires E r >= r_cut");
  }
  const double kappa = std::sqrt(params.mass * E);
  const double nu2 = 0.25 - gamma_of(params, E);
  const double x = kappa * r;
  const double k = nu2 >= 0.0 ? specfun::bessel_k_real_order(std::sqrt(nu2), x)
                              : specfun::bessel_k_imag_order(std::sqrt(-nu2), x);
  return std::sqrt(r) * k;
}

}  // namespace quasispec::asymptotics
