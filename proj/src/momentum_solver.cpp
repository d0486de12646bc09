// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

#include "quasispec/momentum_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "quasispec/errors.hpp"
#include "quasispec/radial_solver.hpp"

namespace quasispec::momentum
{

namespace
{

constexpr double pi = std::numbers::pi;

void check_wave(int l)
{
  if (l < 0 || l > 3)
  {
    throw DomainError("momentum solver: partial waves 0 <= l <= 3 are supported");
  }
}

// (A_l - A_0)(p, p) = (1/p^2) int_0^{2p} (P_l(1 - x^2/2p^2) - 1) / (E + x) dx; finite at E = 0.
double diagonal_difference(double e_param, double p, int l)
{
  if (l == 0)
  {
    return 0.0;
  }
  auto integrand = [&](double x) {
    const double z = 1.0 - x * x / (2.0 * p * p);
    return (boost::math::legendre_p(l, z) - 1.0) / (e_param + x);
  };
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 2.0 * p, 15, 1e-12);
  return v / (p * p);
}

}  // namespace

std::string_view to_string(Mapping)
{
  return "rational";
}

void gauss_legendre(std::size_t n, std::vector<double> &x, std::vector<double> &w)
{
  if (n == 0)
  {
    throw DomainError("gauss_legendre: n must be > 0");
  }
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const std::size_t half = (n + 1) / 2;
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < half; ++i)
  {
    double z = std::cos(pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter)
    {
      double p1 = 1.0;
      double p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j)
      {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = ((2.0 * jd - 1.0) * z * p2 - (jd - 1.0) * p3) / jd;
      }
      pp = nd * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15)
      {
        break;
      }
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

MomentumDiscretization make_discretization(int l, std::size_t n_nodes, double scale)
{
  check_wave(l);
  if (n_nodes < 40)
  {
    throw DomainError("make_discretization: at least 40 nodes are required");
  }
  if (!(scale > 0.0))
  {
    throw DomainError("make_discretization: scale must be > 0");
  }
  std::vector<double> t;
  std::vector<double> wt;
  gauss_legendre(n_nodes, t, wt);
  MomentumDiscretization d;
  d.l = l;
  d.scale = scale;
  d.nodes.resize(n_nodes);
  d.weights.resize(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i)
  {
    const double one_minus = 1.0 - t[i];
    d.nodes[i] = scale * (1.0 + t[i]) / one_minus;
    d.weights[i] = wt[i] * 2.0 * scale / (one_minus * one_minus);
  }
  return d;
}

double default_momentum_scale(const ModelParams &params, double E)
{
  params.validate();
  if (!(E >= 0.0))
  {
    throw DomainError("default_momentum_scale: E must be >= 0");
  }
  return std::max(std::sqrt(params.mass * E), params.mass * params.alpha);
}

double angular_integral(double e_param, double p, double q, int l)
{
  check_wave(l);
  if (!(p > 0.0) || !(q > 0.0) || !(e_param >= 0.0))
  {
    throw DomainError("angular_integral: p, q must be > 0 and E >= 0");
  }
  const double lo = e_param + std::abs(p - q);
  const double hi = e_param + p + q;
  if (lo == 0.0)
  {
    throw DomainError("angular_integral: diverges at p = q for E = 0");
  }
  const double pq = p * q;
  if (l == 0)
  {
    return std::log(hi / lo) / pq;
  }
  // dx / (E + x) = du with u = ln(E + x). P_l(z(x)) is a polynomial of degree 2l in e^u, so a
  // fixed rule on panels of unit width in u is exact to rounding. An adaptive rule with a relative
  // tolerance would stall where the result is small by cancellation (E >> p, q or p << q).
  auto integrand = [&](double u) {
    const double x = std::exp(u) - e_param;
    const double z = std::clamp((p * p + q * q - x * x) / (2.0 * pq), -1.0, 1.0);
    return boost::math::legendre_p(l, z);
  };
  const double u_lo = std::log(lo);
  const double u_hi = std::log(hi);
  const int panels = std::max(1, static_cast<int>(std::ceil(u_hi - u_lo)));
  const double width = (u_hi - u_lo) / panels;
  double v = 0.0;
  for (int k = 0; k < panels; ++k)
  {
    const double a = u_lo + k * width;
    v += boost::math::quadrature::gauss<double, 20>::integrate(integrand, a, k + 1 == panels ? u_hi : a + width);
  }
  return v / pq;
}

double partial_wave_kernel(double e_param, double p, double q, int l)
{
  if (!(e_param > 0.0))
  {
    throw DomainError("partial_wave_kernel: E must be > 0");
  }
  return 2.0 * pi * q * q * angular_integral(e_param, p, q, l);
}

double subtraction_integral(double e_param, double p)
{
  if (!(p > 0.0) || !(e_param >= 0.0))
  {
    throw DomainError("subtraction_integral: p must be > 0 and E >= 0");
  }
  if (e_param == 0.0)
  {
    return pi * pi / (2.0 * p);
  }
  // q = p t, split at t = 1 and fold (1, inf) onto (0, 1) with t = 1/u.
  const double e = e_param / p;
  auto inner = [e](double t) { return (std::log1p(t / (e + 1.0)) - std::log1p(-t / (e + 1.0))) / t; };
  auto outer = [e](double u) { return (std::log1p(u * (1.0 + e)) - std::log1p(u * (e - 1.0))) / u; };
  boost::math::quadrature::tanh_sinh<double> ts;
  const double j = ts.integrate(inner, 0.0, 1.0) + ts.integrate(outer, 0.0, 1.0);
  return j / p;
}

CouplingSpectrum coupling_spectrum(double mass, double e_param, double trial_binding,
                                   const MomentumDiscretization &disc)
{
  if (!(mass > 0.0) || !(e_param >= 0.0) || !(trial_binding > 0.0))
  {
    throw DomainError("coupling_spectrum: requires mass > 0, E_param >= 0, trial_binding > 0");
  }
  check_wave(disc.l);
  const std::size_t n = disc.nodes.size();
  if (n < 40 || disc.weights.size() != n)
  {
    throw DomainError("coupling_spectrum: malformed discretization");
  }
  const auto &p = disc.nodes;
  const auto &w = disc.weights;

  // Nystrom with the l = 0 kernel at q = p subtracted and its integral added back:
  //   int K_l(p,q) psi(q) dq = int [K_l(p,q) psi(q) - 2 pi p^2 A_0(p,q) psi(p)] dq
  //                          + 2 pi p^2 psi(p) int A_0(p,q) dq.
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd g(n);
  Eigen::VectorXd d(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    g(i) = 2.0 * pi * w[i] * p[i] * p[i];
    d(i) = 2.0 * pi * pi * (p[i] * p[i] / mass + trial_binding);
  }
  for (std::size_t i = 0; i < n; ++i)
  {
    for (std::size_t j = i + 1; j < n; ++j)
    {
      const double v = angular_integral(e_param, p[i], p[j], disc.l);
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
  {
    const double p2 = p[i] * p[i];
    double subtracted = 0.0;
    for (std::size_t j = 0; j < n; ++j)
    {
      if (j != i)
      {
        const double a0 = disc.l == 0 ? a(i, j) : angular_integral(e_param, p[i], p[j], 0);
        subtracted += w[j] * a0;
      }
    }
    const double diag = 2.0 * pi * p2 * (w[i] * diagonal_difference(e_param, p[i], disc.l) - subtracted
                                         + subtraction_integral(e_param, p[i]));
    a(i, i) = diag / g(i);
  }

  // M = D^{-1} A G is similar to the symmetric S A S with S = sqrt(G / D).
  const Eigen::VectorXd s = (g.array() / d.array()).sqrt();
  const Eigen::MatrixXd c = s.asDiagonal() * a * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
  {
    throw NumericalFailure("coupling_spectrum: eigen-decomposition failed");
  }
  CouplingSpectrum out;
  out.e_param = e_param;
  out.trial_binding = trial_binding;
  const Eigen::VectorXd &lambda = es.eigenvalues();
  const double lambda_max = lambda.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < lambda.size(); ++k)
  {
    if (lambda(k) > 1e-12 * lambda_max)
    {
      out.eigen_couplings.push_back(1.0 / lambda(k));
    }
  }
  std::sort(out.eigen_couplings.begin(), out.eigen_couplings.end());
  return out;
}

MomentumLevel solve_self_consistent(const ModelParams &params, int n_radial, std::size_t n_nodes, double rel_tolerance)
{
  params.validate();
  if (params.charge_sign != 1)
  {
    throw NoBoundState("momentum solver: no bound states for equal charges");
  }
  if (n_radial < 0)
  {
    throw DomainError("momentum solver: n_radial must be >= 0");
  }
  const double coulomb = params.coulomb_level(n_radial + params.l + 1);
  const MomentumDiscretization disc =
      make_discretization(params.l, n_nodes, default_momentum_scale(params, coulomb));

  int evaluations = 0;
  auto h = [&](double e) {
    ++evaluations;
    const CouplingSpectrum s = coupling_spectrum(params.mass, e, e, disc);
    if (s.eigen_couplings.size() <= static_cast<std::size_t>(n_radial))
    {
      throw NoBoundState("momentum solver: discretization resolves fewer than n_radial + 1 levels");
    }
    return s.eigen_couplings[static_cast<std::size_t>(n_radial)] - params.alpha;
  };

  // alpha_n(E) increases with E and exceeds alpha at the Coulomb value.
  double hi = coulomb;
  double h_hi = h(hi);
  while (h_hi < 0.0)
  {
    hi *= 2.0;
    if (hi > 4.0 * params.mass)
    {
      throw NoBoundState("momentum solver: no upper bracket");
    }
    h_hi = h(hi);
  }
  double lo = hi * 0.5;
  double h_lo = h(lo);
  while (h_lo > 0.0)
  {
    hi = lo;
    h_hi = h_lo;
    lo *= 0.5;
    if (lo < 1e-14 * params.mass)
    {
      throw NoBoundState("momentum solver: no lower bracket");
    }
    h_lo = h(lo);
  }
  std::uintmax_t max_iter = 200;
  auto tol = [rel_tolerance](double a, double b) {
    return std::abs(b - a) <= rel_tolerance * std::min(std::abs(a), std::abs(b));
  };
  auto fn = [&h](double e) { return h(e); };
  const auto r = boost::math::tools::toms748_solve(fn, lo, hi, h_lo, h_hi, tol, max_iter);
  MomentumLevel out;
  out.binding_energy = 0.5 * (r.first + r.second);
  out.coupling = params.alpha;
  out.evaluations = evaluations;
  out.n_nodes = n_nodes;
  return out;
}

}  // namespace quasispec::momentum
