// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

/** \file specfun.hpp
 *
 *  \brief Sine and cosine integrals with the quasipotential profile f(x) built from them,
 *  plus modified Bessel functions of real or purely imaginary order.
 *
 *  All functions are pure and thread-safe.
 */

#ifndef QUASISPEC_SPECFUN_HPP
#define QUASISPEC_SPECFUN_HPP

#include <cstddef>
#include <numbers>
#include <vector>

namespace quasispec::specfun
{

namespace constants
{
inline constexpr double euler_gamma = 0.57721566490153286061;
inline constexpr double pi = std::numbers::pi;
}  // namespace constants

/// A function value together with a conservative absolute error bound of the branch
/// that produced it.
struct EvalPoint
{
  double x = 0.0;
  double value = 0.0;
  double abs_error_estimate = 0.0;
};

/// Ci(x) for x > 0. Power series for x <= 2, continued fraction for E1(ix) above.
EvalPoint cosine_integral_eval(double x);
double cosine_integral(double x);

/// si(x) = Si(x) - pi/2 for x >= 0. Same branches as cosine_integral_eval().
EvalPoint sine_integral_si_eval(double x);
double sine_integral_si(double x);

/// Evaluation branch of the profile f(x).
enum class KernelBranch
{
  series,       ///< power series of Ci and si, x < 1
  composition,  ///< Ci sin - si cos with continued-fraction Ci/si, 1 <= x <= 30
  asymptotic    ///< (1/x) sum (-1)^k (2k)!/x^(2k), x > 30
};

inline constexpr double kernel_series_max = 1.0;
inline constexpr double kernel_asymptotic_min = 30.0;

/// Branch chosen by f_kernel_eval() for a given x.
KernelBranch kernel_branch(double x);

/// f(x) = Ci(x) sin(x) - si(x) cos(x), x >= 0. Smooth, positive, f(0) = pi/2, f ~ 1/x.
EvalPoint f_kernel_eval(double x);
double f_kernel(double x);

/// Forces a particular branch; used to check agreement at the crossovers. The
/// asymptotic branch requires x >= 10, the series branch x <= 4.
EvalPoint f_kernel_branch(double x, KernelBranch branch);

/// K_nu(x) for real nu and x > 0 (the order enters only through |nu|).
double bessel_k_real_order(double nu, double x);

/// Value represented as mantissa * exp(log_scale); lets the sign of tiny K_{i mu}
/// values be inspected without underflow.
struct ScaledValue
{
  double mantissa = 0.0;
  double log_scale = 0.0;
  double abs_error_mantissa = 0.0;
};

/// K_{i mu}(x) = int_0^inf exp(-x cosh t) cos(mu t) dt, mu > 0, x > 0, in scaled form.
ScaledValue bessel_k_imag_order_scaled(double mu, double x);

/// K_{i mu}(x) as a plain double (may underflow to zero for large mu or x).
EvalPoint bessel_k_imag_order_eval(double mu, double x);
double bessel_k_imag_order(double mu, double x);

/// Default sign-scan density used by k_imag_zeros().
std::size_t default_zero_scan_points(double mu);

struct ZeroScanOptions
{
  /// Number of mesh points on [x_min, mu]; 0 selects default_zero_scan_points().
  std::size_t mesh_points = 0;
  /// Absolute tolerance of the bisection refinement.
  double tolerance = 1e-9;
};

/// Zeros of K_{i mu}(x) on [x_min, mu], ascending. Sign changes are detected on a mesh
/// uniform in ln x (the zeros accumulate geometrically towards x = 0) and refined by
/// bisection. Returns an empty list if the mesh sees no sign change.
std::vector<double> k_imag_zeros(double mu, double x_min, ZeroScanOptions options = {});

}  // namespace quasispec::specfun

#endif
