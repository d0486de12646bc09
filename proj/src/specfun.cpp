// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

#include "quasispec/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include <boost/math/special_functions/bessel.hpp>

#include "quasispec/errors.hpp"

namespace quasispec::specfun
{

namespace
{

constexpr double eps = std::numeric_limits<double>::epsilon();

// Ci/si switch from the power series to the continued fraction here.
constexpr double cisi_series_max = 2.0;

void require_finite(double x, const char *what)
{
  if (!std::isfinite(x))
  {
    throw DomainError(std::string(what) + ": argument must be finite");
  }
}

EvalPoint ci_series(double x)
{
  // Ci(x) = gamma + ln x + sum_{k>=1} (-1)^k x^{2k} / (2k (2k)!)
  const double x2 = x * x;
  double t = 1.0;
  double sum = 0.0;
  double abs_sum = 0.0;
  double last = 0.0;
  for (int k = 1; k < 200; ++k)
  {
    t *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
    last = t / (2.0 * k);
    sum += last;
    abs_sum += std::abs(last);
    if (std::abs(last) <= 1e-18 * std::max(abs_sum, 1e-300))
    {
      break;
    }
  }
  const double lead = constants::euler_gamma + std::log(x);
  const double value = lead + sum;
  const double err = std::abs(last) + 4.0 * eps * (constants::euler_gamma + std::abs(std::log(x)) + abs_sum);
  return {x, value, err};
}

EvalPoint si_series(double x)
{
  // Si(x) = sum_{k>=0} (-1)^k x^{2k+1} / ((2k+1) (2k+1)!)
  const double x2 = x * x;
  double s = x;
  double sum = x;
  double abs_sum = std::abs(x);
  double last = x;
  for (int k = 1; k < 200; ++k)
  {
    s *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
    last = s / (2.0 * k + 1.0);
    sum += last;
    abs_sum += std::abs(last);
    if (std::abs(last) <= 1e-18 * std::max(abs_sum, 1e-300))
    {
      break;
    }
  }
  const double value = sum - constants::pi / 2.0;
  const double err = std::abs(last) + 4.0 * eps * (constants::pi / 2.0 + abs_sum);
  return {x, value, err};
}

// e^{ix} E1(ix) by the modified Lentz algorithm; valid (and fast) for x > ~2.
std::complex<double> e1_continued_fraction(double x)
{
  constexpr double tiny = 1e-300;
  std::complex<double> b(1.0, x);
  std::complex<double> c(1.0 / tiny, 0.0);
  std::complex<double> d = 1.0 / b;
  std::complex<double> h = d;
  for (int i = 2; i < 100000; ++i)
  {
    const double a = -static_cast<double>(i - 1) * static_cast<double>(i - 1);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const std::complex<double> del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps)
    {
      return h;
    }
  }
  throw NumericalFailure("e1_continued_fraction: no convergence at x = " + std::to_string(x));
}

struct CiSi
{
  EvalPoint ci;
  EvalPoint si;
};

CiSi cisi(double x)
{
  if (x <= cisi_series_max)
  {
    return {ci_series(x), si_series(x)};
  }
  // E1(ix) = -Ci(x) + i si(x)
  const std::complex<double> h = e1_continued_fraction(x);
  const std::complex<double> e1 = h * std::complex<double>(std::cos(x), -std::sin(x));
  const double err = 16.0 * eps * std::abs(h);
  return {{x, -e1.real(), err}, {x, e1.imag(), err}};
}

EvalPoint f_series(double x)
{
  const EvalPoint ci = ci_series(x);
  const EvalPoint si = si_series(x);
  const double sn = std::sin(x);
  const double cs = std::cos(x);
  const double value = ci.value * sn - si.value * cs;
  const double err = std::abs(sn) * ci.abs_error_estimate + std::abs(cs) * si.abs_error_estimate
                     + 4.0 * eps * (std::abs(ci.value * sn) + std::abs(si.value * cs));
  return {x, value, err};
}

EvalPoint f_composition(double x)
{
  const CiSi v = cisi(x);
  const double sn = std::sin(x);
  const double cs = std::cos(x);
  const double value = v.ci.value * sn - v.si.value * cs;
  const double err = std::abs(sn) * v.ci.abs_error_estimate + std::abs(cs) * v.si.abs_error_estimate
                     + 4.0 * eps * (std::abs(v.ci.value * sn) + std::abs(v.si.value * cs));
  return {x, value, err};
}

EvalPoint f_asymptotic(double x)
{
  // f(x) ~ (1/x) sum_k (-1)^k (2k)! / x^{2k}, truncated before the smallest term.
  const double inv_x2 = 1.0 / (x * x);
  double term = 1.0;
  double sum = 1.0;
  double omitted = 0.0;
  for (int k = 1; k < 400; ++k)
  {
    const double next = -term * (2.0 * k - 1.0) * (2.0 * k) * inv_x2;
    if (std::abs(next) >= std::abs(term))
    {
      omitted = std::abs(next);
      break;
    }
    omitted = std::abs(next);
    if (std::abs(next) < 0.25 * eps * std::abs(sum))
    {
      break;
    }
    sum += next;
    term = next;
  }
  const double value = sum / x;
  return {x, value, omitted / x + 2.0 * eps * std::abs(value)};
}

}  // namespace

EvalPoint cosine_integral_eval(double x)
{
  require_finite(x, "cosine_integral");
  if (x <= 0.0)
  {
    throw DomainError("cosine_integral: x must be > 0");
  }
  return cisi(x).ci;
}

double cosine_integral(double x)
{
  return cosine_integral_eval(x).value;
}

EvalPoint sine_integral_si_eval(double x)
{
  require_finite(x, "sine_integral_si");
  if (x < 0.0)
  {
    throw DomainError("sine_integral_si: x must be >= 0");
  }
  if (x == 0.0)
  {
    return {0.0, -constants::pi / 2.0, 0.0};
  }
  return cisi(x).si;
}

double sine_integral_si(double x)
{
  return sine_integral_si_eval(x).value;
}

KernelBranch kernel_branch(double x)
{
  if (x < kernel_series_max)
  {
    return KernelBranch::series;
  }
  if (x <= kernel_asymptotic_min)
  {
    return KernelBranch::composition;
  }
  return KernelBranch::asymptotic;
}

EvalPoint f_kernel_branch(double x, KernelBranch branch)
{
  require_finite(x, "f_kernel");
  if (x < 0.0)
  {
    throw DomainError("f_kernel: x must be >= 0");
  }
  switch (branch)
  {
    case KernelBranch::series:
      if (x > 4.0)
      {
        throw PreconditionError("f_kernel: series branch requires x <= 4");
      }
      if (x == 0.0)
      {
        return {0.0, constants::pi / 2.0, 0.0};
      }
      return f_series(x);
    case KernelBranch::composition:
      if (x == 0.0)
      {
        return {0.0, constants::pi / 2.0, 0.0};
      }
      return f_composition(x);
    case KernelBranch::asymptotic:
      if (x < 10.0)
      {
        throw PreconditionError("f_kernel: asymptotic branch requires x >= 10");
      }
      return f_asymptotic(x);
  }
  return {};
}

EvalPoint f_kernel_eval(double x)
{
  require_finite(x, "f_kernel");
  if (x < 0.0)
  {
    throw DomainError("f_kernel: x must be >= 0");
  }
  return f_kernel_branch(x, kernel_branch(x));
}

double f_kernel(double x)
{
  return f_kernel_eval(x).value;
}

double bessel_k_real_order(double nu, double x)
{
  require_finite(nu, "bessel_k_real_order");
  require_finite(x, "bessel_k_real_order");
  if (x <= 0.0)
  {
    throw DomainError("bessel_k_real_order: x must be > 0");
  }
  return boost::math::cyl_bessel_k(std::abs(nu), x);
}

ScaledValue bessel_k_imag_order_scaled(double mu, double x)
{
  require_finite(mu, "bessel_k_imag_order");
  require_finite(x, "bessel_k_imag_order");
  if (mu <= 0.0 || x <= 0.0)
  {
    throw DomainError("bessel_k_imag_order: mu and x must be > 0");
  }

  // Shift the contour t -> t + i theta. Below the saddle (x < mu) the line runs just
  // under Im t = pi/2 so the cancellation is only ~exp(-mu * delta); above it the line
  // passes through the saddle at theta = asin(mu/x).
  //   K_{i mu}(x) = exp(-mu theta - x cos theta)
  //               * int_0^inf exp(-x cos theta (cosh t - 1)) cos(mu t - x sin theta sinh t) dt
  const double delta = std::min(constants::pi / 4.0, 4.0 / mu);
  const double theta = std::min(std::asin(std::min(mu / x, 1.0)), constants::pi / 2.0 - delta);
  const double c = x * std::cos(theta);
  const double s = x * std::sin(theta);
  const double log_scale = -mu * theta - c;

  auto integrand = [&](double t) {
    const double sh = std::sinh(0.5 * t);
    return std::exp(-2.0 * c * sh * sh) * std::cos(mu * t - s * std::sinh(t));
  };

  // exp(-c (cosh T - 1)) = exp(-42) ends the range.
  const double t_max = std::acosh(1.0 + 42.0 / c);
  double h = std::min(0.25, t_max / 16.0);
  auto n_steps = static_cast<std::size_t>(std::ceil(t_max / h));

  double sum = 0.5 * integrand(0.0);
  double abs_sum = std::abs(sum);
  for (std::size_t k = 1; k <= n_steps; ++k)
  {
    const double g = integrand(static_cast<double>(k) * h);
    sum += g;
    abs_sum += std::abs(g);
  }
  double estimate = h * sum;
  double diff = std::numeric_limits<double>::infinity();

  // Trapezoid on an analytic integrand with double-exponential decay converges
  // geometrically in 1/h; halve until two successive estimates agree.
  for (int level = 0; level < 22; ++level)
  {
    h *= 0.5;
    n_steps *= 2;
    for (std::size_t k = 1; k <= n_steps; k += 2)
    {
      const double g = integrand(static_cast<double>(k) * h);
      sum += g;
      abs_sum += std::abs(g);
    }
    const double refined = h * sum;
    diff = std::abs(refined - estimate);
    estimate = refined;
    if (level >= 2 && diff <= 1e-14 * h * abs_sum)
    {
      break;
    }
  }
  const double err = diff + 8.0 * eps * h * abs_sum;
  return {estimate, log_scale, err};
}

EvalPoint bessel_k_imag_order_eval(double mu, double x)
{
  const ScaledValue v = bessel_k_imag_order_scaled(mu, x);
  const double scale = std::exp(v.log_scale);
  return {x, v.mantissa * scale, v.abs_error_mantissa * scale};
}

double bessel_k_imag_order(double mu, double x)
{
  return bessel_k_imag_order_eval(mu, x).value;
}

std::size_t default_zero_scan_points(double mu)
{
  return std::max<std::size_t>(1000, static_cast<std::size_t>(std::ceil(50.0 * mu)));
}

std::vector<double> k_imag_zeros(double mu, double x_min, ZeroScanOptions options)
{
  require_finite(mu, "k_imag_zeros");
  require_finite(x_min, "k_imag_zeros");
  if (mu <= 0.0 || x_min <= 0.0)
  {
    throw DomainError("k_imag_zeros: mu and x_min must be > 0");
  }
  if (x_min >= mu)
  {
    throw PreconditionError("k_imag_zeros: x_min must be < mu");
  }
  if (!(options.tolerance > 0.0))
  {
    throw PreconditionError("k_imag_zeros: tolerance must be > 0");
  }
  const std::size_t n = std::max<std::size_t>(
      2, options.mesh_points == 0 ? default_zero_scan_points(mu) : options.mesh_points);

  auto sign_at = [mu](double x) {
    const double m = bessel_k_imag_order_scaled(mu, x).mantissa;
    return (m > 0.0) - (m < 0.0);
  };

  const double log_lo = std::log(x_min);
  const double log_step = (std::log(mu) - log_lo) / static_cast<double>(n - 1);
  auto mesh = [&](std::size_t i) { return i + 1 == n ? mu : std::exp(log_lo + log_step * static_cast<double>(i)); };

  std::vector<double> zeros;
  double x_prev = mesh(0);
  int s_prev = sign_at(x_prev);
  if (s_prev == 0)
  {
    zeros.push_back(x_prev);
  }
  for (std::size_t i = 1; i < n; ++i)
  {
    const double x = mesh(i);
    const int s = sign_at(x);
    if (s == 0)
    {
      zeros.push_back(x);
    }
    else if (s_prev != 0 && s != s_prev)
    {
      double a = x_prev;
      double b = x;
      int sa = s_prev;
      while (b - a > options.tolerance)
      {
        const double mid = 0.5 * (a + b);
        const int sm = sign_at(mid);
        if (sm == 0)
        {
          a = b = mid;
          break;
        }
        if (sm == sa)
        {
          a = mid;
        }
        else
        {
          b = mid;
        }
      }
      zeros.push_back(0.5 * (a + b));
    }
    x_prev = x;
    s_prev = s;
  }
  return zeros;
}

}  // namespace quasispec::specfun
