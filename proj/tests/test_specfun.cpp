// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <vector>

#include "oracles.hpp"
#include "quasispec/errors.hpp"
#include "quasispec/specfun.hpp"

using namespace quasispec;
using namespace quasispec::specfun;
using namespace quasispec::specfun::constants;
namespace ref = oracle::mpmath;

namespace
{

double rel(double a, double b)
{
  return std::abs(a - b) / std::abs(b);
}

}  // namespace

TEST_SUITE("specfun")
{
  TEST_CASE("Ci and si match frozen high-precision values")
  {
    CHECK(rel(cosine_integral(1.0), ref::ci_1) < 1e-14);
    CHECK(rel(sine_integral_si(1.0), ref::si_1) < 1e-14);
    CHECK(rel(cosine_integral(10.0), ref::ci_10) < 1e-13);
    CHECK(rel(sine_integral_si(10.0), ref::si_10) < 1e-13);
    CHECK(rel(cosine_integral(100.0), ref::ci_100) < 1e-12);
    CHECK(rel(sine_integral_si(100.0), ref::si_100) < 1e-12);
    CHECK(rel(cosine_integral(1e-4), ref::ci_1em4) < 1e-14);
  }

  TEST_CASE("Ci and si agree with long-double power series on [0.01, 20]")
  {
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i)
    {
      const double x = 0.01 * std::pow(2000.0, i / 400.0);
      worst = std::max(worst, std::abs(cosine_integral(x) - oracle::ci_series(x)) / std::max(1.0, std::abs(oracle::ci_series(x))));
      worst = std::max(worst, std::abs(sine_integral_si(x) - oracle::si_series(x)));
    }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("si(0) is -pi/2 and Ci rejects non-positive arguments")
  {
    CHECK(sine_integral_si(0.0) == -pi / 2.0);
    CHECK_THROWS_AS(cosine_integral(0.0), DomainError);
    CHECK_THROWS_AS(cosine_integral(-1.0), DomainError);
  }

  TEST_CASE("f(0) is pi/2")
  {
    CHECK(std::abs(f_kernel(0.0) - pi / 2.0) <= 1e-12);
    CHECK_THROWS_AS(f_kernel(-1e-3), DomainError);
  }

  TEST_CASE("f matches frozen values on every branch")
  {
    CHECK(rel(f_kernel(1e-3), ref::f_1em3) < 1e-14);
    CHECK(rel(f_kernel(0.1), ref::f_0p1) < 1e-14);
    CHECK(rel(f_kernel(1.0), ref::f_1) < 1e-14);
    CHECK(rel(f_kernel(10.0), ref::f_10) < 1e-13);
    CHECK(rel(f_kernel(30.0), ref::f_30) < 1e-13);
  }

  TEST_CASE("f agrees with its Laplace integral representation")
  {
    double worst = 0.0;
    for (int i = 0; i <= 200; ++i)
    {
      const double x = 0.05 * std::pow(1e4, i / 200.0);
      worst = std::max(worst, rel(f_kernel(x), oracle::f_laplace(x)));
    }
    CHECK(worst < 1e-10);
  }

  TEST_CASE("f is non-negative on a 10^4-point mesh over [0, 1000]")
  {
    for (int i = 0; i < 10000; ++i)
    {
      const double x = 1000.0 * i / 9999.0;
      REQUIRE(f_kernel(x) >= 0.0);
    }
  }

  TEST_CASE("f branches agree where they overlap")
  {
    for (double x : {0.5, 1.0, 2.0, 4.0})
    {
      CHECK(rel(f_kernel_branch(x, KernelBranch::series).value, f_kernel_branch(x, KernelBranch::composition).value)
            < 1e-13);
    }
    for (double x : {30.0, 50.0, 200.0})
    {
      const EvalPoint asym = f_kernel_branch(x, KernelBranch::asymptotic);
      const EvalPoint comp = f_kernel_branch(x, KernelBranch::composition);
      CHECK(std::abs(asym.value - comp.value) <= asym.abs_error_estimate + comp.abs_error_estimate);
      CHECK(rel(asym.value, comp.value) < 1e-10);
    }
    CHECK_THROWS_AS(f_kernel_branch(5.0, KernelBranch::series), PreconditionError);
    CHECK_THROWS_AS(f_kernel_branch(5.0, KernelBranch::asymptotic), PreconditionError);
    CHECK(kernel_branch(0.5) == KernelBranch::series);
    CHECK(kernel_branch(5.0) == KernelBranch::composition);
    CHECK(kernel_branch(50.0) == KernelBranch::asymptotic);
  }

  TEST_CASE("small-x expansion of f holds with an x^3 ln x remainder")
  {
    // f(x) = pi/2 + x ln x + (gamma - 1) x - (pi/4) x^2 + O(x^3 ln x)
    for (int i = 0; i <= 60; ++i)
    {
      const double x = 1e-4 * std::pow(1e3, i / 60.0);
      const double approx = pi / 2.0 + x * std::log(x) + (euler_gamma - 1.0) * x - pi / 4.0 * x * x;
      const double bound = 0.5 * x * x * x * (1.0 + std::abs(std::log(x)));
      CHECK(std::abs(f_kernel(x) - approx) <= bound);
    }
  }

  TEST_CASE("large-x expansion of f is bounded by its first omitted term")
  {
    for (int i = 0; i <= 60; ++i)
    {
      const double x = 10.0 * std::pow(100.0, i / 60.0);
      const double three = 1.0 / x - 2.0 / std::pow(x, 3) + 24.0 / std::pow(x, 5);
      const double f = f_kernel(x);
      // The remainder is below 720/x^7 in exact arithmetic; allow rounding of f itself.
      CHECK(std::abs(f - three) <= 720.0 / std::pow(x, 7) + 4.0 * DBL_EPSILON * f);
    }
    // At x = 10 the three-term value 0.09824 lies within 7.2e-5 of f(10).
    CHECK(std::abs(f_kernel(10.0) - 0.09824) < 7.2e-5);
  }

  TEST_CASE("K of real order matches frozen values and the cosh integral")
  {
    CHECK(rel(bessel_k_real_order(0.0, 1.0), ref::k0_1) < 1e-14);
    CHECK(rel(bessel_k_real_order(0.5, 1.0), ref::k_half_1) < 1e-14);
    CHECK(rel(bessel_k_real_order(2.3, 0.7), ref::k_2p3_0p7) < 1e-14);
    CHECK(bessel_k_real_order(-2.3, 0.7) == bessel_k_real_order(2.3, 0.7));
    for (double nu : {0.0, 0.3, 1.0, 2.5})
    {
      for (double x : {0.1, 1.0, 5.0, 30.0})
      {
        CHECK(rel(bessel_k_real_order(nu, x), oracle::k_real(nu, x)) < 1e-12);
      }
    }
    CHECK_THROWS_AS(bessel_k_real_order(1.0, 0.0), DomainError);
  }

  TEST_CASE("K of imaginary order matches frozen values")
  {
    CHECK(rel(bessel_k_imag_order(1.0, 2.0), ref::k_i1_2) < 1e-12);
    CHECK(rel(bessel_k_imag_order(5.0, 0.01), ref::k_i5_0p01) < 1e-10);
    CHECK(rel(bessel_k_imag_order(1e-4, 1.0), ref::k_i1em4_1) < 1e-12);
    CHECK(rel(bessel_k_imag_order(10.0, 0.5), ref::k_i10_0p5) < 1e-9);
    const ScaledValue s = bessel_k_imag_order_scaled(100.0, 1.0);
    CHECK(s.mantissa < 0.0);
    CHECK(std::abs(std::log(-s.mantissa) + s.log_scale - std::log(-ref::k_i100_1)) < 1e-8);
  }

  TEST_CASE("K of imaginary order agrees with the real-axis integral")
  {
    for (double mu : {0.5, 1.0, 2.0, 5.0})
    {
      const double scale = std::exp(-pi * mu / 2.0);
      for (double x : {0.05, 0.3, 1.0, 3.0, 10.0})
      {
        CHECK(std::abs(bessel_k_imag_order(mu, x) - oracle::k_imag(mu, x)) < 1e-11 * std::max(scale, std::abs(oracle::k_imag(mu, x))));
      }
    }
  }

  TEST_CASE("K of imaginary order tends to K_0 as mu -> 0")
  {
    CHECK(rel(bessel_k_imag_order(1e-8, 1.3), bessel_k_real_order(0.0, 1.3)) < 1e-12);
  }

  TEST_CASE("zeros of K_{i mu} lie below mu and match the reference count")
  {
    const auto z5 = k_imag_zeros(5.0, 1e-3);
    REQUIRE(z5.size() == 13);
    CHECK(std::abs(z5.back() - 2.42451286235) < 1e-8);
    CHECK(std::is_sorted(z5.begin(), z5.end()));
    for (double z : z5)
    {
      CHECK(z < 5.0);
      const double below = bessel_k_imag_order(5.0, z * (1.0 - 1e-6));
      const double above = bessel_k_imag_order(5.0, z * (1.0 + 1e-6));
      CHECK((below < 0.0) != (above < 0.0));
    }
    CHECK_THROWS_AS(k_imag_zeros(1.0, 1.0), PreconditionError);
    CHECK_THROWS_AS(k_imag_zeros(1.0, 2.0), PreconditionError);
  }

  TEST_CASE("zero search agrees with a brute-force sign scan")
  {
    for (double mu : {1.0, 2.0})
    {
      const auto zeros = k_imag_zeros(mu, 1e-2);
      const auto scan = oracle::k_imag_sign_changes(mu, 1e-2, 2.0 * mu, 20000);
      REQUIRE(zeros.size() == scan.size());
      const double step = (2.0 * mu - 1e-2) / 19999.0;
      for (std::size_t i = 0; i < zeros.size(); ++i)
      {
        CHECK(std::abs(zeros[i] - scan[i]) <= step);
      }
    }
  }

  TEST_CASE("default zero-scan density grows with mu")
  {
    CHECK(default_zero_scan_points(1.0) == 1000);
    CHECK(default_zero_scan_points(100.0) == 5000);
  }
  TEST_CASE("f is continuous across its branch crossovers")
  {
    for (double x0 : {kernel_series_max, kernel_asymptotic_min})
    {
      const double below = f_kernel(std::nextafter(x0, 0.0));
      const double above = f_kernel(std::nextafter(x0, 2.0 * x0));
      CHECK(std::abs(below - above) <= 1e-9 * above);
    }
  }

  TEST_CASE("x f(x) follows its asymptotic series for x >= 20")
  {
    for (int i = 0; i <= 100; ++i)
    {
      const double x = 20.0 * std::pow(50.0, i / 100.0);
      const double xf = x * f_kernel(x);
      const double x2 = x * x;
      CHECK(std::abs(xf - (1.0 - 2.0 / x2 + 24.0 / (x2 * x2))) <= 720.0 / (x2 * x2 * x2) + 4.0 * DBL_EPSILON);
    }
  }

  TEST_CASE("K of real order is positive and decreasing")
  {
    for (double nu : {0.0, 0.3, 1.0, 2.0})
    {
      double previous = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= 300; ++i)
      {
        const double x = 0.01 * std::pow(5000.0, i / 300.0);
        const double k = bessel_k_real_order(nu, x);
        REQUIRE(k > 0.0);
        REQUIRE(k < previous);
        previous = k;
      }
    }
  }

  TEST_CASE("K of imaginary order: limits, signs and domain")
  {
    CHECK(std::abs(bessel_k_imag_order(1e-4, 1.0) - bessel_k_real_order(0.0, 1.0)) < 1e-6);
    CHECK(bessel_k_imag_order(1.0, 2.0) > 0.0);
    // At least one sign change below x = mu for mu = 5.
    const double at_small = bessel_k_imag_order(5.0, 0.01);
    bool flipped = false;
    for (int i = 1; i <= 500 && !flipped; ++i)
    {
      flipped = (bessel_k_imag_order(5.0, 0.01 + i * 0.01) < 0.0) != (at_small < 0.0);
    }
    CHECK(flipped);
    CHECK_THROWS_AS(bessel_k_imag_order(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(bessel_k_imag_order(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(bessel_k_imag_order(-1.0, 1.0), DomainError);
  }

  TEST_CASE("K of imaginary order has no zeros in (mu, 50 mu]")
  {
    for (double mu : {0.5, 2.0, 10.0})
    {
      int changes = 0;
      double previous = bessel_k_imag_order_scaled(mu, mu * (1.0 + 1e-9)).mantissa;
      for (int i = 1; i <= 2000; ++i)
      {
        const double x = mu * std::pow(50.0, i / 2000.0);
        const double value = bessel_k_imag_order_scaled(mu, x).mantissa;
        changes += (value < 0.0) != (previous < 0.0) ? 1 : 0;
        previous = value;
      }
      CAPTURE(mu);
      CHECK(changes == 0);
      CHECK(previous > 0.0);
    }
  }

  TEST_CASE("zero count does not decrease as the lower end moves down")
  {
    std::size_t previous = 0;
    for (double x_min : {2.0, 1.0, 0.3, 0.1, 0.03, 0.01, 0.003, 0.001})
    {
      const std::size_t count = k_imag_zeros(5.0, x_min).size();
      CHECK(count >= previous);
      previous = count;
    }
  }

  TEST_CASE("special functions are pure")
  {
    CHECK(f_kernel(3.7) == f_kernel(3.7));
    CHECK(cosine_integral(0.3) == cosine_integral(0.3));
    CHECK(bessel_k_imag_order(3.3, 0.7) == bessel_k_imag_order(3.3, 0.7));
    CHECK(k_imag_zeros(4.0, 0.01) == k_imag_zeros(4.0, 0.01));
  }
}
