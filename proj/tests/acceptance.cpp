// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion with its runtime
// and exits non-zero if any criterion fails.

#include <algorithm>
#include <cfloat>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "quasispec/asymptotics.hpp"
#include "quasispec/momentum_solver.hpp"
#include "quasispec/radial_solver.hpp"
#include "quasispec/specfun.hpp"

using namespace quasispec;
using oracle::pi;

namespace
{

/// Outcome of one criterion: pass flag plus a one-line summary of the measured numbers.
struct Verdict
{
  bool pass = true;
  std::string detail;
};

ModelParams params(double alpha, int l = 0)
{
  ModelParams p;
  p.alpha = alpha;
  p.l = l;
  return p;
}

Verdict special_functions()
{
  Verdict v;
  const double f0_error = std::abs(specfun::f_kernel(0.0) - pi / 2.0);
  v.pass &= f0_error <= 1e-12;

  double min_f = INFINITY;
  for (int i = 0; i < 10000; ++i)
  {
    min_f = std::min(min_f, specfun::f_kernel(1000.0 * i / 9999.0));
  }
  v.pass &= min_f >= 0.0;

  // Small-x series: the first omitted term is of order x^3 ln x.
  double small_ratio = 0.0;
  for (int i = 0; i <= 200; ++i)
  {
    const double x = 1e-4 * std::pow(1e3, i / 200.0);
    const double series = pi / 2.0 + x * std::log(x) + (specfun::constants::euler_gamma - 1.0) * x - pi / 4.0 * x * x;
    const double bound = 0.5 * x * x * x * (1.0 + std::abs(std::log(x)));
    small_ratio = std::max(small_ratio, std::abs(specfun::f_kernel(x) - series) / bound);
  }
  v.pass &= small_ratio <= 1.0;

  // Large-x series: |x f - (1 - 2/x^2 + 24/x^4)| <= 720/x^6 for x >= 20.
  double large_ratio = 0.0;
  for (int i = 0; i <= 200; ++i)
  {
    const double x = 20.0 * std::pow(50.0, i / 200.0);
    const double x2 = x * x;
    const double gap = std::abs(x * specfun::f_kernel(x) - (1.0 - 2.0 / x2 + 24.0 / (x2 * x2)));
    large_ratio = std::max(large_ratio, gap / (720.0 / (x2 * x2 * x2) + 4.0 * DBL_EPSILON));
  }
  v.pass &= large_ratio <= 1.0;

  std::ostringstream s;
  s << "|f(0)-pi/2|=" << f0_error << " min f=" << min_f << " small-x bound use=" << small_ratio
    << " large-x bound use=" << large_ratio;
  v.detail = s.str();
  return v;
}

Verdict coulomb_regression()
{
  Verdict v;
  double worst = 0.0;
  for (double alpha : {0.1, 0.3})
  {
    for (int l = 0; l <= 1; ++l)
    {
      const ModelParams p = params(alpha, l);
      for (int principal = l + 1; principal <= 3; ++principal)
      {
        const double exact = p.coulomb_level(principal);
        const int n_radial = principal - l - 1;
        const EigenResult s = radial::solve_linear_eigenvalue(p, 0.0, n_radial, radial::default_grid(p, exact, 0.0));
        worst = std::max(worst, std::abs(s.binding_energy - exact) / exact);
        v.pass &= s.converged && s.node_count == n_radial;
      }
    }
  }
  v.pass &= worst <= 1e-6;
  std::ostringstream s;
  s << "max relative error " << worst;
  v.detail = s.str();
  return v;
}

Verdict asymptotic_tail()
{
  Verdict v;
  const ModelParams p = params(0.5);
  const double guess = p.coulomb_level(1);
  const auto level = radial::solve_self_consistent(p, 0, radial::default_grid(p, guess, 0.5 * guess), guess);
  const EigenResult &s = level.state;
  const double e = s.binding_energy;
  const auto report = asymptotics::classify(p, e);

  // log|chi| - log|sqrt(r) K_nu(kappa r)| over the tail, in log space because chi is tiny there.
  std::vector<double> gaps;
  for (std::size_t i = 0; i < s.r.size(); ++i)
  {
    const double r = s.r[i];
    if (e * r < 10.0 || s.chi[i] == 0.0)
    {
      continue;
    }
    double log_model = 0.5 * std::log(r);
    if (report.mu)
    {
      const auto k = specfun::bessel_k_imag_order_scaled(*report.mu, report.kappa * r);
      log_model += std::log(std::abs(k.mantissa)) + k.log_scale;
      v.pass &= k.mantissa > 0.0;
    }
    else
    {
      log_model += std::log(specfun::bessel_k_real_order(std::sqrt(report.nu_squared), report.kappa * r));
    }
    gaps.push_back(std::log(std::abs(s.chi[i])) - log_model);
  }
  v.pass &= gaps.size() >= 100;
  double mean = 0.0;
  for (double g : gaps)
  {
    mean += g;
  }
  mean /= static_cast<double>(std::max<std::size_t>(gaps.size(), 1));
  double sum_sq = 0.0;
  for (double g : gaps)
  {
    const double relative = std::expm1(g - mean);
    sum_sq += relative * relative;
  }
  const double rms = std::sqrt(sum_sq / static_cast<double>(std::max<std::size_t>(gaps.size(), 1)));
  v.pass &= s.converged && rms <= 0.01;
  std::ostringstream str;
  str << "E*=" << e << " tail points=" << gaps.size() << " rms=" << rms;
  v.detail = str.str();
  return v;
}

Verdict zero_locations()
{
  Verdict v;
  const double x_min = 0.01;
  const std::size_t mesh = 100000;
  std::ostringstream s;
  for (double mu : {0.5, 1.0, 2.0, 5.0, 10.0})
  {
    const auto zeros = specfun::k_imag_zeros(mu, x_min);
    const auto scan = oracle::k_imag_sign_changes(mu, x_min, 2.0 * mu, mesh);
    const double step = (2.0 * mu - x_min) / static_cast<double>(mesh - 1);
    bool ok = zeros.size() == scan.size();
    for (double z : zeros)
    {
      ok &= z < mu;
    }
    for (double z : scan)
    {
      ok &= z < mu;
    }
    for (std::size_t i = 0; ok && i < zeros.size(); ++i)
    {
      ok &= std::abs(zeros[i] - scan[i]) <= step;
    }
    v.pass &= ok;
    s << "mu=" << mu << ":" << zeros.size() << "/" << scan.size() << " ";
  }
  v.detail = s.str() + "(found/oracle)";
  return v;
}

Verdict no_anomalous_levels()
{
  Verdict v;
  int rows = 0;
  int levels = 0;
  int anomalous = 0;
  int branch_a = 0;
  int reaching = 0;
  const int steps = 10;
  for (int i = 0; i < steps; ++i)
  {
    const double alpha = (1.0 / 137.0) * std::pow(0.5 * 137.0, i / static_cast<double>(steps - 1));
    for (int l = 0; l <= 1; ++l)
    {
      const ModelParams p = params(alpha, l);
      const double lo = 0.002 * p.mass * alpha * alpha;
      const auto found = radial::scan_extra_levels(p, radial::default_grid(p, lo, lo), 3, {lo, 2.0 * p.mass});
      ++rows;
      v.pass &= !found.empty();
      for (const auto &level : found)
      {
        ++levels;
        anomalous += level.anomalous_candidate ? 1 : 0;
        const auto report = asymptotics::classify(p, level.state.binding_energy);
        branch_a += report.branch == asymptotics::Branch::A_finite ? 1 : 0;
        reaching += report.oscillation_reaches_asymptotic_zone ? 1 : 0;
      }
    }
  }
  v.pass &= anomalous == 0 && branch_a == 0 && reaching == 0 && levels > 0;
  std::ostringstream s;
  s << rows << " (alpha, l) rows, " << levels << " levels, " << anomalous << " anomalous, " << branch_a
    << " on branch A, " << reaching << " reaching E r > 10";
  v.detail = s.str();
  return v;
}

Verdict cross_formulation()
{
  Verdict v;
  std::ostringstream s;
  for (double alpha : {0.1, 0.3, 0.5})
  {
    const ModelParams p = params(alpha);
    const double guess = p.coulomb_level(1);
    const double radial =
        radial::solve_self_consistent(p, 0, radial::default_grid(p, guess, 0.5 * guess), guess).state.binding_energy;
    const double momentum = momentum::solve_self_consistent(p, 0).binding_energy;
    const double rel = std::abs(radial - momentum) / radial;
    v.pass &= rel <= 1e-4;
    s << "alpha=" << alpha << ":" << rel << " ";
  }
  v.detail = s.str() + "(relative difference)";
  return v;
}

Verdict threshold_identity()
{
  Verdict v;
  std::mt19937_64 rng(0x5eed2026);
  std::uniform_real_distribution<double> log_alpha(std::log(1e-4), std::log(2.0));
  std::uniform_real_distribution<double> log_e(std::log(1e-8), std::log(2.0));
  std::uniform_real_distribution<double> log_m(std::log(0.1), std::log(10.0));
  std::uniform_int_distribution<int> l_dist(0, 3);
  int mismatches = 0;
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k)
  {
    ModelParams p = params(std::exp(log_alpha(rng)), l_dist(rng));
    p.mass = std::exp(log_m(rng));
    const double e = std::exp(log_e(rng));
    const double gamma = asymptotics::gamma_of(p, e);
    const double threshold = asymptotics::alpha_threshold(p, e);
    const bool by_gamma = gamma > 0.25;
    const bool by_alpha = p.alpha > threshold;
    const bool by_report = asymptotics::classify(p, e).branch == asymptotics::Branch::B_infinite;
    // alpha - alpha_threshold = (pi E / 2 m)(gamma - 1/4) exactly.
    const double gap = std::abs((p.alpha - threshold) - pi * e / (2.0 * p.mass) * (gamma - 0.25));
    worst = std::max(worst, gap / std::max(p.alpha, threshold));
    mismatches += (by_gamma != by_alpha || by_gamma != by_report) ? 1 : 0;
  }
  v.pass = mismatches == 0 && worst <= 1e-12;
  std::ostringstream s;
  s << "10000 points, " << mismatches << " disagreements, max identity residual " << worst;
  v.detail = s.str();
  return v;
}

struct Criterion
{
  int id;
  const char *name;
  double budget_seconds;
  std::function<Verdict()> check;
};

}  // namespace

int main()
{
  const std::vector<Criterion> criteria{
      {1, "special-function suite", 5.0, special_functions},
      {2, "Coulomb-limit regression", 30.0, coulomb_regression},
      {3, "asymptotic tail matches sqrt(r) K_nu(kappa r)", INFINITY, asymptotic_tail},
      {4, "zeros of K_{i mu} lie below mu", 10.0, zero_locations},
      {5, "no anomalous levels for alpha in [1/137, 0.5]", 600.0, no_anomalous_levels},
      {6, "momentum and radial binding energies agree", 300.0, cross_formulation},
      {7, "threshold coupling equals the gamma > 1/4 rule", INFINITY, threshold_identity},
  };
  int failures = 0;
  for (const Criterion &c : criteria)
  {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try
    {
      v = c.check();
    }
    catch (const std::exception &e)
    {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds <= c.budget_seconds;
    const bool pass = v.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s criterion %d: %s [%.2f s%s] %s\n", pass ? "PASS" : "FAIL", c.id, c.name, seconds,
                in_time ? "" : ", over budget", v.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
