// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUASISPEC_MODEL_HPP
#define QUASISPEC_MODEL_HPP

namespace quasispec
{

// Natural units throughout (hbar = c = 1): lengths in 1/m, energies in m.

/// Physical inputs of the two-fermion problem.
struct ModelParams
{
  /// Coupling alpha = e^2 / 4 pi.
  double alpha = 1.0 / 137.035999;
  /// Common fermion mass.
  double mass = 1.0;
  /// Orbital angular momentum.
  int l = 0;
  /// +1 for opposite charges (attractive), -1 for equal charges.
  int charge_sign = +1;

  /// Throws DomainError unless alpha > 0, mass > 0, l >= 0 and charge_sign is +-1.
  void validate() const;

  /// Coulomb level E_n = m alpha^2 / (4 n^2) for principal number n >= 1 (reduced mass m/2).
  double coulomb_level(int principal) const;
};

}  // namespace quasispec

#endif
