// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef QUASISPEC_ERRORS_HPP
#define QUASISPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace quasispec
{

/// Argument outside the mathematical domain of a function (x <= 0 for Ci, E < 0, ...).
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// Input violates a documented precondition of an approximation (e.g. expansion used
/// outside its validity window).
class PreconditionError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Generic numerical failure that is reported rather than silently ignored.
class NumericalFailure : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace quasispec

#endif
