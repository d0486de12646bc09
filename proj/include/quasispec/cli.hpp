// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

/** \file cli.hpp
 *
 *  \brief Command-line front end that resolves settings and writes artifacts.
 *
 *  Settings come from flags and optionally from a flat `key = value` file given with
 *  `--config`; keys are the long flag names and flags win over the file. Every artifact
 *  embeds the fully resolved configuration and `"schema": 1`. Exit status is 0 on success,
 *  2 for invalid configuration or input, 3 when a solver fails to converge or finds no
 *  state (a partial report is still written) and 1 for anything else.
 */

#ifndef QUASISPEC_CLI_HPP
#define QUASISPEC_CLI_HPP

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "quasispec/model.hpp"
#include "quasispec/radial_grid.hpp"
#include "quasispec/radial_solver.hpp"
#include "quasispec/serialize.hpp"

namespace quasispec::cli
{

inline constexpr const char *version = "0.1.0";

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_config = 2;
inline constexpr int exit_no_convergence = 3;

/// Invalid or unknown configuration entry.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

enum class Subcommand
{
  specfun,
  potential,
  solve,
  classify,
  scan,
  momentum
};

enum class OutputFormat
{
  csv,
  json
};

enum class SolveMode
{
  frozen_coulomb,
  frozen,
  self_consistent
};

enum class MomentumMode
{
  spectrum,
  self_consistent
};

struct RunConfig
{
  Subcommand subcommand = Subcommand::specfun;
  ModelParams params{};

  /// "-" is standard output. Files also get a `<output>.meta.json` sidecar.
  std::string output = "-";
  /// Unset means the subcommand's natural format (CSV for tables, JSON otherwise).
  std::optional<OutputFormat> format;

  // Radial grid. r_min = r_max = 0 selects a grid sized for the state being solved.
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t n_points = 20000;
  GridSpacing spacing = GridSpacing::logarithmic;

  // Tolerance overrides.
  radial::SolverOptions solver{};

  // specfun
  std::string function = "f";
  double x = 0.0;
  double nu = 0.0;
  double mu = 1.0;
  double x_min = 1e-3;
  std::string kernel_branch = "auto";

  /// Energy parameter E in units of m (potential, classify, frozen solve, momentum).
  double energy_over_m = 0.0;

  // solve
  SolveMode solve_mode = SolveMode::frozen_coulomb;
  int n_radial = 0;
  /// Starting energy of the self-consistent search in units of m; 0 picks the Coulomb level.
  double e_init_over_m = 0.0;

  // classify
  double r_cut = 10.0;

  // scan
  std::vector<double> alphas;
  double alpha_min = 0.0;
  double alpha_max = 0.0;
  int alpha_steps = -1;
  std::vector<int> l_values{0};
  int n_max = 3;
  double window_lo_over_m_alpha2 = 0.002;
  double window_hi_over_m = 2.0;
  double coulomb_threshold = 0.5;
  std::size_t mesh_points_per_decade = 6;
  int jobs = 1;

  // momentum
  MomentumMode momentum_mode = MomentumMode::spectrum;
  std::size_t n_nodes = 200;
  /// Binding on the left-hand side in units of m; 0 reuses the energy parameter.
  double trial_over_m = 0.0;
  /// Momentum scale p0; 0 selects max(sqrt(m E), m alpha).
  double momentum_scale = 0.0;
};

std::string to_string(Subcommand s);

/// Output format after applying the subcommand default.
OutputFormat resolved_format(const RunConfig &config);

/// Throws ConfigError when a setting is out of range.
void validate(const RunConfig &config);

/// Coupling values of a scan in order (explicit list, else a log-spaced range).
std::vector<double> scan_alphas(const RunConfig &config);

void to_json(json &j, const RunConfig &c);
void from_json(const json &j, RunConfig &c);

/// Parses `key = value` lines; `#` starts a comment. Throws ConfigError on malformed lines
/// or duplicate keys.
std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string &text);

/// Parses arguments (without the program name) into a validated configuration.
RunConfig parse_arguments(const std::vector<std::string> &args);

/// Executes a configuration. Artifacts go to config.output or `out`; error reports go to `err`.
int run(const RunConfig &config, std::ostream &out, std::ostream &err);

/// parse_arguments followed by run; also handles --help. Returns the exit status.
int main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace quasispec::cli

#endif
