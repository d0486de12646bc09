// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

#include "quasispec/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <utility>

#include <CLI11.hpp>

#include "quasispec/asymptotics.hpp"
#include "quasispec/errors.hpp"
#include "quasispec/momentum_solver.hpp"
#include "quasispec/potential.hpp"
#include "quasispec/specfun.hpp"

namespace quasispec::cli
{

namespace
{

template <class E>
using NameTable = std::vector<std::pair<std::string, E>>;

const NameTable<Subcommand> subcommand_names{{"specfun", Subcommand::specfun},   {"potential", Subcommand::potential},
                                             {"solve", Subcommand::solve},       {"classify", Subcommand::classify},
                                             {"scan", Subcommand::scan},         {"momentum", Subcommand::momentum}};
const NameTable<OutputFormat> format_names{{"csv", OutputFormat::csv}, {"json", OutputFormat::json}};
const NameTable<SolveMode> solve_mode_names{{"frozen-coulomb", SolveMode::frozen_coulomb},
                                            {"frozen", SolveMode::frozen},
                                            {"self-consistent", SolveMode::self_consistent}};
const NameTable<MomentumMode> momentum_mode_names{{"spectrum", MomentumMode::spectrum},
                                                  {"self-consistent", MomentumMode::self_consistent}};
const std::vector<std::string> specfun_functions{"f", "ci", "si", "k", "kimag", "zeros"};
const std::vector<std::string> kernel_branch_names{"auto", "series", "composition", "asymptotic"};

template <class E>
std::string name_of(const NameTable<E> &table, E value)
{
  for (const auto &[name, v] : table)
  {
    if (v == value)
    {
      return name;
    }
  }
  return "?";
}

template <class E>
E value_of(const NameTable<E> &table, const std::string &name, const char *what)
{
  for (const auto &[n, v] : table)
  {
    if (n == name)
    {
      return v;
    }
  }
  throw ConfigError(std::string("unknown ") + what + " '" + name + "'");
}

bool contains(const std::vector<std::string> &list, const std::string &s)
{
  return std::find(list.begin(), list.end(), s) != list.end();
}

std::string number(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string &s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
  {
    return s;
  }
  std::string q = "\"";
  for (char ch : s)
  {
    q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  }
  return q + "\"";
}

/// `#`-prefixed preamble shared by every CSV artifact.
std::string csv_preamble(std::string_view kind, const json &config)
{
  std::string s = "# quasispec " + std::string(kind) + "\n";
  s += "# schema: " + std::to_string(schema_version) + "\n";
  s += "# config: " + config.dump() + "\n";
  return s;
}

std::string utc_timestamp()
{
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RadialGrid explicit_or(const RunConfig &c, const RadialGrid &fallback)
{
  if (c.r_min > 0.0 && c.r_max > 0.0)
  {
    return RadialGrid{c.r_min, c.r_max, c.n_points, c.spacing};
  }
  return fallback;
}

json energies(const ModelParams &p, double e)
{
  return json{{"over_m", e / p.mass}, {"over_m_alpha2", e / (p.mass * p.alpha * p.alpha)}};
}

/// Artifact text and exit status of one subcommand run.
struct Outcome
{
  std::string text;
  int status = exit_ok;
};

// ---------------------------------------------------------------------------------------
// specfun

Outcome run_specfun(const RunConfig &c, const json &config)
{
  json result{{"function", c.function}};
  std::string csv_header;
  std::string csv_rows;
  auto point_row = [&](const specfun::EvalPoint &p) {
    result["x"] = p.x;
    result["value"] = p.value;
    result["abs_error_estimate"] = p.abs_error_estimate;
    csv_header = "function,x,value,abs_error_estimate\n";
    csv_rows = c.function + "," + number(p.x) + "," + number(p.value) + "," + number(p.abs_error_estimate) + "\n";
  };
  if (c.function == "f")
  {
    specfun::EvalPoint p;
    std::string branch = c.kernel_branch;
    if (branch == "auto")
    {
      p = specfun::f_kernel_eval(c.x);
      const auto b = specfun::kernel_branch(c.x);
      branch = b == specfun::KernelBranch::series        ? "series"
               : b == specfun::KernelBranch::composition ? "composition"
                                                         : "asymptotic";
    }
    else
    {
      const auto b = branch == "series"        ? specfun::KernelBranch::series
                     : branch == "composition" ? specfun::KernelBranch::composition
                                               : specfun::KernelBranch::asymptotic;
      p = specfun::f_kernel_branch(c.x, b);
    }
    point_row(p);
    result["branch"] = branch;
  }
  else if (c.function == "ci")
  {
    point_row(specfun::cosine_integral_eval(c.x));
  }
  else if (c.function == "si")
  {
    point_row(specfun::sine_integral_si_eval(c.x));
  }
  else if (c.function == "k")
  {
    point_row(specfun::EvalPoint{c.x, specfun::bessel_k_real_order(c.nu, c.x), 0.0});
    result["nu"] = c.nu;
  }
  else if (c.function == "kimag")
  {
    const auto s = specfun::bessel_k_imag_order_scaled(c.mu, c.x);
    point_row(specfun::bessel_k_imag_order_eval(c.mu, c.x));
    result["mu"] = c.mu;
    result["mantissa"] = s.mantissa;
    result["log_scale"] = s.log_scale;
  }
  else
  {
    const auto zeros = specfun::k_imag_zeros(c.mu, c.x_min);
    result["mu"] = c.mu;
    result["x_min"] = c.x_min;
    result["zeros"] = zeros;
    csv_header = "index,x\n";
    for (std::size_t i = 0; i < zeros.size(); ++i)
    {
      csv_rows += std::to_string(i) + "," + number(zeros[i]) + "\n";
    }
  }
  if (resolved_format(c) == OutputFormat::csv)
  {
    return {csv_preamble("specfun", config) + csv_header + csv_rows};
  }
  return {dump(make_artifact("specfun", config, result))};
}

// ---------------------------------------------------------------------------------------
// potential

Outcome run_potential(const RunConfig &c, const json &config)
{
  const double e = c.energy_over_m * c.params.mass;
  const RadialGrid grid = explicit_or(c, RadialGrid{1e-6, 1e3, c.n_points, c.spacing});
  const auto samples = potential::tabulate(c.params, e, grid);
  if (resolved_format(c) == OutputFormat::csv)
  {
    std::string s = csv_preamble("potential", config);
    s += "# grid: " + json(grid).dump() + "\n";
    s += "r,v,v_coulomb,v_large_r_asymptote\n";
    for (const auto &p : samples)
    {
      const double asym = e > 0.0 ? potential::large_r_asymptote(c.params, e, p.r) : std::nan("");
      s += number(p.r) + "," + number(p.v) + "," + number(potential::coulomb(c.params, p.r)) + ","
           + (e > 0.0 ? number(asym) : std::string()) + "\n";
    }
    return {s};
  }
  json r = json::array();
  json v = json::array();
  json vc = json::array();
  json va = json::array();
  for (const auto &p : samples)
  {
    r.push_back(p.r);
    v.push_back(p.v);
    vc.push_back(potential::coulomb(c.params, p.r));
    va.push_back(e > 0.0 ? json(potential::large_r_asymptote(c.params, e, p.r)) : json(nullptr));
  }
  json result{{"energy", e}, {"grid", grid}, {"r", r}, {"v", v}, {"v_coulomb", vc}, {"v_large_r_asymptote", va}};
  return {dump(make_artifact("potential", config, result))};
}

// ---------------------------------------------------------------------------------------
// solve

std::string chi_csv(const RunConfig &c, const json &config, const EigenResult &s)
{
  std::string out = csv_preamble("solve", config);
  out += "# binding_energy: " + number(s.binding_energy) + "\n";
  out += "# binding_energy_over_m_alpha2: " + number(s.binding_energy / (c.params.mass * c.params.alpha * c.params.alpha))
         + "\n";
  out += "# node_count: " + std::to_string(s.node_count) + "\n";
  out += "# converged: " + std::string(s.converged ? "true" : "false") + "\n";
  out += "r,chi\n";
  for (std::size_t i = 0; i < s.r.size(); ++i)
  {
    out += number(s.r[i]) + "," + number(s.chi[i]) + "\n";
  }
  return out;
}

Outcome run_solve(const RunConfig &c, const json &config)
{
  const ModelParams &p = c.params;
  const double coulomb = p.coulomb_level(c.n_radial + p.l + 1);
  json result{{"mode", name_of(solve_mode_names, c.solve_mode)}};
  EigenResult state;
  if (c.solve_mode == SolveMode::self_consistent)
  {
    const RadialGrid grid = explicit_or(c, radial::default_grid(p, coulomb, coulomb, c.n_points));
    const double e_init = c.e_init_over_m > 0.0 ? c.e_init_over_m * p.mass : coulomb;
    auto level = radial::solve_self_consistent(p, c.n_radial, grid, e_init, c.solver);
    state = std::move(level.state);
    result["report"] = level.report;
  }
  else
  {
    const double e_param = c.solve_mode == SolveMode::frozen ? c.energy_over_m * p.mass : 0.0;
    const RadialGrid grid = explicit_or(c, radial::default_grid(p, coulomb, e_param, c.n_points));
    state = radial::solve_linear_eigenvalue(p, e_param, c.n_radial, grid, c.solver);
  }
  result["binding_energy"] = state.binding_energy;
  result["binding_energy_units"] = energies(p, state.binding_energy);
  result["coulomb_binding_energy"] = coulomb;
  result["state"] = state;
  const int status = state.converged ? exit_ok : exit_no_convergence;
  if (resolved_format(c) == OutputFormat::csv)
  {
    return {chi_csv(c, config, state), status};
  }
  return {dump(make_artifact("solve", config, result)), status};
}

// ---------------------------------------------------------------------------------------
// classify

Outcome run_classify(const RunConfig &c, const json &config)
{
  const double e = c.energy_over_m * c.params.mass;
  json result = asymptotics::classify(c.params, e, c.r_cut);
  result["energy_units"] = energies(c.params, e);
  return {dump(make_artifact("classify", config, result))};
}

// ---------------------------------------------------------------------------------------
// scan

struct ScanLevel
{
  radial::ScannedLevel level;
  asymptotics::AsymptoticsReport report;
};

struct ScanRow
{
  double alpha = 0.0;
  int l = 0;
  std::vector<ScanLevel> levels;
  std::string error;
};

ScanRow scan_row(const RunConfig &c, double alpha, int l)
{
  ScanRow row;
  row.alpha = alpha;
  row.l = l;
  try
  {
    ModelParams p = c.params;
    p.alpha = alpha;
    p.l = l;
    const double lo = c.window_lo_over_m_alpha2 * p.mass * alpha * alpha;
    const double hi = c.window_hi_over_m * p.mass;
    const RadialGrid grid = explicit_or(c, radial::default_grid(p, lo, lo, c.n_points));
    radial::LevelScanOptions opts;
    opts.mesh_points_per_decade = c.mesh_points_per_decade;
    opts.coulomb_threshold = c.coulomb_threshold;
    opts.solver = c.solver;
    for (auto &level : radial::scan_extra_levels(p, grid, c.n_max, {lo, hi}, opts))
    {
      ScanLevel s;
      s.report = asymptotics::classify(p, level.state.binding_energy, c.r_cut);
      // The wavefunction is not part of the scan artifact.
      level.state.r.clear();
      level.state.chi.clear();
      s.level = std::move(level);
      row.levels.push_back(std::move(s));
    }
  }
  catch (const std::exception &e)
  {
    row.error = e.what();
  }
  return row;
}

std::vector<ScanRow> scan_rows(const RunConfig &c)
{
  std::vector<std::pair<double, int>> tasks;
  for (double a : scan_alphas(c))
  {
    for (int l : c.l_values)
    {
      tasks.emplace_back(a, l);
    }
  }
  std::vector<ScanRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++)
    {
      rows[i] = scan_row(c, tasks[i].first, tasks[i].second);
    }
  };
  const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(c.jobs), tasks.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t)
  {
    pool.emplace_back(worker);
  }
  worker();
  for (auto &t : pool)
  {
    t.join();
  }
  return rows;
}

struct RowSummary
{
  int coulomb_like = 0;
  int anomalous = 0;
  const ScanLevel *ground = nullptr;
  std::string branch;
  std::string reaches;
};

RowSummary summarize(const ScanRow &row)
{
  RowSummary s;
  bool all_b = true;
  bool all_a = true;
  bool any_reach = false;
  for (const auto &lv : row.levels)
  {
    (lv.level.anomalous_candidate ? s.anomalous : s.coulomb_like) += 1;
    if (s.ground == nullptr || lv.level.state.binding_energy > s.ground->level.state.binding_energy)
    {
      s.ground = &lv;
    }
    all_b = all_b && lv.report.branch == asymptotics::Branch::B_infinite;
    all_a = all_a && lv.report.branch == asymptotics::Branch::A_finite;
    any_reach = any_reach || lv.report.oscillation_reaches_asymptotic_zone;
  }
  if (!row.levels.empty())
  {
    s.branch = all_b ? "B_infinite" : all_a ? "A_finite" : "mixed";
    s.reaches = any_reach ? "true" : "false";
  }
  return s;
}

Outcome run_scan(const RunConfig &c, const json &config)
{
  const auto rows = scan_rows(c);
  if (resolved_format(c) == OutputFormat::csv)
  {
    std::string s = csv_preamble("scan", config);
    s += "alpha,l,levels_found,coulomb_like,anomalous_candidates,ground_binding_over_m,"
         "ground_binding_over_m_alpha2,branch,ground_gamma,ground_alpha_threshold,"
         "oscillation_reaches_asymptotic_zone,levels_over_m_alpha2,error\n";
    for (const auto &row : rows)
    {
      const RowSummary sum = summarize(row);
      const double ma2 = c.params.mass * row.alpha * row.alpha;
      std::string levels;
      for (const auto &lv : row.levels)
      {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s%d:%.10g", levels.empty() ? "" : ";", lv.level.state.n_radial,
                      lv.level.state.binding_energy / ma2);
        levels += buf;
      }
      s += number(row.alpha) + "," + std::to_string(row.l) + "," + std::to_string(row.levels.size()) + ","
           + std::to_string(sum.coulomb_like) + "," + std::to_string(sum.anomalous) + ",";
      if (sum.ground != nullptr)
      {
        const double e = sum.ground->level.state.binding_energy;
        s += number(e / c.params.mass) + "," + number(e / ma2) + "," + sum.branch + ","
             + number(sum.ground->report.gamma) + "," + number(sum.ground->report.alpha_threshold) + ",";
      }
      else
      {
        s += ",,,,,";
      }
      s += sum.reaches + "," + levels + "," + csv_field(row.error) + "\n";
    }
    return {s};
  }
  json out_rows = json::array();
  for (const auto &row : rows)
  {
    const RowSummary sum = summarize(row);
    ModelParams row_params = c.params;
    row_params.alpha = row.alpha;
    row_params.l = row.l;
    json levels = json::array();
    for (const auto &lv : row.levels)
    {
      levels.push_back(json{{"n_radial", lv.level.state.n_radial},
                            {"binding_energy", lv.level.state.binding_energy},
                            {"binding_energy_units", energies(row_params, lv.level.state.binding_energy)},
                            {"nearest_coulomb_n", lv.level.nearest_coulomb_n},
                            {"coulomb_deviation", lv.level.coulomb_deviation},
                            {"anomalous_candidate", lv.level.anomalous_candidate},
                            {"converged", lv.level.state.converged},
                            {"asymptotics", lv.report}});
    }
    out_rows.push_back(json{{"alpha", row.alpha},
                            {"l", row.l},
                            {"coulomb_like", sum.coulomb_like},
                            {"anomalous_candidates", sum.anomalous},
                            {"branch", sum.branch},
                            {"oscillation_reaches_asymptotic_zone", sum.reaches},
                            {"levels", levels},
                            {"error", row.error}});
  }
  return {dump(make_artifact("scan", config, json{{"rows", out_rows}}))};
}

// ---------------------------------------------------------------------------------------
// momentum

Outcome run_momentum(const RunConfig &c, const json &config)
{
  const ModelParams &p = c.params;
  if (c.momentum_mode == MomentumMode::self_consistent)
  {
    const auto level = momentum::solve_self_consistent(p, c.n_radial, c.n_nodes);
    json result = level;
    result["binding_energy_units"] = energies(p, level.binding_energy);
    result["n_radial"] = c.n_radial;
    result["l"] = p.l;
    return {dump(make_artifact("momentum", config, result))};
  }
  const double e = c.energy_over_m * p.mass;
  const double trial = c.trial_over_m > 0.0 ? c.trial_over_m * p.mass : e;
  if (!(trial > 0.0))
  {
    throw ConfigError("momentum: a positive trial binding is required (--trial-over-m or --energy-over-m)");
  }
  const double scale =
      c.momentum_scale > 0.0 ? c.momentum_scale : momentum::default_momentum_scale(p, std::max(e, trial));
  const auto disc = momentum::make_discretization(p.l, c.n_nodes, scale);
  json result = momentum::coupling_spectrum(p.mass, e, trial, disc);
  result["l"] = p.l;
  result["n_nodes"] = c.n_nodes;
  result["momentum_scale"] = scale;
  result["mapping"] = std::string(momentum::to_string(disc.mapping));
  result["trial_binding_units"] = energies(p, trial);
  return {dump(make_artifact("momentum", config, result))};
}

json error_json(std::string_view type, const std::string &message, int status)
{
  return json{{"schema", schema_version},
              {"kind", "error"},
              {"error", json{{"type", std::string(type)}, {"message", message}}},
              {"exit_code", status}};
}

void write_artifact(const RunConfig &c, const std::string &text, std::ostream &out, int status,
                    std::chrono::steady_clock::time_point started)
{
  if (c.output == "-")
  {
    out << text;
    out.flush();
    return;
  }
  {
    std::ofstream f(c.output, std::ios::binary | std::ios::trunc);
    if (!f)
    {
      throw std::runtime_error("cannot open output file '" + c.output + "'");
    }
    f << text;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  const json meta{{"schema", schema_version}, {"kind", "meta"},       {"artifact", c.output},
                  {"created_utc", utc_timestamp()}, {"wall_seconds", wall}, {"exit_code", status},
                  {"program", "quasispec"},         {"version", version}};
  std::ofstream m(c.output + ".meta.json", std::ios::binary | std::ios::trunc);
  if (!m)
  {
    throw std::runtime_error("cannot open sidecar '" + c.output + ".meta.json'");
  }
  m << dump(meta);
}

/// Long option `--key`; config-file entries are matched to options by the same key.
template <class T>
CLI::Option *opt(CLI::App *app, const std::string &key, T &target, const std::string &help)
{
  return app->add_option("--" + key, target, help);
}

void add_grid_options(CLI::App *s, RunConfig &c, std::string &spacing)
{
  opt(s, "r-min", c.r_min, "Inner grid radius (0: automatic)");
  opt(s, "r-max", c.r_max, "Outer grid radius (0: automatic)");
  opt(s, "n-points", c.n_points, "Grid points");
  opt(s, "spacing", spacing, "Grid spacing: log or uniform");
}

void add_tolerance_options(CLI::App *s, RunConfig &c)
{
  opt(s, "eigen-tolerance", c.solver.eigen_rel_tolerance, "Relative width of the eigenvalue bisection");
  opt(s, "self-consistency-tolerance", c.solver.self_consistency_tolerance, "Absolute tolerance on g(E) in units of m");
  opt(s, "self-consistency-rel-tolerance", c.solver.self_consistency_rel_tolerance,
      "Relative bracket width accepted for E*");
  opt(s, "max-iterations", c.solver.max_self_consistency_iterations, "Iteration cap of the self-consistent search");
  opt(s, "tail-fraction", c.solver.tail_fraction, "Tail decay required before the grid is extended");
}

std::string slurp(const std::string &path)
{
  std::ifstream f(path, std::ios::binary);
  if (!f)
  {
    throw ConfigError("cannot read config file '" + path + "'");
  }
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

/// --help output carried out of parse_arguments.
class HelpRequested : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

}  // namespace

std::string to_string(Subcommand s)
{
  return name_of(subcommand_names, s);
}

OutputFormat resolved_format(const RunConfig &c)
{
  if (c.format)
  {
    return *c.format;
  }
  return c.subcommand == Subcommand::potential || c.subcommand == Subcommand::scan ? OutputFormat::csv
                                                                                   : OutputFormat::json;
}

void validate(const RunConfig &c)
{
  auto require = [](bool ok, const std::string &what) {
    if (!ok)
    {
      throw ConfigError(what);
    }
  };
  try
  {
    c.params.validate();
  }
  catch (const DomainError &e)
  {
    throw ConfigError(e.what());
  }
  require(!c.output.empty(), "output must not be empty");
  require(c.n_points >= 100, "n-points must be >= 100");
  require(c.r_min >= 0.0 && c.r_max >= 0.0, "r-min and r-max must be >= 0");
  require((c.r_min == 0.0) == (c.r_max == 0.0), "r-min and r-max must be given together");
  require(c.r_min == 0.0 || c.r_min < c.r_max, "r-min must be < r-max");
  require(c.solver.eigen_rel_tolerance > 0.0 && c.solver.self_consistency_tolerance > 0.0
              && c.solver.self_consistency_rel_tolerance > 0.0 && c.solver.tail_fraction > 0.0,
          "tolerances must be > 0");
  require(c.solver.max_self_consistency_iterations > 0, "max-iterations must be > 0");
  require(contains(specfun_functions, c.function), "unknown specfun function '" + c.function + "'");
  require(contains(kernel_branch_names, c.kernel_branch), "unknown kernel branch '" + c.kernel_branch + "'");
  require(std::isfinite(c.x) && std::isfinite(c.nu), "x and nu must be finite");
  require(c.mu > 0.0 && c.x_min > 0.0, "mu and x-min must be > 0");
  require(c.energy_over_m >= 0.0 && std::isfinite(c.energy_over_m), "energy-over-m must be finite and >= 0");
  require(c.n_radial >= 0, "n must be >= 0");
  require(c.e_init_over_m >= 0.0, "e-init-over-m must be >= 0");
  require(c.r_cut > 0.0, "r-cut must be > 0");
  require(std::all_of(c.alphas.begin(), c.alphas.end(), [](double a) { return a > 0.0; }), "alphas must be > 0");
  require(c.alpha_steps >= -1, "alpha-steps must be >= 0");
  require(c.alpha_min >= 0.0 && c.alpha_max >= 0.0, "alpha-min and alpha-max must be >= 0");
  require((c.alpha_min == 0.0) == (c.alpha_max == 0.0), "alpha-min and alpha-max must be given together");
  require(std::all_of(c.l_values.begin(), c.l_values.end(), [](int l) { return l >= 0; }), "l-values must be >= 0");
  require(c.n_max >= 0, "n-max must be >= 0");
  require(c.window_lo_over_m_alpha2 > 0.0, "window-lo-over-m-alpha2 must be > 0");
  require(c.window_hi_over_m > 0.0 && c.window_hi_over_m <= 2.0, "window-hi-over-m must lie in (0, 2]");
  require(c.coulomb_threshold > 0.0, "coulomb-threshold must be > 0");
  require(c.mesh_points_per_decade >= 1, "mesh-points-per-decade must be >= 1");
  require(c.jobs >= 1, "jobs must be >= 1");
  require(c.n_nodes >= 40, "n-nodes must be >= 40");
  require(c.trial_over_m >= 0.0 && c.momentum_scale >= 0.0, "trial-over-m and momentum-scale must be >= 0");
  if (c.subcommand == Subcommand::momentum)
  {
    require(c.params.l <= 3, "momentum: partial waves l <= 3 only");
  }
  if (c.subcommand == Subcommand::classify || c.subcommand == Subcommand::momentum)
  {
    require(resolved_format(c) == OutputFormat::json, to_string(c.subcommand) + " writes JSON only");
  }
}

std::vector<double> scan_alphas(const RunConfig &c)
{
  if (!c.alphas.empty())
  {
    return c.alphas;
  }
  if (c.alpha_min == 0.0 && c.alpha_max == 0.0)
  {
    return {c.params.alpha};
  }
  const int steps = c.alpha_steps < 0 ? 8 : c.alpha_steps;
  std::vector<double> out;
  if (steps == 0 || c.alpha_min > c.alpha_max)
  {
    return out;
  }
  if (steps == 1 || c.alpha_min == c.alpha_max)
  {
    return {c.alpha_min};
  }
  for (int k = 0; k < steps; ++k)
  {
    out.push_back(c.alpha_min * std::pow(c.alpha_max / c.alpha_min, static_cast<double>(k) / (steps - 1)));
  }
  out.back() = c.alpha_max;
  return out;
}

void to_json(json &j, const RunConfig &c)
{
  j = json{{"subcommand", to_string(c.subcommand)},
           {"params", c.params},
           {"output", c.output},
           {"format", name_of(format_names, resolved_format(c))},
           {"r_min", c.r_min},
           {"r_max", c.r_max},
           {"n_points", c.n_points},
           {"spacing", to_string(c.spacing)},
           {"eigen_tolerance", c.solver.eigen_rel_tolerance},
           {"min_binding", c.solver.min_binding},
           {"max_binding", c.solver.max_binding},
           {"tail_fraction", c.solver.tail_fraction},
           {"max_extensions", c.solver.max_extensions},
           {"self_consistency_tolerance", c.solver.self_consistency_tolerance},
           {"self_consistency_rel_tolerance", c.solver.self_consistency_rel_tolerance},
           {"max_iterations", c.solver.max_self_consistency_iterations},
           {"function", c.function},
           {"x", c.x},
           {"nu", c.nu},
           {"mu", c.mu},
           {"x_min", c.x_min},
           {"kernel_branch", c.kernel_branch},
           {"energy_over_m", c.energy_over_m},
           {"solve_mode", name_of(solve_mode_names, c.solve_mode)},
           {"n_radial", c.n_radial},
           {"e_init_over_m", c.e_init_over_m},
           {"r_cut", c.r_cut},
           {"alphas", c.alphas},
           {"alpha_min", c.alpha_min},
           {"alpha_max", c.alpha_max},
           {"alpha_steps", c.alpha_steps},
           {"l_values", c.l_values},
           {"n_max", c.n_max},
           {"window_lo_over_m_alpha2", c.window_lo_over_m_alpha2},
           {"window_hi_over_m", c.window_hi_over_m},
           {"coulomb_threshold", c.coulomb_threshold},
           {"mesh_points_per_decade", c.mesh_points_per_decade},
           {"jobs", c.jobs},
           {"momentum_mode", name_of(momentum_mode_names, c.momentum_mode)},
           {"n_nodes", c.n_nodes},
           {"trial_over_m", c.trial_over_m},
           {"momentum_scale", c.momentum_scale}};
}

void from_json(const json &j, RunConfig &c)
{
  c.subcommand = value_of(subcommand_names, j.at("subcommand").get<std::string>(), "subcommand");
  j.at("params").get_to(c.params);
  j.at("output").get_to(c.output);
  c.format = value_of(format_names, j.at("format").get<std::string>(), "format");
  j.at("r_min").get_to(c.r_min);
  j.at("r_max").get_to(c.r_max);
  j.at("n_points").get_to(c.n_points);
  c.spacing = grid_spacing_from_string(j.at("spacing").get<std::string>());
  j.at("eigen_tolerance").get_to(c.solver.eigen_rel_tolerance);
  j.at("min_binding").get_to(c.solver.min_binding);
  j.at("max_binding").get_to(c.solver.max_binding);
  j.at("tail_fraction").get_to(c.solver.tail_fraction);
  j.at("max_extensions").get_to(c.solver.max_extensions);
  j.at("self_consistency_tolerance").get_to(c.solver.self_consistency_tolerance);
  j.at("self_consistency_rel_tolerance").get_to(c.solver.self_consistency_rel_tolerance);
  j.at("max_iterations").get_to(c.solver.max_self_consistency_iterations);
  j.at("function").get_to(c.function);
  j.at("x").get_to(c.x);
  j.at("nu").get_to(c.nu);
  j.at("mu").get_to(c.mu);
  j.at("x_min").get_to(c.x_min);
  j.at("kernel_branch").get_to(c.kernel_branch);
  j.at("energy_over_m").get_to(c.energy_over_m);
  c.solve_mode = value_of(solve_mode_names, j.at("solve_mode").get<std::string>(), "solve mode");
  j.at("n_radial").get_to(c.n_radial);
  j.at("e_init_over_m").get_to(c.e_init_over_m);
  j.at("r_cut").get_to(c.r_cut);
  j.at("alphas").get_to(c.alphas);
  j.at("alpha_min").get_to(c.alpha_min);
  j.at("alpha_max").get_to(c.alpha_max);
  j.at("alpha_steps").get_to(c.alpha_steps);
  j.at("l_values").get_to(c.l_values);
  j.at("n_max").get_to(c.n_max);
  j.at("window_lo_over_m_alpha2").get_to(c.window_lo_over_m_alpha2);
  j.at("window_hi_over_m").get_to(c.window_hi_over_m);
  j.at("coulomb_threshold").get_to(c.coulomb_threshold);
  j.at("mesh_points_per_decade").get_to(c.mesh_points_per_decade);
  j.at("jobs").get_to(c.jobs);
  c.momentum_mode = value_of(momentum_mode_names, j.at("momentum_mode").get<std::string>(), "momentum mode");
  j.at("n_nodes").get_to(c.n_nodes);
  j.at("trial_over_m").get_to(c.trial_over_m);
  j.at("momentum_scale").get_to(c.momentum_scale);
}

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string &text)
{
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
    {
      return std::string();
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos)
    {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty())
    {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
    {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.empty() || value.empty())
    {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
    }
    for (const auto &[k, v] : out)
    {
      if (k == key)
      {
        throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
      }
    }
    out.emplace_back(std::move(key), value);
  }
  return out;
}

RunConfig parse_arguments(const std::vector<std::string> &args)
{
  RunConfig c;
  if (const char *env = std::getenv("QUASISPEC_JOBS"); env != nullptr && *env != '\0')
  {
    try
    {
      std::size_t used = 0;
      c.jobs = std::stoi(env, &used);
      if (used != std::char_traits<char>::length(env))
      {
        throw std::invalid_argument(env);
      }
    }
    catch (const std::exception &)
    {
      throw ConfigError(std::string("QUASISPEC_JOBS is not an integer: '") + env + "'");
    }
  }

  CLI::App app{"Bound states of the energy-dependent quasipotential", "quasispec"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", version);

  std::string config_path;
  std::string format;
  std::string spacing = "log";
  std::string solve_mode = "frozen-coulomb";
  std::string momentum_mode = "spectrum";

  auto add_common = [&](CLI::App *s) {
    s->add_option("--config", config_path, "File of 'key = value' lines; flags take precedence");
    s->add_option("--output,-o", c.output, "Artifact path ('-' for standard output)");
    opt(s, "format", format, "csv or json");
    opt(s, "alpha", c.params.alpha, "Coupling constant");
    opt(s, "mass", c.params.mass, "Fermion mass");
    opt(s, "l", c.params.l, "Orbital angular momentum");
    opt(s, "charge-sign", c.params.charge_sign, "+1 opposite charges, -1 equal charges");
  };

  std::vector<std::pair<CLI::App *, Subcommand>> subs;

  auto *specfun_cmd = app.add_subcommand("specfun", "Evaluate f, Ci, si, K_nu, K_{i mu} or the zeros of K_{i mu}");
  add_common(specfun_cmd);
  specfun_cmd->add_option("function", c.function, "f | ci | si | k | kimag | zeros");
  opt(specfun_cmd, "x", c.x, "Argument");
  opt(specfun_cmd, "nu", c.nu, "Real order for k");
  opt(specfun_cmd, "mu", c.mu, "Imaginary order for kimag and zeros");
  opt(specfun_cmd, "x-min", c.x_min, "Lower end of the zero search");
  opt(specfun_cmd, "kernel-branch", c.kernel_branch, "auto | series | composition | asymptotic");
  subs.emplace_back(specfun_cmd, Subcommand::specfun);

  auto *potential_cmd = app.add_subcommand("potential", "Tabulate V_E(r) next to its Coulomb and large-r forms");
  add_common(potential_cmd);
  opt(potential_cmd, "energy-over-m", c.energy_over_m, "Energy parameter E/m (0: Coulomb)");
  add_grid_options(potential_cmd, c, spacing);
  subs.emplace_back(potential_cmd, Subcommand::potential);

  auto *solve_cmd = app.add_subcommand("solve", "Solve for one bound state");
  add_common(solve_cmd);
  opt(solve_cmd, "mode", solve_mode, "frozen-coulomb | frozen | self-consistent");
  opt(solve_cmd, "n", c.n_radial, "Radial node count");
  opt(solve_cmd, "energy-over-m", c.energy_over_m, "Frozen energy parameter E/m (mode frozen)");
  opt(solve_cmd, "e-init-over-m", c.e_init_over_m, "Start of the self-consistent search (0: Coulomb level)");
  add_grid_options(solve_cmd, c, spacing);
  add_tolerance_options(solve_cmd, c);
  subs.emplace_back(solve_cmd, Subcommand::solve);

  auto *classify_cmd = app.add_subcommand("classify", "Large-r classification at one energy");
  add_common(classify_cmd);
  opt(classify_cmd, "energy-over-m", c.energy_over_m, "Binding energy E/m");
  opt(classify_cmd, "r-cut", c.r_cut, "E r above which the large-r form is trusted");
  subs.emplace_back(classify_cmd, Subcommand::classify);

  auto *scan_cmd = app.add_subcommand("scan", "Search for self-consistent levels over a coupling range");
  add_common(scan_cmd);
  opt(scan_cmd, "alphas", c.alphas, "Explicit coupling list")->delimiter(',');
  opt(scan_cmd, "alpha-min", c.alpha_min, "Smallest coupling of a log-spaced range");
  opt(scan_cmd, "alpha-max", c.alpha_max, "Largest coupling of a log-spaced range");
  opt(scan_cmd, "alpha-steps", c.alpha_steps, "Couplings in the range (default 8)");
  opt(scan_cmd, "l-values", c.l_values, "Partial waves")->delimiter(',');
  opt(scan_cmd, "n-max", c.n_max, "Largest node count");
  opt(scan_cmd, "window-lo-over-m-alpha2", c.window_lo_over_m_alpha2, "Lower end of the energy window in m alpha^2");
  opt(scan_cmd, "window-hi-over-m", c.window_hi_over_m, "Upper end of the energy window in m");
  opt(scan_cmd, "coulomb-threshold", c.coulomb_threshold, "Relative deviation below which a level is Coulomb-like");
  opt(scan_cmd, "mesh-points-per-decade", c.mesh_points_per_decade, "Energy mesh density of the root search");
  opt(scan_cmd, "r-cut", c.r_cut, "E r above which the large-r form is trusted");
  opt(scan_cmd, "jobs", c.jobs, "Rows computed concurrently (default: QUASISPEC_JOBS or 1)");
  add_grid_options(scan_cmd, c, spacing);
  add_tolerance_options(scan_cmd, c);
  subs.emplace_back(scan_cmd, Subcommand::scan);

  auto *momentum_cmd = app.add_subcommand("momentum", "Momentum-space coupling spectrum or self-consistent level");
  add_common(momentum_cmd);
  opt(momentum_cmd, "mode", momentum_mode, "spectrum | self-consistent");
  opt(momentum_cmd, "n", c.n_radial, "Radial node count (mode self-consistent)");
  opt(momentum_cmd, "energy-over-m", c.energy_over_m, "Kernel energy parameter E/m (0: Coulomb kernel)");
  opt(momentum_cmd, "trial-over-m", c.trial_over_m, "Binding on the left-hand side (0: same as the kernel)");
  opt(momentum_cmd, "n-nodes", c.n_nodes, "Quadrature nodes");
  opt(momentum_cmd, "momentum-scale", c.momentum_scale, "Mapping scale p0 (0: automatic)");
  subs.emplace_back(momentum_cmd, Subcommand::momentum);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try
  {
    app.parse(reversed);
  }
  catch (const CLI::ParseError &e)
  {
    if (e.get_exit_code() == 0)
    {
      std::ostringstream o;
      std::ostringstream ignored;
      app.exit(e, o, ignored);
      throw HelpRequested(o.str());
    }
    throw ConfigError(e.what());
  }

  CLI::App *active = nullptr;
  for (const auto &[cmd, kind] : subs)
  {
    if (cmd->parsed())
    {
      active = cmd;
      c.subcommand = kind;
    }
  }

  if (!config_path.empty())
  {
    for (const auto &[key, value] : parse_config_text(slurp(config_path)))
    {
      if (key == "config")
      {
        throw ConfigError("config files cannot include other config files");
      }
      CLI::Option *o = active->get_option_no_throw("--" + key);
      if (o == nullptr)
      {
        o = active->get_option_no_throw(key);
      }
      if (o == nullptr)
      {
        throw ConfigError("unknown config key '" + key + "' for " + to_string(c.subcommand));
      }
      if (o->count() > 0)
      {
        continue;
      }
      try
      {
        o->add_result(value);
        o->run_callback();
      }
      catch (const CLI::Error &e)
      {
        throw ConfigError("config key '" + key + "': " + e.what());
      }
    }
  }

  if (!format.empty())
  {
    c.format = value_of(format_names, format, "format");
  }
  try
  {
    c.spacing = grid_spacing_from_string(spacing);
  }
  catch (const std::exception &e)
  {
    throw ConfigError(e.what());
  }
  c.solve_mode = value_of(solve_mode_names, solve_mode, "solve mode");
  c.momentum_mode = value_of(momentum_mode_names, momentum_mode, "momentum mode");
  validate(c);
  return c;
}

int run(const RunConfig &c, std::ostream &out, std::ostream &err)
{
  const auto started = std::chrono::steady_clock::now();
  auto fail = [&](std::string_view type, const std::string &message, int status) {
    err << dump(error_json(type, message, status));
    return status;
  };
  json config;
  try
  {
    validate(c);
    config = c;
    Outcome outcome;
    switch (c.subcommand)
    {
    case Subcommand::specfun:
      outcome = run_specfun(c, config);
      break;
    case Subcommand::potential:
      outcome = run_potential(c, config);
      break;
    case Subcommand::solve:
      outcome = run_solve(c, config);
      break;
    case Subcommand::classify:
      outcome = run_classify(c, config);
      break;
    case Subcommand::scan:
      outcome = run_scan(c, config);
      break;
    case Subcommand::momentum:
      outcome = run_momentum(c, config);
      break;
    }
    write_artifact(c, outcome.text, out, outcome.status, started);
    if (outcome.status == exit_no_convergence)
    {
      return fail("no_convergence", "state did not meet the convergence criteria", outcome.status);
    }
    return outcome.status;
  }
  catch (const ConfigError &e)
  {
    return fail("config", e.what(), exit_config);
  }
  catch (const DomainError &e)
  {
    return fail("domain", e.what(), exit_config);
  }
  catch (const PreconditionError &e)
  {
    return fail("precondition", e.what(), exit_config);
  }
  catch (const NoConvergence &e)
  {
    json partial{{"message", e.what()}, {"report", e.report()}};
    try
    {
      write_artifact(c, dump(make_artifact("partial_report", config, partial)), out, exit_no_convergence, started);
    }
    catch (const std::exception &)
    {
    }
    return fail("no_convergence", e.what(), exit_no_convergence);
  }
  catch (const NoBoundState &e)
  {
    json partial{{"message", e.what()}, {"report", e.report() ? json(*e.report()) : json(nullptr)}};
    try
    {
      write_artifact(c, dump(make_artifact("partial_report", config, partial)), out, exit_no_convergence, started);
    }
    catch (const std::exception &)
    {
    }
    return fail("no_bound_state", e.what(), exit_no_convergence);
  }
  catch (const std::exception &e)
  {
    return fail("failure", e.what(), exit_failure);
  }
}

int main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
  RunConfig config;
  try
  {
    config = parse_arguments(args);
  }
  catch (const HelpRequested &h)
  {
    out << h.what();
    return exit_ok;
  }
  catch (const ConfigError &e)
  {
    err << dump(error_json("config", e.what(), exit_config));
    return exit_config;
  }
  return run(config, out, err);
}

}  // namespace quasispec::cli
