// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

#include "quasispec/serialize.hpp"

#include <string>

#include "quasispec/errors.hpp"

namespace quasispec
{

void to_json(json &j, const ModelParams &p)
{
  j = json{{"alpha", p.alpha}, {"mass", p.mass}, {"l", p.l}, {"charge_sign", p.charge_sign}};
}

void from_json(const json &j, ModelParams &p)
{
  j.at("alpha").get_to(p.alpha);
  j.at("mass").get_to(p.mass);
  j.at("l").get_to(p.l);
  j.at("charge_sign").get_to(p.charge_sign);
}

void to_json(json &j, const RadialGrid &g)
{
  j = json{{"r_min", g.r_min}, {"r_max", g.r_max}, {"n_points", g.n_points}, {"spacing", to_string(g.spacing)}};
}

void from_json(const json &j, RadialGrid &g)
{
  j.at("r_min").get_to(g.r_min);
  j.at("r_max").get_to(g.r_max);
  j.at("n_points").get_to(g.n_points);
  g.spacing = grid_spacing_from_string(j.at("spacing").get<std::string>());
}

void to_json(json &j, const EigenResult &s)
{
  j = json{{"binding_energy", s.binding_energy},
           {"e_param", s.e_param},
           {"l", s.l},
           {"n_radial", s.n_radial},
           {"node_count", s.node_count},
           {"norm", s.norm},
           {"converged", s.converged},
           {"iterations", s.iterations},
           {"residual", s.residual},
           {"rescalings", s.rescalings},
           {"grid", s.grid},
           {"r", s.r},
           {"chi", s.chi}};
}

void from_json(const json &j, EigenResult &s)
{
  j.at("binding_energy").get_to(s.binding_energy);
  j.at("e_param").get_to(s.e_param);
  j.at("l").get_to(s.l);
  j.at("n_radial").get_to(s.n_radial);
  j.at("node_count").get_to(s.node_count);
  j.at("norm").get_to(s.norm);
  j.at("converged").get_to(s.converged);
  j.at("iterations").get_to(s.iterations);
  j.at("residual").get_to(s.residual);
  j.at("rescalings").get_to(s.rescalings);
  j.at("grid").get_to(s.grid);
  j.at("r").get_to(s.r);
  j.at("chi").get_to(s.chi);
}

void to_json(json &j, const SelfConsistencyReport &r)
{
  j = json{{"e_param_history", r.e_param_history},
           {"mismatch_history", r.mismatch_history},
           {"bracket", {r.bracket.first, r.bracket.second}}};
}

void from_json(const json &j, SelfConsistencyReport &r)
{
  j.at("e_param_history").get_to(r.e_param_history);
  j.at("mismatch_history").get_to(r.mismatch_history);
  const json &b = j.at("bracket");
  if (!b.is_array() || b.size() != 2)
  {
    throw PreconditionError("SelfConsistencyReport: bracket must be a pair");
  }
  r.bracket = {b[0].get<double>(), b[1].get<double>()};
}

namespace asymptotics
{

void to_json(json &j, const AsymptoticsReport &r)
{
  j = json{{"energy", r.energy},
           {"gamma", r.gamma},
           {"kappa", r.kappa},
           {"nu_squared", r.nu_squared},
           {"branch", to_string(r.branch)},
           {"alpha_threshold", r.alpha_threshold},
           {"r_star", r.r_star ? json(*r.r_star) : json(nullptr)},
           {"mu", r.mu ? json(*r.mu) : json(nullptr)},
           {"r_cut", r.r_cut},
           {"oscillation_reaches_asymptotic_zone", r.oscillation_reaches_asymptotic_zone}};
}

void from_json(const json &j, AsymptoticsReport &r)
{
  j.at("energy").get_to(r.energy);
  j.at("gamma").get_to(r.gamma);
  j.at("kappa").get_to(r.kappa);
  j.at("nu_squared").get_to(r.nu_squared);
  const std::string branch = j.at("branch").get<std::string>();
  if (branch == "A_finite")
  {
    r.branch = Branch::A_finite;
  }
  else if (branch == "B_infinite")
  {
    r.branch = Branch::B_infinite;
  }
  else
  {
    throw PreconditionError("AsymptoticsReport: unknown branch '" + branch + "'");
  }
  j.at("alpha_threshold").get_to(r.alpha_threshold);
  const json &rs = j.at("r_star");
  r.r_star = rs.is_null() ? std::nullopt : std::optional<double>(rs.get<double>());
  const json &mu = j.at("mu");
  r.mu = mu.is_null() ? std::nullopt : std::optional<double>(mu.get<double>());
  j.at("r_cut").get_to(r.r_cut);
  j.at("oscillation_reaches_asymptotic_zone").get_to(r.oscillation_reaches_asymptotic_zone);
}

}  // namespace asymptotics

namespace momentum
{

void to_json(json &j, const CouplingSpectrum &s)
{
  j = json{{"e_param", s.e_param}, {"trial_binding", s.trial_binding}, {"eigen_couplings", s.eigen_couplings}};
}

void from_json(const json &j, CouplingSpectrum &s)
{
  j.at("e_param").get_to(s.e_param);
  j.at("trial_binding").get_to(s.trial_binding);
  j.at("eigen_couplings").get_to(s.eigen_couplings);
}

void to_json(json &j, const MomentumLevel &s)
{
  j = json{{"binding_energy", s.binding_energy},
           {"coupling", s.coupling},
           {"evaluations", s.evaluations},
           {"n_nodes", s.n_nodes}};
}

void from_json(const json &j, MomentumLevel &s)
{
  j.at("binding_energy").get_to(s.binding_energy);
  j.at("coupling").get_to(s.coupling);
  j.at("evaluations").get_to(s.evaluations);
  j.at("n_nodes").get_to(s.n_nodes);
}

}  // namespace momentum

json make_artifact(std::string_view kind, const json &config, const json &result)
{
  return json{{"schema", schema_version}, {"kind", std::string(kind)}, {"config", config}, {"result", result}};
}

const json &artifact_result(const json &artifact, std::string_view expected_kind)
{
  if (!artifact.is_object() || !artifact.contains("schema") || artifact.at("schema") != schema_version)
  {
    throw PreconditionError("artifact: missing or unsupported schema version");
  }
  if (artifact.value("kind", std::string()) != expected_kind)
  {
    throw PreconditionError("artifact: expected kind '" + std::string(expected_kind) + "'");
  }
  return artifact.at("result");
}

std::string dump(const json &j)
{
  return j.dump(2) + "\n";
}

}  // namespace quasispec
