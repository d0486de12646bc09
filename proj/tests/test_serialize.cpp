// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "quasispec/errors.hpp"
#include "quasispec/serialize.hpp"

using namespace quasispec;

namespace
{

/// Round trip through the text form, as a file would.
template <class T>
T through_text(const T &value)
{
  const json j = value;
  return json::parse(dump(j)).get<T>();
}

}  // namespace

TEST_SUITE("serialize")
{
  TEST_CASE("model parameters round-trip")
  {
    ModelParams p;
    p.alpha = 1.0 / 137.035999;
    p.mass = 0.511;
    p.l = 2;
    p.charge_sign = -1;
    const ModelParams back = through_text(p);
    CHECK(back.alpha == p.alpha);
    CHECK(back.mass == p.mass);
    CHECK(back.l == p.l);
    CHECK(back.charge_sign == p.charge_sign);
  }

  TEST_CASE("grid round-trips including spacing")
  {
    RadialGrid g;
    g.r_min = 3.3e-7;
    g.r_max = 1234.5;
    g.n_points = 777;
    g.spacing = GridSpacing::uniform;
    CHECK(through_text(g) == g);
    const json j = g;
    CHECK(j.at("spacing") == "uniform");
  }

  TEST_CASE("eigen results round-trip bit for bit")
  {
    EigenResult s;
    s.binding_energy = 0.015105923056312345;
    s.e_param = 0.0151;
    s.l = 1;
    s.n_radial = 2;
    s.node_count = 2;
    s.grid.n_points = 100;
    s.r = {0.1, 0.2, 0.3};
    s.chi = {1.0 / 3.0, -2.0 / 7.0, 1e-300};
    s.norm = 1.0 - 1e-12;
    s.converged = true;
    s.iterations = 47;
    s.residual = 3.1e-9;
    s.rescalings = 4;
    const EigenResult back = through_text(s);
    CHECK(back.binding_energy == s.binding_energy);
    CHECK(back.e_param == s.e_param);
    CHECK(back.l == s.l);
    CHECK(back.n_radial == s.n_radial);
    CHECK(back.node_count == s.node_count);
    CHECK(back.grid == s.grid);
    CHECK(back.r == s.r);
    CHECK(back.chi == s.chi);
    CHECK(back.norm == s.norm);
    CHECK(back.converged == s.converged);
    CHECK(back.iterations == s.iterations);
    CHECK(back.residual == s.residual);
    CHECK(back.rescalings == s.rescalings);
  }

  TEST_CASE("self-consistency report round-trips with its bracket")
  {
    SelfConsistencyReport r;
    r.e_param_history = {0.01, 0.02, 0.015};
    r.mismatch_history = {-0.001, 0.002, 1e-13};
    r.bracket = {0.01, 0.02};
    const json j = r;
    CHECK(j.at("bracket").is_array());
    CHECK(j.at("bracket").size() == 2);
    const SelfConsistencyReport back = through_text(r);
    CHECK(back.e_param_history == r.e_param_history);
    CHECK(back.mismatch_history == r.mismatch_history);
    CHECK(back.bracket == r.bracket);

    json bad = j;
    bad["bracket"] = json::array({1.0});
    CHECK_THROWS_AS(bad.get<SelfConsistencyReport>(), PreconditionError);
  }

  TEST_CASE("asymptotics report round-trips on both branches")
  {
    asymptotics::AsymptoticsReport a;
    a.energy = 1.0;
    a.gamma = 0.1;
    a.kappa = 1.0;
    a.nu_squared = 0.15;
    a.branch = asymptotics::Branch::A_finite;
    a.alpha_threshold = 0.39;
    const json ja = a;
    CHECK(ja.at("branch") == "A_finite");
    CHECK(ja.at("r_star").is_null());
    CHECK(ja.at("mu").is_null());
    const auto back_a = through_text(a);
    CHECK(back_a.branch == a.branch);
    CHECK(!back_a.r_star.has_value());
    CHECK(!back_a.mu.has_value());
    CHECK(back_a.gamma == a.gamma);

    asymptotics::AsymptoticsReport b = a;
    b.branch = asymptotics::Branch::B_infinite;
    b.r_star = 12.5;
    b.mu = 9.3;
    b.r_cut = 20.0;
    b.oscillation_reaches_asymptotic_zone = true;
    const json jb = b;
    CHECK(jb.at("branch") == "B_infinite");
    const auto back_b = through_text(b);
    CHECK(back_b.branch == b.branch);
    CHECK(back_b.r_star == b.r_star);
    CHECK(back_b.mu == b.mu);
    CHECK(back_b.r_cut == b.r_cut);
    CHECK(back_b.oscillation_reaches_asymptotic_zone);

    json bad = jb;
    bad["branch"] = "C";
    CHECK_THROWS_AS(bad.get<asymptotics::AsymptoticsReport>(), PreconditionError);
  }

  TEST_CASE("momentum results round-trip")
  {
    momentum::CouplingSpectrum s;
    s.e_param = 0.02;
    s.trial_binding = 0.03;
    s.eigen_couplings = {0.3, 0.6, 0.9000000000000001};
    const auto back = through_text(s);
    CHECK(back.e_param == s.e_param);
    CHECK(back.trial_binding == s.trial_binding);
    CHECK(back.eigen_couplings == s.eigen_couplings);

    momentum::MomentumLevel level;
    level.binding_energy = 0.0151059240685;
    level.coupling = 0.3;
    level.evaluations = 17;
    level.n_nodes = 200;
    const auto lb = through_text(level);
    CHECK(lb.binding_energy == level.binding_energy);
    CHECK(lb.coupling == level.coupling);
    CHECK(lb.evaluations == level.evaluations);
    CHECK(lb.n_nodes == level.n_nodes);
  }

  TEST_CASE("artifacts carry schema, kind, config and result")
  {
    const json config = {{"alpha", 0.3}};
    const json result = {{"value", 1.5}};
    const json artifact = make_artifact("demo", config, result);
    CHECK(artifact.at("schema") == schema_version);
    CHECK(artifact.at("kind") == "demo");
    CHECK(artifact.at("config") == config);
    CHECK(artifact_result(artifact, "demo") == result);
    // Keys keep their insertion order.
    auto it = artifact.begin();
    CHECK(it.key() == "schema");
    ++it;
    CHECK(it.key() == "kind");

    CHECK_THROWS_AS(artifact_result(artifact, "other"), PreconditionError);
    json wrong = artifact;
    wrong["schema"] = schema_version + 1;
    CHECK_THROWS_AS(artifact_result(wrong, "demo"), PreconditionError);
    json missing = artifact;
    missing.erase("schema");
    CHECK_THROWS_AS(artifact_result(missing, "demo"), PreconditionError);
  }

  TEST_CASE("dump is indented and newline-terminated")
  {
    const std::string text = dump(json{{"a", 1}});
    CHECK(text == "{\n  \"a\": 1\n}\n");
  }
}
