// Copyright (c) 2026 The quasispec authors.
// SPDX-License-Identifier: Apache-2.0

/** \file serialize.hpp
 *
 *  \brief JSON mapping of the result types.
 *
 *  Every artifact written by the command-line tool has the shape
 *
 *      { "schema": 1, "kind": "...", "config": {...}, "result": {...} }
 *
 *  and each "result" re-parses into the type that produced it. Doubles are written with
 *  enough digits to round-trip exactly.
 */

#ifndef QUASISPEC_SERIALIZE_HPP
#define QUASISPEC_SERIALIZE_HPP

#include <string>
#include <string_view>

#include <json.hpp>

#include "quasispec/asymptotics.hpp"
#include "quasispec/model.hpp"
#include "quasispec/momentum_solver.hpp"
#include "quasispec/radial_grid.hpp"
#include "quasispec/radial_solver.hpp"

namespace quasispec
{

using json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

void to_json(json &j, const ModelParams &p);
void from_json(const json &j, ModelParams &p);

void to_json(json &j, const RadialGrid &g);
void from_json(const json &j, RadialGrid &g);

void to_json(json &j, const EigenResult &s);
void from_json(const json &j, EigenResult &s);

void to_json(json &j, const SelfConsistencyReport &r);
void from_json(const json &j, SelfConsistencyReport &r);

namespace asymptotics
{
void to_json(json &j, const AsymptoticsReport &r);
void from_json(const json &j, AsymptoticsReport &r);
}  // namespace asymptotics

namespace momentum
{
void to_json(json &j, const CouplingSpectrum &s);
void from_json(const json &j, CouplingSpectrum &s);

void to_json(json &j, const MomentumLevel &s);
void from_json(const json &j, MomentumLevel &s);
}  // namespace momentum

/// Wraps a result in the versioned artifact envelope shown above.
json make_artifact(std::string_view kind, const json &config, const json &result);

/// Checks schema version and kind; returns the "result" member. Throws PreconditionError.
const json &artifact_result(const json &artifact, std::string_view expected_kind);

/// Indented, newline-terminated text form used for every JSON file.
std::string dump(const json &j);

}  // namespace quasispec

#endif
