// Copyright 2026 The qdist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "qdist/qubo.hpp"

namespace qdist {

/// Writes the qbsolv-style text format:
///
///   c offset <integer>
///   c layout <layout spec>
///   c fixed <index> <value>          (one per clamped variable)
///   c <comment>                      (caller-supplied provenance)
///   p qubo 0 <numVars> <nDiagonals> <nOffDiagonals>
///   i i <value>                      (nonzero linear terms)
///   i j <value>                      (i < j)
void write_qubo(std::ostream &out, const QuboProblem &q, const std::vector<std::string> &comments = {});

/// Reads the format above. Throws ParseError with a line number.
QuboProblem read_qubo(std::istream &in);

void export_qubo(const QuboProblem &q, const std::string &path, const std::vector<std::string> &comments = {});
/// Reads a text QUBO, or a structured document when `path` ends in ".json".
QuboProblem import_qubo(const std::string &path);

nlohmann::json qubo_to_json(const QuboProblem &q, const nlohmann::json &provenance = nlohmann::json::object());
QuboProblem qubo_from_json(const nlohmann::json &doc);

nlohmann::json ising_to_json(const IsingProblem &ising, const nlohmann::json &provenance = nlohmann::json::object());
IsingProblem ising_from_json(const nlohmann::json &doc);

nlohmann::json read_json_file(const std::string &path);

}  // namespace qdist
