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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qdist/errors.hpp"
#include "qdist/qubo_io.hpp"
#include "support/oracles.hpp"

using namespace qdist;
using namespace qdist::testing;

namespace {

QuboProblem round_trip(const QuboProblem &q) {
  std::stringstream s;
  write_qubo(s, q, {"test"});
  return read_qubo(s);
}

std::size_t error_line(const std::string &text) {
  std::istringstream in(text);
  try {
    read_qubo(in);
  } catch (const ParseError &e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("pentagon QUBO survives a text round trip") {
  CodeFile file = parse_code_text("circulant 5\n0 1 0 0 1\n");
  for (BuildMode mode : {BuildMode::penalty, BuildMode::split, BuildMode::selfdual, BuildMode::circulant}) {
    for (const QuboProblem &q : build_distance_qubos(file, mode)) {
      QuboProblem back = round_trip(q);
      CHECK(back == q);
      CHECK(qubo_from_json(qubo_to_json(q)) == q);
    }
  }
}

TEST_CASE("random QUBOs survive both formats") {
  Rng rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    QuboProblem q = random_qubo(rng, 1 + rng() % 12, 0.5, 1000);
    CHECK(round_trip(q) == q);
    CHECK(qubo_from_json(qubo_to_json(q)) == q);
  }
}

TEST_CASE("empty problem gives a header-only file") {
  std::stringstream s;
  write_qubo(s, QuboProblem(0));
  std::string text = s.str();
  CHECK(text.find("p qubo 0 0 0 0") != std::string::npos);
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    CHECK((line.rfind("c ", 0) == 0 || line.rfind("p ", 0) == 0));
  }
  CHECK(round_trip(QuboProblem(0)) == QuboProblem(0));
}

TEST_CASE("malformed QUBO files name the line") {
  CHECK(error_line("p qubo 0 2 1 0\n0 0 1.5\n") == 2);
  CHECK(error_line("p qubo 0 2 1 0\n0 0 x\n") == 2);
  CHECK(error_line("c offset 0\n0 0 1\n") == 2);
  CHECK(error_line("p qubo 0 2 1 1\n0 1 3\n0 0 1\n") == 3);
  CHECK(error_line("p qubo 0 2 0 1\n1 0 3\n") == 2);
  CHECK(error_line("p qubo 0 2 0 2\n0 1 3\n0 1 3\n") == 3);
  CHECK(error_line("p qubo 0 2 0 1\n0 5 3\n") == 2);
  CHECK(error_line("c offset 1.25\np qubo 0 1 0 0\n") == 1);
  CHECK(error_line("p qubo 0 2 2 0\n0 0 1\n") > 0);
  CHECK(error_line("") == 1);
}

TEST_CASE("offset and layout are carried in comments") {
  CodeFile file = parse_code_text("XZZXI\nIXZZX\nXIXZZ\nZXIXZ\n");
  QuboProblem q = build_distance_qubos(file, BuildMode::split)[1];
  std::stringstream s;
  write_qubo(s, q);
  std::string text = s.str();
  CHECK(text.find("c offset " + std::to_string(q.offset())) != std::string::npos);
  CHECK(text.find("c layout " + q.layout().to_spec()) != std::string::npos);
  CHECK(text.find("c fixed 0 0") != std::string::npos);
  CHECK(text.find("c fixed 1 1") != std::string::npos);
}

TEST_CASE("file export and import") {
  auto dir = std::filesystem::temp_directory_path() / "qdist_io_test";
  std::filesystem::create_directories(dir);
  CodeFile file = parse_code_text("circulant 5\n0 1 0 0 1\n");
  QuboProblem q = build_distance_qubos(file, BuildMode::circulant).front();
  export_qubo(q, (dir / "p.qubo").string(), {"pentagon"});
  CHECK(import_qubo((dir / "p.qubo").string()) == q);
  std::ofstream((dir / "p.json").string()) << qubo_to_json(q, {{"code_id", "pentagon"}}).dump();
  CHECK(import_qubo((dir / "p.json").string()) == q);
  CHECK_THROWS_AS(import_qubo((dir / "missing.qubo").string()), InputError);
}

TEST_CASE("Ising documents round trip") {
  Rng rng(52);
  IsingProblem ising = to_ising(random_qubo(rng, 6, 0.6));
  IsingProblem back = ising_from_json(ising_to_json(ising));
  CHECK(back.num_spins == ising.num_spins);
  CHECK(back.h == ising.h);
  CHECK(back.j == ising.j);
  CHECK(back.offset == ising.offset);
  CHECK_THROWS_AS(ising_from_json(nlohmann::json{{"format", "other"}}), InputError);
}
