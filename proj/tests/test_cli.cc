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
#include <regex>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "qdist/cli.hpp"
#include "qdist/qubo_io.hpp"
#include "support/oracles.hpp"

using namespace qdist;
using namespace qdist::testing;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string &name) { return std::string(QDIST_DATA_DIR) + "/codes/" + name; }

std::string golden(const std::string &name) {
  std::ifstream in(std::string(QDIST_TEST_DIR) + "/golden/" + name);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Fresh scratch directory per test case.
fs::path scratch(const std::string &name) {
  fs::path dir = fs::temp_directory_path() / ("qdist_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path &path, const std::string &text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const fs::path &path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string mask_last_column(const std::string &csv) {
  std::istringstream in(csv);
  std::string line, result;
  bool header = true;
  while (std::getline(in, line)) {
    if (!header) {
      line = std::regex_replace(line, std::regex(",[^,]*$"), ",*");
    }
    header = false;
    result += line + "\n";
  }
  return result;
}

std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> fields;
  std::stringstream in(line);
  for (std::string field; std::getline(in, field, ',');) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

}  // namespace

TEST_CASE("validate") {
  Run ok = run({"validate", data("pentagon.code")});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("n=5 k=0") != std::string::npos);

  fs::path dir = scratch("validate");
  write_file(dir / "bad.code", "XI\nZI\n");
  Run bad = run({"validate", (dir / "bad.code").string()});
  CHECK(bad.code == 2);
  CHECK(!bad.err.empty());

  write_file(dir / "empty.code", "");
  Run empty = run({"validate", (dir / "empty.code").string()});
  CHECK(empty.code == 2);

  CHECK(run({"validate", (dir / "missing.code").string()}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"no-such-command"}).code == 2);
}

TEST_CASE("distance command") {
  Run r = run({"distance", data("five_qubit.code")});
  REQUIRE(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["d"] == 3);
  CHECK(doc["degeneracy"] == 30);
  Run csv = run({"distance", data("pentagon.code"), "--format", "csv"});
  CHECK(csv.out.rfind("code_id,n,k,d,degeneracy,enumerated\npentagon,5,0,3,10,", 0) == 0);
}

TEST_CASE("qubo command") {
  fs::path dir = scratch("qubo");
  Run one = run({"qubo", data("pentagon.code"), "--out", (dir / "p.qubo").string()});
  REQUIRE(one.code == 0);
  CHECK(fs::exists(dir / "p.qubo"));
  QuboProblem q = import_qubo((dir / "p.qubo").string());
  CHECK(naive_minimum(q).energy == 3);

  Run split = run({"qubo", data("five_qubit.code"), "--mode", "split", "--out", (dir / "f.qubo").string()});
  REQUIRE(split.code == 0);
  CHECK(fs::exists(dir / "f.0.qubo"));
  CHECK(fs::exists(dir / "f.1.qubo"));
  CHECK(!fs::exists(dir / "f.2.qubo"));

  Run structured = run({"qubo", data("pentagon.code"), "--out", (dir / "p.json").string()});
  REQUIRE(structured.code == 0);
  QuboProblem back = qubo_from_json(read_json_file((dir / "p.json").string()));
  CHECK(back == q);

  Run solved = run({"solve", (dir / "p.qubo").string(), "--solver", "exact"});
  REQUIRE(solved.code == 0);
  CHECK(json::parse(solved.out)["result"]["best_energy"] == 3);
}

TEST_CASE("solve command") {
  Run r = run({"solve", data("pentagon.code"), "--solver", "exact"});
  REQUIRE(r.code == 0);
  json rec = json::parse(r.out);
  CHECK(rec["code_id"] == "pentagon");
  CHECK(rec["oracle_d"] == 3);
  CHECK(rec["result"]["distance_bound"] == 3);
  CHECK(rec["ar"] == 1.0);
  CHECK(rec["codeword"]["weight"] == 3);
  CHECK(rec.contains("timing"));

  auto without_timing = [](std::string text) {
    json doc = json::parse(text);
    doc.erase("timing");
    doc["result"].erase("wall_ms");
    return doc;
  };
  std::vector<std::string> sa{"solve", data("steane.code"), "--solver", "sa", "--seed", "17", "--restarts", "3"};
  Run a = run(sa);
  Run b = run(sa);
  REQUIRE(a.code == 0);
  CHECK(without_timing(a.out) == without_timing(b.out));
  std::vector<std::string> threaded = sa;
  threaded.insert(threaded.end(), {"--threads", "3"});
  CHECK(without_timing(run(threaded).out) == without_timing(a.out));

  fs::path dir = scratch("solve");
  Rng rng(101);
  export_qubo(random_qubo(rng, 45, 1.0), (dir / "dense.qubo").string());
  Run guard = run({"solve", (dir / "dense.qubo").string(), "--solver", "exact"});
  CHECK(guard.code == 3);
  CHECK(!guard.err.empty());

  Run csv = run({"solve", data("xx_zz.code"), "--solver", "exact", "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("code_id,mode,solver,seed,best_energy,distance_bound,oracle_d,ar,wall_ms\n", 0) == 0);
}

TEST_CASE("decomposed solve writes a trace") {
  fs::path dir = scratch("trace");
  Run r = run({"solve", data("hexagon.code"), "--solver", "decomposed", "--subproblem-size", "8",
               "--exact-threshold", "8", "--trace", (dir / "trace.jsonl").string()});
  REQUIRE(r.code == 0);
  std::istringstream lines(read_file(dir / "trace.jsonl"));
  std::int64_t previous = std::numeric_limits<std::int64_t>::max();
  std::size_t count = 0;
  for (std::string line; std::getline(lines, line);) {
    json entry = json::parse(line);
    CHECK(entry["energy"].get<std::int64_t>() <= previous);
    previous = entry["energy"];
    ++count;
  }
  CHECK(count >= 1);
}

TEST_CASE("anneal command") {
  fs::path dir = scratch("anneal");
  CHECK(run({"anneal", data("triangle.code"), "--ta-grid", ""}).code == 2);
  CHECK(run({"anneal", data("triangle.code"), "--ta-grid", "5:1:1"}).code == 2);

  write_file(dir / "spin.json", ising_to_json(IsingProblem{1, {-1.0}, {}, 0.0}).dump());
  Run r = run({"anneal", (dir / "spin.json").string(), "--ta-grid", "0.1,1,5,20,50"});
  REQUIRE(r.code == 0);
  std::istringstream table(r.out);
  std::string line;
  std::getline(table, line);
  CHECK(line == std::string(kAnnealHeader));
  double previous = 0.0;
  std::size_t rows = 0;
  while (std::getline(table, line)) {
    std::vector<std::string> fields = split_csv(line);
    REQUIRE(fields.size() == 4);
    double ps = std::stod(fields[1]);
    CHECK(ps >= previous - 1e-9);
    previous = ps;
    ++rows;
  }
  CHECK(rows == 5);
  CHECK(previous >= 0.99);

  Run tri = run({"anneal", data("triangle.code"), "--ta-grid", "10:100:10", "--out",
                 (dir / "tri.csv").string(), "--summary", (dir / "summary.csv").string()});
  REQUIRE(tri.code == 0);
  CHECK(tri.out.rfind("t_a@0.9=", 0) == 0);
  CHECK(tri.out.find("none") == std::string::npos);
  std::string summary = read_file(dir / "summary.csv");
  CHECK(summary.rfind("code_id,spins,degeneracy,ta_at_0_9\ntriangle,", 0) == 0);

  Run gap = run({"anneal", (dir / "spin.json").string(), "--ta-grid", "1", "--gap", "--format", "structured"});
  REQUIRE(gap.code == 0);
  json doc = json::parse(gap.out);
  CHECK(doc["gap"]["gap"].get<double>() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-3));
}

TEST_CASE("bench command") {
  Run r = run({"bench", data("pentagon.code"), data("xx_zz.code"), "--solver", "exact", "--runs", "2"});
  REQUIRE(r.code == 0);
  CHECK(mask_last_column(r.out) == golden("bench_exact.csv"));

  Run one = run({"bench", data("steane.code"), "--solver", "exact", "--runs", "1"});
  REQUIRE(one.code == 0);
  std::istringstream lines(one.out);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  std::vector<std::string> fields = split_csv(row);
  REQUIRE(fields.size() == 9);
  CHECK(fields[7] == "1.000000");

  Run off = run({"bench", data("pentagon.code"), "--solver", "exact", "--oracle", "off"});
  REQUIRE(off.code == 0);
  std::istringstream off_lines(off.out);
  std::getline(off_lines, header);
  std::getline(off_lines, row);
  fields = split_csv(row);
  REQUIRE(fields.size() == 9);
  CHECK(fields[5].empty());
  CHECK(fields[6].empty());
  CHECK(fields[7].empty());

  Run suite = run({"bench", "--suite", "circulant:3-5", "--solver", "sa", "--restarts", "5", "--runs", "2",
                   "--threads", "2"});
  REQUIRE(suite.code == 0);
  CHECK(mask_last_column(suite.out) ==
        mask_last_column(run({"bench", "--suite", "circulant:3-5", "--solver", "sa", "--restarts", "5", "--runs",
                              "2"})
                             .out));
}

TEST_CASE("run log") {
  fs::path dir = scratch("log");
  std::string log = (dir / "runs.jsonl").string();
  REQUIRE(run({"bench", data("xx_zz.code"), "--solver", "exact", "--runs", "3", "--log", log}).code == 0);
  std::istringstream lines(read_file(log));
  std::size_t count = 0;
  for (std::string line; std::getline(lines, line); ++count) {
    json rec = json::parse(line);
    CHECK(rec["code_id"] == "xx_zz");
    CHECK(rec.contains("params"));
  }
  CHECK(count == 3);
}

TEST_CASE("config precedence") {
  fs::path dir = scratch("config");
  write_file(dir / "run.toml", "seed = 5\nsolver = sa\nrestarts = 2\n");
  std::string config = (dir / "run.toml").string();
  json from_config = json::parse(run({"solve", data("xx_zz.code"), "--config", config}).out);
  CHECK(from_config["seed"] == 5);
  CHECK(from_config["solver"] == "sa");
  json flag_wins = json::parse(run({"solve", data("xx_zz.code"), "--config", config, "--seed", "9"}).out);
  CHECK(flag_wins["seed"] == 9);
  CHECK(flag_wins["solver"] == "sa");
}

TEST_CASE("export command") {
  fs::path dir = scratch("export");
  std::string target = (dir / "p.ising.json").string();
  REQUIRE(run({"export", data("pentagon.code"), "--to", "ising", "--out", target}).code == 0);
  IsingProblem ising = ising_from_json(read_json_file(target));
  QuboProblem q = import_qubo(([&] {
    std::string path = (dir / "p.qubo").string();
    REQUIRE(run({"export", data("pentagon.code"), "--to", "qubo", "--out", path}).code == 0);
    return path;
  })());
  CHECK(ising.num_spins == q.num_vars());
}
