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

#include "qdist/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdist/annealsim.hpp"
#include "qdist/distance.hpp"
#include "qdist/errors.hpp"
#include "qdist/qubo.hpp"
#include "qdist/qubo_io.hpp"
#include "qdist/solvers.hpp"

namespace qdist {

namespace {

using nlohmann::json;

struct Options {
  std::vector<std::string> inputs;

  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::optional<double> time_budget_ms;
  std::string format;
  std::string log_path;

  std::string mode;
  bool paper_layout = false;
  std::string out;
  std::string oracle = "auto";

  std::string solver = "exact";
  std::size_t sweeps = 0;
  std::size_t restarts = 1;
  std::optional<double> initial_temperature;
  double cooling = 0.97;
  double final_temperature = 1e-2;
  std::size_t subproblem_size = 20;
  std::string inner = "exact";
  std::size_t exact_threshold = 20;
  std::size_t rounds = 200;
  std::size_t patience = 20;
  std::size_t tabu_tenure = 3;
  double random_fraction = 0.25;
  std::size_t inner_restarts = 4;
  std::string trace_path;

  std::string ta_grid;
  std::string schedule_path;
  std::size_t steps = 0;
  std::string summary_path;
  bool gap = false;
  double gap_step = 0.01;

  std::size_t runs = 1;
  std::string suite;

  std::string to = "qubo-json";
};

enum class InputKind { code, qubo, ising };

struct Input {
  InputKind kind = InputKind::code;
  std::string id;
  std::optional<CodeFile> code;
  std::optional<QuboProblem> qubo;
  std::optional<IsingProblem> ising;
};

template <class F>
void parallel_for(std::size_t count, std::size_t threads, F &&fn) {
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto &e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

std::string fixed(double value, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << value;
  return s.str();
}

std::string bits(std::span<const std::uint8_t> z) {
  std::string s;
  s.reserve(z.size());
  for (std::uint8_t b : z) {
    s.push_back(b ? '1' : '0');
  }
  return s;
}

std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

double to_ms(std::chrono::nanoseconds d) { return std::chrono::duration<double, std::milli>(d).count(); }

std::string extension(const std::string &path) { return std::filesystem::path(path).extension().string(); }

Input load_input(const std::string &path, std::ostream &err) {
  Input input;
  input.id = std::filesystem::path(path).stem().string();
  const std::string ext = extension(path);
  if (ext == ".qubo") {
    input.kind = InputKind::qubo;
    input.qubo = import_qubo(path);
  } else if (ext == ".json") {
    json doc = read_json_file(path);
    std::string format = doc.is_object() ? doc.value("format", "") : "";
    if (format == "qdist.qubo.v1") {
      input.kind = InputKind::qubo;
      input.qubo = qubo_from_json(doc);
    } else if (format == "qdist.ising.v1") {
      input.kind = InputKind::ising;
      input.ising = ising_from_json(doc);
    } else {
      throw InputError(path + ": unknown structured document format \"" + format + "\"");
    }
  } else {
    input.code = load_code_file(path);
    for (const std::string &w : input.code->warnings) {
      err << "warning: " << input.id << ": " << w << "\n";
    }
  }
  return input;
}

BuildMode mode_for(const CodeFile &file, const Options &o) {
  return o.mode.empty() ? default_build_mode(file) : parse_build_mode(o.mode);
}

WidthMode widths(const Options &o) { return o.paper_layout ? WidthMode::paper : WidthMode::tight; }

/// Path of instance i when a build yields several instances: "out.qubo"
/// becomes "out.0.qubo", "out.1.qubo", ...
std::string instance_path(const std::string &out, std::size_t i, std::size_t count) {
  if (count == 1) {
    return out;
  }
  std::filesystem::path p(out);
  std::filesystem::path name = p.stem();
  name += "." + std::to_string(i) + p.extension().string();
  return (p.parent_path() / name).string();
}

void write_text_file(const std::string &path, const std::string &content) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw InputError("cannot write " + path);
  }
  file << content;
}

void append_log(const Options &o, const json &record) {
  if (o.log_path.empty()) {
    return;
  }
  std::ofstream log(o.log_path, std::ios::app);
  if (!log) {
    throw InputError("cannot open results log " + o.log_path);
  }
  log << record.dump() << "\n";
}

std::optional<DistanceReport> oracle_for(const CodeFile &file, const std::string &policy) {
  if (policy == "off") {
    return std::nullopt;
  }
  if (policy == "auto" && file.code.n() + file.code.k() > kMaxBruteForceDimension) {
    return std::nullopt;
  }
  return min_distance_bruteforce(file.code);
}

SaParams sa_params(const Options &o, std::uint64_t seed, std::size_t threads) {
  SaParams p;
  p.sweeps = o.sweeps;
  p.restarts = o.restarts;
  p.initial_temperature = o.initial_temperature;
  p.cooling = o.cooling;
  p.final_temperature = o.final_temperature;
  p.seed = seed;
  p.threads = threads;
  return p;
}

SolveResult run_solver(const QuboProblem &q, const Options &o, std::uint64_t seed, std::size_t threads) {
  if (o.solver == "exact") {
    SolveResult r = solve_exact(q);
    r.seed = seed;
    return r;
  }
  if (o.solver == "sa") {
    return solve_sa(q, sa_params(o, seed, threads));
  }
  DecomposeParams p;
  p.subproblem_size = o.subproblem_size;
  p.inner = o.inner == "sa" ? InnerSolver::sa : InnerSolver::exact;
  p.exact_threshold = o.exact_threshold;
  p.rounds = o.rounds;
  p.patience = o.patience;
  p.tabu_tenure = o.tabu_tenure;
  p.random_fraction = o.random_fraction;
  p.inner_sa = sa_params(o, seed, 1);
  p.inner_sa.restarts = o.inner_restarts;
  if (o.time_budget_ms) {
    p.time_budget = std::chrono::milliseconds(static_cast<std::int64_t>(*o.time_budget_ms));
  }
  p.seed = seed;
  return solve_decomposed(q, p);
}

struct InstanceSolve {
  SolveResult best;
  std::size_t best_instance = 0;
  std::size_t instances = 0;
  std::chrono::nanoseconds wall{0};
  std::vector<SolveResult> all;
};

InstanceSolve solve_instances(const std::vector<QuboProblem> &qs, const Options &o, std::uint64_t seed,
                              std::size_t threads) {
  InstanceSolve out;
  out.instances = qs.size();
  for (std::size_t i = 0; i < qs.size(); ++i) {
    std::uint64_t s = qs.size() == 1 ? seed : derive_seed(seed, i);
    SolveResult r = run_solver(qs[i], o, s, threads);
    out.wall += r.wall_time;
    if (i == 0 || r.best_energy < out.best.best_energy) {
      out.best = r;
      out.best_instance = i;
    }
    out.all.push_back(std::move(r));
  }
  return out;
}

json run_record(const Input &input, const std::vector<QuboProblem> &qs, const InstanceSolve &solved,
                const Options &o, std::uint64_t seed, const std::optional<DistanceReport> &oracle) {
  const SolveResult &r = solved.best;
  const QuboProblem &q = qs[solved.best_instance];
  json record;
  record["code_id"] = input.id;
  record["mode"] = input.code ? std::string(to_string(mode_for(*input.code, o))) : "qubo";
  record["solver"] = r.solver;
  record["params"] = r.params;
  record["seed"] = seed;
  record["instances"] = solved.instances;
  record["best_instance"] = solved.best_instance;
  BitVector full = q.lift(r.best_assignment);
  json instance_energies = json::array();
  for (const SolveResult &each : solved.all) {
    instance_energies.push_back(each.best_energy);
  }
  record["result"] = {{"best_energy", r.best_energy},
                      {"distance_bound", r.distance_bound},
                      {"best_assignment", bits(full)},
                      {"evaluations", r.evaluations},
                      {"restarts_used", r.restarts_used},
                      {"restart_energies", r.restart_energies},
                      {"instance_energies", instance_energies}};
  record["codeword"] = nullptr;
  if (input.code) {
    const StabilizerCode &code = input.code->code;
    if (auto w = decoded_weight(code, q, r.best_assignment)) {
      BitVector c = matvec_mod2(code.normalizer(), x_assignment(q, r.best_assignment));
      record["codeword"] = {{"pauli", to_pauli_string(c)}, {"weight", *w}};
    }
  }
  record["oracle_d"] = nullptr;
  record["ar"] = nullptr;
  if (oracle) {
    const auto d = static_cast<std::int64_t>(oracle->d);
    if (r.distance_bound < d) {
      throw InvariantError("solver reported a bound below the brute-force distance");
    }
    record["oracle_d"] = d;
    record["ar"] = approximation_ratio(r.distance_bound, d);
  }
  record["timing"] = {{"timestamp", utc_timestamp()}, {"wall_ms", to_ms(solved.wall)}};
  return record;
}

std::vector<QuboProblem> input_qubos(const Input &input, const Options &o) {
  if (input.code) {
    return build_distance_qubos(*input.code, mode_for(*input.code, o), widths(o));
  }
  if (input.qubo) {
    return {*input.qubo};
  }
  throw InputError(input.id + ": an Ising document cannot be solved as a QUBO; give the code or QUBO file");
}

std::string need_one_input(const Options &o, const char *command) {
  if (o.inputs.size() != 1) {
    throw InputError(std::string(command) + " takes exactly one input file");
  }
  return o.inputs.front();
}

int cmd_validate(const Options &o, std::ostream &out, std::ostream &err) {
  const std::string path = need_one_input(o, "validate");
  Input input = load_input(path, err);
  if (!input.code) {
    throw InputError(path + " is not a code file");
  }
  const StabilizerCode &code = input.code->code;
  const std::size_t r = rank(code.stabilizers());
  if (o.format == "structured") {
    out << json{{"code_id", input.id},
                {"n", code.n()},
                {"k", code.k()},
                {"rank", r},
                {"commuting", true},
                {"normalizer_rank", rank(code.normalizer())},
                {"warnings", input.code->warnings}}
               .dump(2)
        << "\n";
  } else if (o.format == "csv") {
    out << "code_id,n,k,rank\n" << input.id << "," << code.n() << "," << code.k() << "," << r << "\n";
  } else {
    out << input.id << ": n=" << code.n() << " k=" << code.k() << " rank(H)=" << r
        << " generators commute\n";
  }
  return kExitOk;
}

int cmd_distance(const Options &o, std::ostream &out, std::ostream &err) {
  const std::string path = need_one_input(o, "distance");
  Input input = load_input(path, err);
  if (!input.code) {
    throw InputError(path + " is not a code file");
  }
  const StabilizerCode &code = input.code->code;
  DistanceReport report = min_distance_bruteforce(code);
  if (o.format == "csv") {
    out << "code_id,n,k,d,degeneracy,enumerated\n"
        << input.id << "," << code.n() << "," << code.k() << "," << report.d << "," << report.minimizers.size()
        << "," << report.enumerated << "\n";
    return kExitOk;
  }
  json minimizers = json::array();
  for (const BitVector &c : report.minimizers) {
    minimizers.push_back(to_pauli_string(c));
  }
  out << json{{"code_id", input.id},       {"n", code.n()},
              {"k", code.k()},             {"d", report.d},
              {"degeneracy", report.minimizers.size()}, {"enumerated", report.enumerated},
              {"minimizers", minimizers}}
             .dump(2)
      << "\n";
  return kExitOk;
}

std::vector<std::string> provenance_comments(const Input &input, const Options &o, std::size_t i,
                                             std::size_t count) {
  std::vector<std::string> comments{"code " + input.id};
  if (input.code) {
    comments.push_back("mode " + std::string(to_string(mode_for(*input.code, o))));
    comments.push_back(std::string("widths ") + (o.paper_layout ? "paper" : "tight"));
  }
  comments.push_back("instance " + std::to_string(i) + " of " + std::to_string(count));
  return comments;
}

json provenance_json(const Input &input, const Options &o, std::size_t i, std::size_t count) {
  json p{{"code_id", input.id}, {"instance", i}, {"instances", count}};
  if (input.code) {
    p["mode"] = to_string(mode_for(*input.code, o));
    p["widths"] = o.paper_layout ? "paper" : "tight";
  }
  return p;
}

int cmd_qubo(const Options &o, std::ostream &out, std::ostream &err) {
  const std::string path = need_one_input(o, "qubo");
  Input input = load_input(path, err);
  if (!input.code) {
    throw InputError(path + " is not a code file");
  }
  std::vector<QuboProblem> qs = input_qubos(input, o);
  if (o.out.empty()) {
    if (qs.size() != 1) {
      throw InputError("this mode yields " + std::to_string(qs.size()) + " instances; give --out");
    }
    write_qubo(out, qs[0], provenance_comments(input, o, 0, 1));
    return kExitOk;
  }
  for (std::size_t i = 0; i < qs.size(); ++i) {
    std::string target = instance_path(o.out, i, qs.size());
    if (extension(target) == ".json") {
      write_text_file(target, qubo_to_json(qs[i], provenance_json(input, o, i, qs.size())).dump(2) + "\n");
    } else {
      export_qubo(qs[i], target, provenance_comments(input, o, i, qs.size()));
    }
    out << target << " vars=" << qs[i].num_vars() << " fixed=" << qs[i].fixed().size() << "\n";
  }
  return kExitOk;
}

int cmd_export(const Options &o, std::ostream &out, std::ostream &err) {
  const std::string path = need_one_input(o, "export");
  Input input = load_input(path, err);
  std::vector<json> docs;
  std::vector<QuboProblem> qs;
  if (input.ising) {
    if (o.to != "ising") {
      throw InputError("an Ising document can only be exported with --to ising");
    }
    docs.push_back(ising_to_json(*input.ising, {{"code_id", input.id}}));
  } else {
    qs = input_qubos(input, o);
    for (std::size_t i = 0; i < qs.size(); ++i) {
      json prov = provenance_json(input, o, i, qs.size());
      if (o.to == "ising") {
        docs.push_back(ising_to_json(to_ising(qs[i]), prov));
      } else {
        docs.push_back(qubo_to_json(qs[i], prov));
      }
    }
  }
  if (o.to == "qubo") {
    if (qs.empty()) {
      throw InputError("nothing to export as a QUBO text file");
    }
    if (o.out.empty()) {
      for (std::size_t i = 0; i < qs.size(); ++i) {
        write_qubo(out, qs[i], provenance_comments(input, o, i, qs.size()));
      }
      return kExitOk;
    }
    for (std::size_t i = 0; i < qs.size(); ++i) {
      std::string target = instance_path(o.out, i, qs.size());
      export_qubo(qs[i], target, provenance_comments(input, o, i, qs.size()));
      out << target << "\n";
    }
    return kExitOk;
  }
  if (o.out.empty()) {
    out << (docs.size() == 1 ? docs[0] : json(docs)).dump(2) << "\n";
    return kExitOk;
  }
  for (std::size_t i = 0; i < docs.size(); ++i) {
    std::string target = instance_path(o.out, i, docs.size());
    write_text_file(target, docs[i].dump(2) + "\n");
    out << target << "\n";
  }
  return kExitOk;
}

int cmd_solve(const Options &o, std::ostream &out, std::ostream &err) {
  const std::string path = need_one_input(o, "solve");
  Input input = load_input(path, err);
  std::vector<QuboProblem> qs = input_qubos(input, o);
  std::optional<DistanceReport> oracle;
  if (input.code) {
    oracle = oracle_for(*input.code, o.oracle);
  }
  InstanceSolve solved = solve_instances(qs, o, o.seed, o.threads);
  json record = run_record(input, qs, solved, o, o.seed, oracle);
  append_log(o, record);
  if (!o.trace_path.empty()) {
    std::ofstream trace(o.trace_path);
    if (!trace) {
      throw InputError("cannot write " + o.trace_path);
    }
    for (std::size_t i = 0; i < solved.all.size(); ++i) {
      for (const TraceEntry &t : solved.all[i].trace) {
        trace << json{{"instance", i}, {"round", t.round}, {"energy", t.energy}, {"accepted", t.accepted}}.dump()
              << "\n";
      }
    }
  }
  if (o.format == "csv") {
    out << "code_id,mode,solver,seed,best_energy,distance_bound,oracle_d,ar,wall_ms\n";
    out << record["code_id"].get<std::string>() << "," << record["mode"].get<std::string>() << ","
        << record["solver"].get<std::string>() << "," << o.seed << "," << solved.best.best_energy << ","
        << solved.best.distance_bound << ",";
    if (oracle) {
      out << oracle->d << "," << fixed(record["ar"].get<double>(), 6);
    } else {
      out << ",";
    }
    out << "," << fixed(to_ms(solved.wall), 3) << "\n";
  } else {
    out << record.dump(2) << "\n";
  }
  return kExitOk;
}

std::vector<double> parse_grid(const std::string &text) {
  std::vector<double> grid;
  auto number = [](const std::string &token) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != token.size()) {
      throw InputError("bad number in --ta-grid: \"" + token + "\"");
    }
    return v;
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream s(text);
    for (std::string part; std::getline(s, part, ':');) {
      parts.push_back(part);
    }
    if (parts.size() != 3) {
      throw InputError("--ta-grid range must be start:stop:step");
    }
    double start = number(parts[0]), stop = number(parts[1]), step = number(parts[2]);
    if (!(step > 0.0) || stop < start) {
      throw InputError("--ta-grid range needs step > 0 and stop >= start");
    }
    auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
      grid.push_back(start + static_cast<double>(i) * step);
    }
  } else {
    std::stringstream s(text);
    for (std::string token; std::getline(s, token, ',');) {
      if (!token.empty()) {
        grid.push_back(number(token));
      }
    }
  }
  if (grid.empty()) {
    throw InputError("--ta-grid is empty");
  }
  for (double t : grid) {
    if (!(t > 0.0)) {
      throw InputError("annealing times must be positive");
    }
  }
  return grid;
}

int cmd_anneal(const Options &o, std::ostream &out, std::ostream &err) {
  const std::string path = need_one_input(o, "anneal");
  const std::vector<double> grid = parse_grid(o.ta_grid);
  Input input = load_input(path, err);
  IsingProblem ising;
  if (input.ising) {
    ising = *input.ising;
  } else {
    std::vector<QuboProblem> qs = input_qubos(input, o);
    if (qs.size() != 1) {
      throw InputError("anneal needs a single QUBO instance; this mode yields " + std::to_string(qs.size()));
    }
    ising = to_ising(qs[0]);
  }
  AnnealSchedule schedule = o.schedule_path.empty() ? AnnealSchedule::linear() : load_schedule(o.schedule_path);
  const std::size_t degeneracy = ground_space(ising).states.size();

  std::vector<SimResult> results(grid.size());
  parallel_for(grid.size(), o.threads, [&](std::size_t i) {
    SimParams p;
    p.anneal_time = grid[i];
    p.steps = o.steps;
    results[i] = evolve(ising, schedule, p);
  });
  std::optional<double> ta_09;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (results[i].success_probability >= 0.9 && (!ta_09 || grid[i] < *ta_09)) {
      ta_09 = grid[i];
    }
  }

  std::ostringstream table;
  table << kAnnealHeader << "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    table << fixed(grid[i], 6) << "," << fixed(results[i].success_probability, 10) << "," << results[i].steps
          << "," << std::scientific << std::setprecision(3) << results[i].max_drift << std::defaultfloat << "\n";
  }
  const std::string ta_text = ta_09 ? fixed(*ta_09, 6) : "";
  if (!o.summary_path.empty()) {
    write_text_file(o.summary_path, "code_id,spins,degeneracy,ta_at_0_9\n" + input.id + "," +
                                        std::to_string(ising.num_spins) + "," + std::to_string(degeneracy) + "," +
                                        ta_text + "\n");
  }

  if (o.format == "structured") {
    json rows = json::array();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      rows.push_back({{"t_a", grid[i]},
                      {"p_s", results[i].success_probability},
                      {"steps", results[i].steps},
                      {"max_drift", results[i].max_drift},
                      {"renormalizations", results[i].renormalizations}});
    }
    json doc{{"code_id", input.id},
             {"spins", ising.num_spins},
             {"degeneracy", degeneracy},
             {"rows", rows},
             {"ta_at_0_9", ta_09 ? json(*ta_09) : json()}};
    if (o.gap) {
      GapScan scan = gap_scan(ising, schedule, o.gap_step);
      AdiabaticEstimate estimate = adiabatic_time_estimate(ising, schedule, o.gap_step);
      json curve = json::array();
      for (const GapPoint &p : scan.curve) {
        curve.push_back({{"gamma", p.gamma}, {"e0", p.e0}, {"e1", p.e1}, {"ed", p.ed}});
      }
      doc["gap"] = {{"naive_gap", scan.naive_gap}, {"naive_gamma", scan.naive_gamma},
                    {"gap", scan.gap},             {"gamma_star", scan.gamma_star},
                    {"curve", curve},              {"matrix_element", estimate.matrix_element},
                    {"time_estimate", estimate.time}};
    }
    if (!o.out.empty()) {
      write_text_file(o.out, table.str());
    }
    out << doc.dump(2) << "\n";
    return kExitOk;
  }
  if (o.out.empty()) {
    out << table.str();
  } else {
    write_text_file(o.out, table.str());
    out << "t_a@0.9=" << (ta_09 ? ta_text : "none") << "\n";
  }
  return kExitOk;
}

std::size_t parse_count(const std::string &text, const std::string &spec) {
  std::size_t used = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(text, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw InputError("bad suite spec \"" + spec + "\"");
  }
  return value;
}

struct BenchRun {
  SolveResult best;
  json record;
};

int cmd_bench(const Options &o, std::ostream &out, std::ostream &err) {
  std::vector<Input> inputs;
  for (const std::string &path : o.inputs) {
    Input input = load_input(path, err);
    if (!input.code) {
      throw InputError(path + ": bench takes code files");
    }
    inputs.push_back(std::move(input));
  }
  if (!o.suite.empty()) {
    for (CodeFile &file : suite_codes(o.suite)) {
      Input input;
      input.id = file.id;
      input.code = std::move(file);
      inputs.push_back(std::move(input));
    }
  }
  if (inputs.empty()) {
    throw InputError("bench needs code files or --suite");
  }
  if (o.runs == 0) {
    throw InputError("--runs must be at least 1");
  }
  std::vector<std::vector<QuboProblem>> problems;
  std::vector<std::optional<DistanceReport>> oracles;
  for (const Input &input : inputs) {
    problems.push_back(input_qubos(input, o));
    oracles.push_back(oracle_for(*input.code, o.oracle));
  }

  const std::size_t tasks = inputs.size() * o.runs;
  std::vector<InstanceSolve> solved(tasks);
  parallel_for(tasks, o.threads, [&](std::size_t t) {
    std::size_t c = t / o.runs, run = t % o.runs;
    solved[t] = solve_instances(problems[c], o, derive_seed(o.seed, run), 1);
  });

  std::ostringstream table;
  table << kBenchHeader << "\n";
  json rows = json::array();
  for (std::size_t c = 0; c < inputs.size(); ++c) {
    std::int64_t best = 0;
    std::chrono::nanoseconds wall{0};
    std::vector<SolveResult> bests;
    for (std::size_t run = 0; run < o.runs; ++run) {
      const InstanceSolve &s = solved[c * o.runs + run];
      best = run == 0 ? s.best.distance_bound : std::min(best, s.best.distance_bound);
      wall += s.wall;
      bests.push_back(s.best);
      append_log(o, run_record(inputs[c], problems[c], s, o, derive_seed(o.seed, run), oracles[c]));
    }
    const StabilizerCode &code = inputs[c].code->code;
    std::string solver = bests.front().solver;
    json row{{"n", code.n()}, {"code_id", inputs[c].id}, {"solver", solver}, {"runs", o.runs},
             {"best_energy", best}, {"oracle_d", nullptr}, {"ar", nullptr}, {"success_rate", nullptr},
             {"wall_ms", to_ms(wall)}};
    table << code.n() << "," << inputs[c].id << "," << solver << "," << o.runs << "," << best << ",";
    if (oracles[c]) {
      const auto d = static_cast<std::int64_t>(oracles[c]->d);
      double ar = approximation_ratio(best, d);
      double rate = success_rate(bests, d);
      row["oracle_d"] = d;
      row["ar"] = ar;
      row["success_rate"] = rate;
      table << d << "," << fixed(ar, 6) << "," << fixed(rate, 6);
    } else {
      table << ",,";
    }
    table << "," << fixed(to_ms(wall), 3) << "\n";
    rows.push_back(row);
  }
  const std::string rendered = o.format == "structured" ? rows.dump(2) + "\n" : table.str();
  if (o.out.empty()) {
    out << rendered;
  } else {
    write_text_file(o.out, rendered);
  }
  return kExitOk;
}

}  // namespace

std::vector<CodeFile> suite_codes(const std::string &spec) {
  const std::string prefix = "circulant:";
  if (spec.rfind(prefix, 0) != 0) {
    throw InputError("unknown suite \"" + spec + "\"; expected circulant:<lo>-<hi>");
  }
  std::string range = spec.substr(prefix.size());
  std::size_t lo = 0, hi = 0;
  if (auto dash = range.find('-'); dash != std::string::npos) {
    lo = parse_count(range.substr(0, dash), spec);
    hi = parse_count(range.substr(dash + 1), spec);
  } else {
    lo = hi = parse_count(range, spec);
  }
  if (lo < 2 || hi < lo || hi > kMaxBruteForceDimension) {
    throw InputError("suite lengths must satisfy 2 <= lo <= hi <= " + std::to_string(kMaxBruteForceDimension));
  }
  std::vector<CodeFile> codes;
  for (std::size_t n = lo; n <= hi; ++n) {
    CirculantCode c = best_circulant(n);
    std::string id = "circ" + std::to_string(n) + "_";
    for (std::uint8_t b : c.first_row) {
      id.push_back(b ? '1' : '0');
    }
    codes.push_back(code_from_circulant(std::move(c), id));
  }
  return codes;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Minimum distance of binary stabilizer codes through QUBO compilation"};
  app.name("qdist");
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "Flat key = value file (flags take precedence)");
  Options o;

  app.add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app.add_option("--threads", o.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--time-budget", o.time_budget_ms, "Wall-clock budget of the decomposed solver in ms");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "structured"}));
  app.add_option("--log", o.log_path, "Append run records to this line-delimited file");
  app.add_option("--mode", o.mode, "Builder mode")
      ->check(CLI::IsMember({"penalty", "split", "selfdual", "circulant"}));
  app.add_flag("--paper-layout", o.paper_layout, "Uniform auxiliary widths s, s, 2s");
  app.add_option("--out", o.out, "Output file");
  app.add_option("--oracle", o.oracle, "Brute-force distance: auto, on or off")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "on", "off"}));
  app.add_option("--solver", o.solver, "exact, sa or decomposed")
      ->capture_default_str()
      ->check(CLI::IsMember({"exact", "sa", "decomposed"}));
  app.add_option("--sweeps", o.sweeps, "SA sweeps per restart (0: automatic)")->capture_default_str();
  app.add_option("--restarts", o.restarts, "SA restarts")->capture_default_str();
  app.add_option("--initial-temperature", o.initial_temperature, "SA initial temperature (default: tuned)");
  app.add_option("--cooling", o.cooling, "SA geometric cooling factor")->capture_default_str();
  app.add_option("--final-temperature", o.final_temperature, "SA final temperature")->capture_default_str();
  app.add_option("--subproblem-size", o.subproblem_size, "Decomposition subproblem size")->capture_default_str();
  app.add_option("--inner", o.inner, "Decomposition inner solver")
      ->capture_default_str()
      ->check(CLI::IsMember({"exact", "sa"}));
  app.add_option("--exact-threshold", o.exact_threshold, "Largest subproblem solved exactly")
      ->capture_default_str();
  app.add_option("--rounds", o.rounds, "Decomposition rounds")->capture_default_str();
  app.add_option("--patience", o.patience, "Rounds without improvement before stopping")->capture_default_str();
  app.add_option("--tabu-tenure", o.tabu_tenure, "Rounds a changed variable stays out of selection")
      ->capture_default_str();
  app.add_option("--random-fraction", o.random_fraction, "Share of randomly chosen subproblem variables")
      ->capture_default_str();
  app.add_option("--inner-restarts", o.inner_restarts, "SA restarts per subproblem")->capture_default_str();
  app.add_option("--trace", o.trace_path, "Write the decomposition trace as line-delimited records");
  app.add_option("--ta-grid", o.ta_grid, "Annealing times: a,b,c or start:stop:step");
  app.add_option("--schedule", o.schedule_path, "Schedule file with header \"gamma A B\"");
  app.add_option("--steps", o.steps, "RK4 steps (0: automatic)")->capture_default_str();
  app.add_option("--summary", o.summary_path, "Write code_id,spins,degeneracy,ta_at_0_9");
  app.add_flag("--gap", o.gap, "Add the gap scan and adiabatic estimate (structured output)");
  app.add_option("--gap-step", o.gap_step, "Gamma grid step of the gap scan")->capture_default_str();
  app.add_option("--runs", o.runs, "Seeded runs per code")->capture_default_str();
  app.add_option("--suite", o.suite, "Built-in code suite, e.g. circulant:5-16");
  app.add_option("--to", o.to, "Export target")
      ->capture_default_str()
      ->check(CLI::IsMember({"qubo-json", "ising", "qubo"}));

  struct Command {
    const char *name;
    const char *help;
    int (*run)(const Options &, std::ostream &, std::ostream &);
  };
  const Command commands[] = {
      {"validate", "Check a code file", cmd_validate},
      {"qubo", "Build the distance QUBO instances of a code", cmd_qubo},
      {"solve", "Solve a code or QUBO file and print a run record", cmd_solve},
      {"distance", "Brute-force minimum distance", cmd_distance},
      {"anneal", "Simulate annealing over a grid of annealing times", cmd_anneal},
      {"bench", "Seeded runs per code with approximation ratio and success rate", cmd_bench},
      {"export", "Write structured QUBO or Ising documents", cmd_export},
  };
  for (const Command &c : commands) {
    CLI::App *sub = app.add_subcommand(c.name, c.help);
    sub->fallthrough();
    sub->add_option("inputs", o.inputs, "Input files");
  }

  std::vector<const char *> argv{"qdist"};
  for (const std::string &a : args) {
    argv.push_back(a.c_str());
  }
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  try {
    for (const Command &c : commands) {
      if (app.got_subcommand(c.name)) {
        return c.run(o, out, err);
      }
    }
    throw InputError("no command given");
  } catch (const InputError &e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument &e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const SizeGuardError &e) {
    err << "size guard: " << e.what() << "\n";
    return kExitSizeGuard;
  } catch (const InvariantError &e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception &e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInvariant;
  }
}

}  // namespace qdist
