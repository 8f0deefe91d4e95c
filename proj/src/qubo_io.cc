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

#include "qdist/qubo_io.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "qdist/errors.hpp"

namespace qdist {

namespace {

std::int64_t parse_integer(std::size_t line, const std::string &token) {
  if (token.empty()) {
    throw ParseError(line, "missing integer");
  }
  std::size_t start = (token[0] == '-' || token[0] == '+') ? 1 : 0;
  if (start == token.size()) {
    throw ParseError(line, "'" + token + "' is not an integer");
  }
  for (std::size_t i = start; i < token.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(token[i]))) {
      throw ParseError(line, "coefficient '" + token + "' is not an integer");
    }
  }
  try {
    return std::stoll(token);
  } catch (const std::out_of_range &) {
    throw ParseError(line, "integer '" + token + "' out of range");
  }
}

std::size_t parse_index(std::size_t line, const std::string &token) {
  std::int64_t v = parse_integer(line, token);
  if (v < 0) {
    throw ParseError(line, "negative index " + token);
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

void write_qubo(std::ostream &out, const QuboProblem &q, const std::vector<std::string> &comments) {
  std::size_t diagonals = 0;
  for (std::int64_t v : q.linear()) {
    diagonals += v != 0;
  }
  out << "c offset " << q.offset() << '\n';
  out << "c layout " << q.layout().to_spec() << '\n';
  for (const FixedVar &f : q.fixed()) {
    out << "c fixed " << f.index << ' ' << int(f.value) << '\n';
  }
  for (const std::string &c : comments) {
    out << "c " << c << '\n';
  }
  out << "p qubo 0 " << q.num_vars() << ' ' << diagonals << ' ' << q.quadratic().size() << '\n';
  for (std::size_t i = 0; i < q.num_vars(); ++i) {
    if (q.linear()[i] != 0) {
      out << i << ' ' << i << ' ' << q.linear()[i] << '\n';
    }
  }
  for (const auto &[key, value] : q.quadratic()) {
    out << key.first << ' ' << key.second << ' ' << value << '\n';
  }
}

QuboProblem read_qubo(std::istream &in) {
  std::string raw;
  std::size_t line_no = 0;
  std::int64_t offset = 0;
  std::optional<VariableLayout> layout;
  std::vector<FixedVar> fixed;
  std::optional<QuboProblem> q;
  std::size_t expected_diag = 0, expected_off = 0, seen_diag = 0, seen_off = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    std::istringstream words(raw);
    std::string first;
    if (!(words >> first)) {
      continue;
    }
    if (first == "c") {
      std::string key;
      words >> key;
      if (key == "offset") {
        std::string value;
        words >> value;
        offset = parse_integer(line_no, value);
      } else if (key == "layout") {
        std::string rest;
        std::getline(words, rest);
        try {
          layout = VariableLayout::from_spec(rest);
        } catch (const InputError &e) {
          throw ParseError(line_no, e.what());
        }
      } else if (key == "fixed") {
        std::string index, value;
        words >> index >> value;
        std::int64_t v = parse_integer(line_no, value);
        if (v != 0 && v != 1) {
          throw ParseError(line_no, "fixed value must be 0 or 1");
        }
        fixed.push_back({parse_index(line_no, index), static_cast<std::uint8_t>(v)});
      }
      continue;
    }
    if (first == "p") {
      if (q) {
        throw ParseError(line_no, "duplicate program line");
      }
      std::string kind, topology, nodes, diag, off;
      if (!(words >> kind >> topology >> nodes >> diag >> off) || kind != "qubo") {
        throw ParseError(line_no, "expected 'p qubo 0 <maxNode> <nDiagonals> <nOffDiagonals>'");
      }
      q.emplace(parse_index(line_no, nodes));
      expected_diag = parse_index(line_no, diag);
      expected_off = parse_index(line_no, off);
      continue;
    }
    if (!q) {
      throw ParseError(line_no, "coefficient before the program line");
    }
    std::string second, value, extra;
    if (!(words >> second >> value) || (words >> extra)) {
      throw ParseError(line_no, "expected '<i> <j> <value>'");
    }
    std::size_t i = parse_index(line_no, first);
    std::size_t j = parse_index(line_no, second);
    std::int64_t v = parse_integer(line_no, value);
    if (i >= q->num_vars() || j >= q->num_vars()) {
      throw ParseError(line_no, "index out of range");
    }
    if (i == j) {
      if (q->linear()[i] != 0) {
        throw ParseError(line_no, "duplicate diagonal entry");
      }
      if (seen_off > 0) {
        throw ParseError(line_no, "diagonal entries must precede off-diagonal entries");
      }
      q->add_linear(i, v);
      ++seen_diag;
    } else {
      if (i > j) {
        throw ParseError(line_no, "off-diagonal entries need i < j");
      }
      if (q->coefficient(i, j) != 0) {
        throw ParseError(line_no, "duplicate off-diagonal entry");
      }
      q->add_quadratic(i, j, v);
      ++seen_off;
    }
  }
  if (!q) {
    throw ParseError(line_no == 0 ? 1 : line_no, "missing program line");
  }
  if (seen_diag != expected_diag || seen_off != expected_off) {
    throw ParseError(line_no, "program line announces " + std::to_string(expected_diag) + "/" +
                                  std::to_string(expected_off) + " entries, file has " + std::to_string(seen_diag) +
                                  "/" + std::to_string(seen_off));
  }
  q->add_offset(offset);
  if (layout) {
    if (layout->size() != q->num_vars() + fixed.size()) {
      throw ParseError(line_no, "layout describes " + std::to_string(layout->size()) + " variables, file has " +
                                    std::to_string(q->num_vars() + fixed.size()));
    }
    q->set_layout(*layout);
  }
  try {
    q->set_fixed(std::move(fixed));
  } catch (const InputError &e) {
    throw ParseError(line_no, e.what());
  }
  return std::move(*q);
}

void export_qubo(const QuboProblem &q, const std::string &path, const std::vector<std::string> &comments) {
  std::ofstream out(path);
  if (!out) {
    throw InputError("cannot write '" + path + "'");
  }
  write_qubo(out, q, comments);
}

QuboProblem import_qubo(const std::string &path) {
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    return qubo_from_json(read_json_file(path));
  }
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open QUBO file '" + path + "'");
  }
  return read_qubo(in);
}

nlohmann::json qubo_to_json(const QuboProblem &q, const nlohmann::json &provenance) {
  nlohmann::json quadratic = nlohmann::json::array();
  for (const auto &[key, value] : q.quadratic()) {
    quadratic.push_back({key.first, key.second, value});
  }
  nlohmann::json fixed = nlohmann::json::array();
  for (const FixedVar &f : q.fixed()) {
    fixed.push_back({f.index, f.value});
  }
  return {
      {"format", "qdist.qubo.v1"}, {"num_vars", q.num_vars()},   {"offset", q.offset()},
      {"linear", q.linear()},      {"quadratic", quadratic},     {"layout", q.layout().to_spec()},
      {"fixed", fixed},            {"provenance", provenance},
  };
}

QuboProblem qubo_from_json(const nlohmann::json &doc) {
  try {
    if (doc.at("format") != "qdist.qubo.v1") {
      throw InputError("not a qdist QUBO document");
    }
    QuboProblem q(doc.at("num_vars").get<std::size_t>());
    q.add_offset(doc.at("offset").get<std::int64_t>());
    auto linear = doc.at("linear").get<std::vector<std::int64_t>>();
    if (linear.size() != q.num_vars()) {
      throw InputError("linear term count does not match num_vars");
    }
    for (std::size_t i = 0; i < linear.size(); ++i) {
      q.add_linear(i, linear[i]);
    }
    for (const auto &entry : doc.at("quadratic")) {
      auto i = entry.at(0).get<std::size_t>();
      auto j = entry.at(1).get<std::size_t>();
      if (i >= j || j >= q.num_vars()) {
        throw InputError("bad quadratic entry");
      }
      q.add_quadratic(i, j, entry.at(2).get<std::int64_t>());
    }
    std::vector<FixedVar> fixed;
    for (const auto &entry : doc.at("fixed")) {
      fixed.push_back({entry.at(0).get<std::size_t>(), entry.at(1).get<std::uint8_t>()});
    }
    VariableLayout layout = VariableLayout::from_spec(doc.at("layout").get<std::string>());
    if (layout.size() != q.num_vars() + fixed.size()) {
      throw InputError("layout does not match the variable count");
    }
    q.set_layout(layout);
    q.set_fixed(std::move(fixed));
    return q;
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("malformed QUBO document: ") + e.what());
  }
}

nlohmann::json ising_to_json(const IsingProblem &ising, const nlohmann::json &provenance) {
  nlohmann::json couplings = nlohmann::json::array();
  for (const auto &[key, value] : ising.j) {
    couplings.push_back({key.first, key.second, value});
  }
  return {{"format", "qdist.ising.v1"}, {"num_spins", ising.num_spins}, {"h", ising.h},
          {"J", couplings},             {"offset", ising.offset},       {"provenance", provenance}};
}

IsingProblem ising_from_json(const nlohmann::json &doc) {
  try {
    if (doc.at("format") != "qdist.ising.v1") {
      throw InputError("not a qdist Ising document");
    }
    IsingProblem ising;
    ising.num_spins = doc.at("num_spins").get<std::size_t>();
    ising.h = doc.at("h").get<std::vector<double>>();
    ising.offset = doc.at("offset").get<double>();
    if (ising.h.size() != ising.num_spins) {
      throw InputError("field count does not match num_spins");
    }
    for (const auto &entry : doc.at("J")) {
      auto i = entry.at(0).get<std::size_t>();
      auto j = entry.at(1).get<std::size_t>();
      if (i >= j || j >= ising.num_spins) {
        throw InputError("bad coupling entry");
      }
      ising.j[{i, j}] += entry.at(2).get<double>();
    }
    return ising;
  } catch (const nlohmann::json::exception &e) {
    throw InputError(std::string("malformed Ising document: ") + e.what());
  }
}

nlohmann::json read_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open '" + path + "'");
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace qdist
