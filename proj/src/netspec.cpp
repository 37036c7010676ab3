// Copyright 2026 The qfn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfn/netspec.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qfn/errors.hpp"

namespace qfn {

namespace {

using nlohmann::json;

bool same_matrix(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
}

[[noreturn]] void fail(const std::string& source, const std::string& field,
                       const std::string& what) {
  throw ParseError(source + ": " + field + ": " + what);
}

int line_of(const std::string& text, std::size_t byte) {
  const auto end = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(),
                                         text.begin() + static_cast<std::ptrdiff_t>(end),
                                         '\n'));
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(source + ":" + std::to_string(line_of(text, e.byte)) +
                     ": malformed JSON: " + e.what());
  }
}

Complex read_complex(const json& j, const std::string& source,
                     const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    fail(source, field, "expected a complex number [re, im]");
  }
  const Complex z{j[0].get<double>(), j[1].get<double>()};
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    fail(source, field, "non-finite number");
  }
  return z;
}

Matrix read_matrix(const json& j, const std::string& source,
                   const std::string& field) {
  if (!j.is_array() || j.empty()) {
    fail(source, field, "expected a non-empty array of rows");
  }
  const auto rows = static_cast<Index>(j.size());
  Index cols = -1;
  Matrix m;
  for (Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    const std::string row_field = field + "[" + std::to_string(r) + "]";
    if (!row.is_array() || row.empty()) {
      fail(source, row_field, "expected a non-empty row");
    }
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Index>(row.size()) != cols) {
      fail(source, row_field, "ragged matrix row");
    }
    for (Index c = 0; c < cols; ++c) {
      m(r, c) = read_complex(row[static_cast<std::size_t>(c)], source,
                             row_field + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

json write_matrix(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

struct ParsedPort {
  PortRef ref;
  bool output;
};

ParsedPort read_port(const json& j, const std::string& source,
                     const std::string& field) {
  static const std::regex pattern(R"(^(.+)\.(out|in)\[([0-9]+)\]$)");
  if (!j.is_string()) fail(source, field, "expected a port \"comp.out[k]\"");
  const std::string text = j.get<std::string>();
  std::smatch match;
  if (!std::regex_match(text, match, pattern)) {
    fail(source, field, "malformed port '" + text + "'");
  }
  ParsedPort port;
  port.ref.component = match[1];
  port.output = match[2] == "out";
  try {
    port.ref.port = std::stoi(match[3]);
  } catch (const std::exception&) {
    fail(source, field, "port number out of range");
  }
  return port;
}

std::string port_text(const PortRef& p, bool output) {
  return p.component + (output ? ".out[" : ".in[") + std::to_string(p.port) +
         "]";
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

bool operator==(const ComponentSpec& a, const ComponentSpec& b) {
  return a.name == b.name && same_matrix(a.S, b.S) && same_matrix(a.L, b.L) &&
         same_matrix(a.H, b.H);
}

Index NetworkSpec::channel_count() const {
  Index n = 0;
  for (const auto& c : components) n += c.S.rows() / initial_dim;
  return n;
}

NetworkSpec parse_spec(const std::string& text, const std::string& source) {
  const json root = parse_json(text, source);
  if (!root.is_object()) fail(source, "<root>", "expected an object");

  NetworkSpec spec;
  if (!root.contains("initial_dim") || !root["initial_dim"].is_number_integer() ||
      root["initial_dim"].get<long long>() < 1) {
    fail(source, "initial_dim", "expected a positive integer");
  }
  spec.initial_dim = root["initial_dim"].get<Index>();
  const Index d = spec.initial_dim;

  if (!root.contains("components") || !root["components"].is_array() ||
      root["components"].empty()) {
    fail(source, "components", "expected a non-empty array");
  }
  std::map<std::string, Index> channels_of;
  for (std::size_t k = 0; k < root["components"].size(); ++k) {
    const json& c = root["components"][k];
    const std::string field = "components[" + std::to_string(k) + "]";
    if (!c.is_object()) fail(source, field, "expected an object");
    for (const char* key : {"name", "S", "L", "H"}) {
      if (!c.contains(key)) fail(source, field, std::string("missing '") + key + "'");
    }
    if (!c["name"].is_string() || c["name"].get<std::string>().empty()) {
      fail(source, field + ".name", "expected a non-empty string");
    }
    ComponentSpec comp;
    comp.name = c["name"].get<std::string>();
    if (comp.name.find('.') != std::string::npos) {
      fail(source, field + ".name", "component names may not contain '.'");
    }
    if (channels_of.count(comp.name) != 0) {
      fail(source, field + ".name", "duplicate component '" + comp.name + "'");
    }
    comp.S = read_matrix(c["S"], source, field + ".S");
    comp.L = read_matrix(c["L"], source, field + ".L");
    comp.H = read_matrix(c["H"], source, field + ".H");
    if (comp.S.rows() != comp.S.cols() || comp.S.rows() % d != 0) {
      fail(source, field + ".S",
           "must be square with size a multiple of initial_dim");
    }
    if (comp.L.rows() != comp.S.rows() || comp.L.cols() != d) {
      fail(source, field + ".L", "must be " + std::to_string(comp.S.rows()) +
                                     "x" + std::to_string(d));
    }
    if (comp.H.rows() != d || comp.H.cols() != d) {
      fail(source, field + ".H",
           "must be " + std::to_string(d) + "x" + std::to_string(d));
    }
    channels_of[comp.name] = comp.S.rows() / d;
    spec.components.push_back(std::move(comp));
  }

  if (root.contains("connections")) {
    const json& conns = root["connections"];
    if (!conns.is_array()) fail(source, "connections", "expected an array");
    std::set<std::pair<std::string, int>> used_out;
    std::set<std::pair<std::string, int>> used_in;
    for (std::size_t k = 0; k < conns.size(); ++k) {
      const json& c = conns[k];
      const std::string field = "connections[" + std::to_string(k) + "]";
      if (!c.is_object() || !c.contains("from") || !c.contains("to")) {
        fail(source, field, "expected an object with 'from' and 'to'");
      }
      const ParsedPort from = read_port(c["from"], source, field + ".from");
      const ParsedPort to = read_port(c["to"], source, field + ".to");
      if (!from.output) fail(source, field + ".from", "must be an out port");
      if (to.output) fail(source, field + ".to", "must be an in port");
      for (const auto* p : {&from, &to}) {
        const std::string pfield = field + (p == &from ? ".from" : ".to");
        auto it = channels_of.find(p->ref.component);
        if (it == channels_of.end()) {
          fail(source, pfield, "unknown component '" + p->ref.component + "'");
        }
        if (p->ref.port < 1 || p->ref.port > it->second) {
          fail(source, pfield, "component '" + p->ref.component + "' has " +
                                   std::to_string(it->second) + " ports");
        }
      }
      if (!used_out.insert({from.ref.component, from.ref.port}).second) {
        fail(source, field + ".from",
             "port " + port_text(from.ref, true) + " is already connected");
      }
      if (!used_in.insert({to.ref.component, to.ref.port}).second) {
        fail(source, field + ".to",
             "port " + port_text(to.ref, false) + " is already connected");
      }
      Connection conn{from.ref, to.ref, Complex(1.0, 0.0)};
      if (c.contains("gain")) conn.gain = read_complex(c["gain"], source, field + ".gain");
      spec.connections.push_back(std::move(conn));
    }
  }

  if (root.contains("options")) {
    const json& opts = root["options"];
    if (!opts.is_object()) fail(source, "options", "expected an object");
    if (opts.contains("tol")) {
      if (!opts["tol"].is_number() || !(opts["tol"].get<double>() > 0.0)) {
        fail(source, "options.tol", "expected a positive number");
      }
      spec.options.tol = opts["tol"].get<double>();
    }
    if (opts.contains("seed")) {
      if (!opts["seed"].is_number_unsigned()) {
        fail(source, "options.seed", "expected an unsigned integer");
      }
      spec.options.seed = opts["seed"].get<std::uint64_t>();
    }
  }
  return spec;
}

NetworkSpec parse_spec_file(const std::filesystem::path& path) {
  return parse_spec(read_text(path), path.string());
}

std::string write_spec(const NetworkSpec& spec) {
  json root;
  root["initial_dim"] = spec.initial_dim;
  json comps = json::array();
  for (const auto& c : spec.components) {
    json jc;
    jc["name"] = c.name;
    jc["S"] = write_matrix(c.S);
    jc["L"] = write_matrix(c.L);
    jc["H"] = write_matrix(c.H);
    comps.push_back(std::move(jc));
  }
  root["components"] = std::move(comps);
  json conns = json::array();
  for (const auto& c : spec.connections) {
    conns.push_back({{"from", port_text(c.from, true)},
                     {"to", port_text(c.to, false)},
                     {"gain", json::array({c.gain.real(), c.gain.imag()})}});
  }
  root["connections"] = std::move(conns);
  json opts = json::object();
  if (spec.options.tol) opts["tol"] = *spec.options.tol;
  if (spec.options.seed) opts["seed"] = *spec.options.seed;
  root["options"] = std::move(opts);
  return root.dump(2) + "\n";
}

void write_spec_file(const std::filesystem::path& path,
                     const NetworkSpec& spec) {
  std::ofstream out(path);
  if (!out) throw Error(path.string() + ": cannot write file");
  out << write_spec(spec);
}

Matrix parse_density(const std::string& text, const std::string& source) {
  const json root = parse_json(text, source);
  if (!root.is_object() || !root.contains("rho")) {
    fail(source, "<root>", "expected an object with 'rho'");
  }
  return read_matrix(root["rho"], source, "rho");
}

Matrix parse_density_file(const std::filesystem::path& path) {
  return parse_density(read_text(path), path.string());
}

std::vector<Component> components_of(const NetworkSpec& spec) {
  std::vector<Component> out;
  for (const auto& c : spec.components) {
    out.push_back({c.name, SLHTriple::make(c.S, c.L, c.H, spec.initial_dim)});
  }
  return out;
}

Label channel_label(const PortRef& port) {
  return port.component + "." + std::to_string(port.port);
}

Wiring wiring_of(const NetworkSpec& spec) {
  Wiring w;
  const auto n_i = static_cast<Index>(spec.connections.size());
  w.x = Matrix::Zero(n_i, n_i);
  for (Index k = 0; k < n_i; ++k) {
    const Connection& c = spec.connections[static_cast<std::size_t>(k)];
    w.internal_out.push_back(channel_label(c.from));
    w.internal_in.push_back(channel_label(c.to));
    w.x(k, k) = c.gain;
  }
  return w;
}

NetworkSpec model_spec(const SLHTriple& g, const SpecOptions& options) {
  NetworkSpec spec;
  spec.initial_dim = g.d();
  spec.components.push_back(
      {"reduced", g.S.scalars(), g.L.scalars(), g.H});
  spec.options = options;
  return spec;
}

}  // namespace qfn
