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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qfn/network.hpp"

namespace qfn {

/// One vertex of a network file. S is nd x nd, L is nd x d, H is d x d.
struct ComponentSpec {
  std::string name;
  Matrix S;
  Matrix L;
  Matrix H;

  /// Exact comparison, shapes included.
  friend bool operator==(const ComponentSpec& a, const ComponentSpec& b);
};

/// "comp.out[k]" or "comp.in[k]"; ports are numbered from 1.
struct PortRef {
  std::string component;
  int port = 1;

  bool operator==(const PortRef&) const = default;
};

struct Connection {
  PortRef from;
  PortRef to;
  Complex gain{1.0, 0.0};

  bool operator==(const Connection&) const = default;
};

struct SpecOptions {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;

  bool operator==(const SpecOptions&) const = default;
};

struct NetworkSpec {
  Index initial_dim = 1;
  std::vector<ComponentSpec> components;
  std::vector<Connection> connections;
  SpecOptions options;

  bool operator==(const NetworkSpec&) const = default;

  Index channel_count() const;
};

/// Parses and validates a network file. Complex scalars are [re, im] pairs
/// (a bare number is read as a real scalar); matrices are row-major nested
/// arrays. Throws ParseError carrying the source name and the line or the
/// offending field.
NetworkSpec parse_spec(const std::string& text,
                       const std::string& source = "<input>");
NetworkSpec parse_spec_file(const std::filesystem::path& path);

/// Serialises with shortest round-trip number formatting, so
/// parse_spec(write_spec(s)) == s holds bit for bit.
std::string write_spec(const NetworkSpec& spec);
void write_spec_file(const std::filesystem::path& path,
                     const NetworkSpec& spec);

/// {"rho": matrix}
Matrix parse_density(const std::string& text,
                     const std::string& source = "<input>");
Matrix parse_density_file(const std::filesystem::path& path);

std::vector<Component> components_of(const NetworkSpec& spec);
/// Channel "c.k" for port k of component c.
Label channel_label(const PortRef& port);
/// Internal sets in connection order; x is diagonal with the edge gains.
Wiring wiring_of(const NetworkSpec& spec);

/// Single-component model "reduced" with no connections.
NetworkSpec model_spec(const SLHTriple& g, const SpecOptions& options);

}  // namespace qfn
