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

#include <string>

#include "doctest.h"
#include "qfn/errors.hpp"
#include "qfn/netspec.hpp"
#include "qfn/sampling.hpp"

using namespace qfn;

namespace {

const std::string kData = QFN_DATA_DIR;

std::string one_component(const std::string& extra) {
  return R"({"initial_dim": 1, "components": [)"
         R"({"name": "a", "S": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],)"
         R"( "L": [[[0, 0]], [[0, 0]]], "H": [[[0, 0]]]}])" +
         extra + "}";
}

std::string parse_message(const std::string& text) {
  try {
    parse_spec(text, "net.json");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("parse_spec: minimal file") {
  const NetworkSpec spec = parse_spec_file(kData + "/minimal.json");
  CHECK(spec.initial_dim == 1);
  REQUIRE(spec.components.size() == 1);
  CHECK(spec.channel_count() == 1);
  CHECK(spec.connections.empty());
  CHECK(spec.components[0].S == Matrix::Identity(1, 1));
  CHECK_FALSE(spec.options.tol.has_value());
  const auto comps = components_of(spec);
  CHECK(comps[0].slh.channels() == Labels{"1"});
}

TEST_CASE("parse_spec: beamsplitter loop wiring") {
  const NetworkSpec spec = parse_spec_file(kData + "/beamsplitter_loop.json");
  CHECK(spec.channel_count() == 2);
  REQUIRE(spec.connections.size() == 1);
  CHECK(spec.connections[0].gain == Complex(1.0));
  const Wiring w = wiring_of(spec);
  CHECK(w.internal_out == Labels{"bs.2"});
  CHECK(w.internal_in == Labels{"bs.2"});
  CHECK(w.x == Matrix::Identity(1, 1));
  CHECK(w.symmetric());
}

TEST_CASE("parse_spec: gains and mixed number forms") {
  const NetworkSpec spec = parse_spec(one_component(
      R"(, "connections": [{"from": "a.out[1]", "to": "a.in[2]", "gain": [0.5, -2]},)"
      R"( {"from": "a.out[2]", "to": "a.in[1]", "gain": 3}],)"
      R"( "options": {"tol": 1e-7, "seed": 9})"));
  const Wiring w = wiring_of(spec);
  CHECK(w.internal_out == Labels{"a.1", "a.2"});
  CHECK(w.internal_in == Labels{"a.2", "a.1"});
  CHECK(w.x(0, 0) == Complex(0.5, -2));
  CHECK(w.x(1, 1) == Complex(3));
  CHECK(w.x(0, 1) == Complex(0));
  CHECK(*spec.options.tol == 1e-7);
  CHECK(*spec.options.seed == 9u);
}

TEST_CASE("parse_spec: errors") {
  CHECK(parse_message(one_component(
            R"(, "connections": [{"from": "a.out[2]", "to": "a.in[2]"},)"
            R"( {"from": "a.out[2]", "to": "a.in[1]"}])"))
            .find("already connected") != std::string::npos);
  CHECK(parse_message(one_component(
            R"(, "connections": [{"from": "a.out[1]", "to": "a.in[2]"},)"
            R"( {"from": "a.out[2]", "to": "a.in[2]"}])"))
            .find("already connected") != std::string::npos);
  CHECK(parse_message(one_component(R"(, "connections": [{"from": "a.out[3]", "to": "a.in[1]"}])"))
            .find("connections[0].from") != std::string::npos);
  CHECK(parse_message(one_component(R"(, "connections": [{"from": "b.out[1]", "to": "a.in[1]"}])"))
            .find("unknown component") != std::string::npos);
  CHECK(parse_message(one_component(R"(, "connections": [{"from": "a.in[1]", "to": "a.in[2]"}])"))
            .find("out port") != std::string::npos);
  CHECK(parse_message(one_component(R"(, "connections": [{"from": "a.out[0]", "to": "a.in[2]"}])"))
            != "");
  CHECK(parse_message(one_component(R"x(, "connections": [{"from": "a.out(1)", "to": "a.in[2]"}])x"))
            .find("malformed port") != std::string::npos);
  CHECK(parse_message(one_component(R"(, "options": {"tol": -1})")).find("options") !=
        std::string::npos);

  const std::string broken = "{\n  \"initial_dim\": 1,\n  \"components\": [\n    oops\n  ]\n}";
  const std::string msg = parse_message(broken);
  CHECK(msg.rfind("net.json:4:", 0) == 0);

  CHECK(parse_message(R"({"initial_dim": 2, "components": [{"name": "a", "S": [[[1, 0]]],)"
                      R"( "L": [[[0, 0]]], "H": [[[0, 0]]]}]})")
            .find("components[0].S") != std::string::npos);
  CHECK(parse_message(R"({"initial_dim": 1, "components": [{"name": "a", "S": [[[1, 0]]],)"
                      R"( "L": [[[0, 0], [0, 0]]], "H": [[[0, 0]]]}]})")
            .find("components[0].L") != std::string::npos);
  CHECK(parse_message(R"({"initial_dim": 1, "components": [{"name": "a", "S": [[[1, 0]]],)"
                      R"( "L": [[[0, 0]]], "H": [[[0, 0], [0, 0]]]}]})")
            .find("components[0].H") != std::string::npos);
  CHECK(parse_message(R"({"initial_dim": 1, "components": [{"name": "a", "S": [[[1, 0], [0, 0]], [[1, 0]]],)"
                      R"( "L": [[[0, 0]], [[0, 0]]], "H": [[[0, 0]]]}]})")
            .find("ragged") != std::string::npos);
  CHECK(parse_message(R"({"initial_dim": 1, "components": [)"
                      R"({"name": "a", "S": [[1]], "L": [[0]], "H": [[0]]},)"
                      R"({"name": "a", "S": [[1]], "L": [[0]], "H": [[0]]}]})")
            .find("duplicate component") != std::string::npos);
  CHECK(parse_message(R"({"initial_dim": 1, "components": [{"name": "a.b", "S": [[1]], "L": [[0]], "H": [[0]]}]})") != "");
  CHECK(parse_message(R"({"initial_dim": 0, "components": []})").find("initial_dim") !=
        std::string::npos);
  CHECK(parse_message(R"({"initial_dim": 1, "components": [{"name": "a", "S": [["x"]], "L": [[0]], "H": [[0]]}]})")
            .find("complex") != std::string::npos);
  CHECK_THROWS_AS(parse_spec_file(kData + "/does_not_exist.json"), ParseError);
}

TEST_CASE("write_spec round-trips bit for bit") {
  for (std::uint64_t t = 0; t < 50; ++t) {
    CounterRng rng = CounterRng::for_trial(31, t);
    NetworkSpec spec;
    spec.initial_dim = rng.uniform_int(1, 3);
    const Index parts = rng.uniform_int(1, 3);
    for (Index k = 0; k < parts; ++k) {
      const Index n = rng.uniform_int(1, 3);
      const SLHTriple g = random_slh(rng, n, spec.initial_dim);
      spec.components.push_back({"c" + std::to_string(k), g.S.scalars(), g.L.scalars(), g.H});
    }
    spec.connections.push_back({{"c0", 1}, {"c0", 1}, rng.complex_normal()});
    if (t % 2 == 0) spec.options.tol = rng.uniform() * 1e-6;
    if (t % 3 == 0) spec.options.seed = rng.next_u64();
    const std::string text = write_spec(spec);
    const NetworkSpec back = parse_spec(text);
    CHECK(back == spec);
    CHECK(write_spec(back) == text);
  }
}

TEST_CASE("parse_density") {
  const Matrix rho = parse_density_file(kData + "/rho_excited.json");
  CHECK(rho.rows() == 2);
  CHECK(rho(1, 1) == Complex(1));
  CHECK_THROWS_AS(parse_density(R"({"sigma": [[1]]})"), ParseError);
}

TEST_CASE("model_spec") {
  CounterRng rng(32);
  const SLHTriple g = random_slh(rng, 2, 2);
  const NetworkSpec spec = model_spec(g, SpecOptions{1e-8, std::nullopt});
  CHECK(spec.initial_dim == 2);
  CHECK(spec.components.size() == 1);
  CHECK(spec.components[0].name == "reduced");
  CHECK(spec.components[0].S == g.S.scalars());
  CHECK(spec.connections.empty());
  CHECK(parse_spec(write_spec(spec)) == spec);
}
