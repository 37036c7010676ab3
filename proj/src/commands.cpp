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

#include "qfn/commands.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <numeric>

#include "qfn/dynamics.hpp"
#include "qfn/errors.hpp"
#include "qfn/sampling.hpp"

namespace qfn::cli {

namespace {

using nlohmann::json;

constexpr double kDomainFloor = 1e-3;
constexpr int kDomainAttempts = 50;

json base_report(const std::string& command, json inputs) {
  json report;
  report["command"] = command;
  report["inputs"] = std::move(inputs);
  report["defects"] = json::object();
  report["rcond"] = nullptr;
  report["pass"] = false;
  return report;
}

json pairing_json(const std::vector<std::pair<Label, Label>>& pairing) {
  json out = json::array();
  for (const auto& [o, i] : pairing) out.push_back(json::array({o, i}));
  return out;
}

/// Tracks the largest value seen per named defect.
class DefectTable {
 public:
  void record(const std::string& name, double value) {
    auto [it, inserted] = max_.emplace(name, value);
    if (!inserted) it->second = std::max(it->second, value);
  }
  void skip(const std::string& name) { ++skipped_[name]; }

  bool all_within(double tol) const {
    return std::all_of(max_.begin(), max_.end(),
                       [tol](const auto& kv) { return kv.second <= tol; });
  }
  json defects() const {
    json out = json::object();
    for (const auto& [k, v] : max_) out[k] = v;
    return out;
  }
  json skipped() const {
    json out = json::object();
    for (const auto& [k, v] : skipped_) out[k] = v;
    return out;
  }

 private:
  std::map<std::string, double> max_;
  std::map<std::string, int> skipped_;
};

Labels shuffled(CounterRng& rng, Labels labels) {
  for (std::size_t k = labels.size(); k > 1; --k) {
    const auto j = static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(k) - 1));
    std::swap(labels[k - 1], labels[j]);
  }
  return labels;
}

/// A random symmetric partition with 1 <= n_i <= n - 1, keeping the
/// declaration order inside the internal set.
Labels random_internal_set(CounterRng& rng, const Labels& channels) {
  const auto n = static_cast<std::int64_t>(channels.size());
  const auto n_i = static_cast<std::size_t>(rng.uniform_int(1, n - 1));
  Labels picked = shuffled(rng, channels);
  picked.resize(n_i);
  Labels ordered;
  for (const auto& c : channels) {
    if (std::find(picked.begin(), picked.end(), c) != picked.end()) {
      ordered.push_back(c);
    }
  }
  return ordered;
}

/// Draws edge matrices until 1 - V_ii X is comfortably invertible.
template <typename Draw>
std::optional<Wiring> conditioned_wiring(const BelavkinMatrix& v,
                                         const Labels& internal, Draw draw,
                                         double* rcond_out) {
  for (int attempt = 0; attempt < kDomainAttempts; ++attempt) {
    Wiring w{internal, internal, draw()};
    const DomainReport domain = domain_check(v, w);
    if (domain.rcond >= kDomainFloor) {
      *rcond_out = domain.rcond;
      return w;
    }
  }
  return std::nullopt;
}

double max_abs_diff(const SLHTriple& a, const SLHTriple& b) {
  return std::max({norm_inf(a.S.scalars() - b.S.scalars()),
                   norm_inf(a.L.scalars() - b.L.scalars()),
                   norm_inf(a.H - b.H)});
}

}  // namespace

json matrix_json(const Matrix& m) {
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

CommandResult error_result(const std::string& command, const std::string& input,
                           const std::string& message, int exit_code) {
  CommandResult result;
  result.report = base_report(command, json{{"source", input}});
  result.report["error"] = message;
  result.exit_code = exit_code;
  return result;
}

CommandResult validate(const NetworkSpec& spec, const std::string& input,
                       double tol) {
  CommandResult result;
  result.report = base_report(
      "validate", json{{"source", input},
                       {"tol", tol},
                       {"components", spec.components.size()},
                       {"channels", spec.channel_count()},
                       {"connections", spec.connections.size()}});
  json& defects = result.report["defects"];
  defects["components"] = json::object();

  const std::vector<Component> comps = components_of(spec);
  bool pass = true;
  for (const auto& c : comps) {
    const SlhDiagnostics diag = validate_slh(c.slh, tol);
    defects["components"][c.name] = {{"unitarity_left", diag.unitarity_left},
                                     {"unitarity_right", diag.unitarity_right},
                                     {"hermiticity", diag.hermiticity},
                                     {"pass", diag.pass()}};
    pass = pass && diag.pass();
  }

  defects["open_loop"] = nullptr;
  if (pass) {
    const BelavkinMatrix v = from_slh(concatenate(comps), tol);
    const StarUnitarityReport report = is_star_unitary(v, tol);
    defects["open_loop"] = {{"star_left", report.left_defect},
                            {"star_right", report.right_defect}};
    pass = report.pass;
    if (!spec.connections.empty() &&
        spec.connections.size() < static_cast<std::size_t>(v.n())) {
      result.report["rcond"] = domain_check(v, wiring_of(spec)).rcond;
    }
  }
  result.report["pass"] = pass;
  result.exit_code = pass ? kPass : kValidationFailure;
  return result;
}

CommandResult reduce(const NetworkSpec& spec, const std::string& input,
                     const std::optional<std::filesystem::path>& output,
                     double tol) {
  CommandResult result;
  result.report = base_report(
      "reduce", json{{"source", input},
                     {"tol", tol},
                     {"output", output ? json(output->string()) : json(nullptr)},
                     {"connections", spec.connections.size()}});
  try {
    const SLHTriple open_loop = concatenate(components_of(spec));
    const BelavkinMatrix v = from_slh(open_loop, tol);

    if (spec.connections.empty()) {
      const auto unitarity = is_star_unitary(v, tol);
      result.report["defects"] = {{"star_left", unitarity.left_defect},
                                  {"star_right", unitarity.right_defect}};
      result.model = model_spec(open_loop, spec.options);
      result.report["pass"] = unitarity.pass;
      result.exit_code = unitarity.pass ? kPass : kValidationFailure;
    } else {
      const Wiring w = wiring_of(spec);
      const DomainReport domain = domain_check(v, w);
      result.report["rcond"] = domain.rcond;
      if (!domain.in_domain) {
        result.report["error"] =
            "AlgebraicLoop: 1 - V_ii X is singular for this wiring";
        result.exit_code = kAlgebraicLoop;
        return result;
      }
      const ReducedModel red = feedback_reduce(v, w, tol);
      const auto& diag = red.diagnostics;
      result.report["defects"] = {
          {"star_left", diag.unitarity.left_defect},
          {"star_right", diag.unitarity.right_defect},
          {"involution", diag.involution_defect}};
      result.report["x_unitary"] = diag.x_unitary;
      result.report["channel_pairing"] = pairing_json(diag.channel_pairing);
      const double scale = std::max(1.0, norm_inf(red.v_red.matrix()));
      const bool pass = red.slh_red.has_value() &&
                        diag.involution_defect <= tol * scale;
      if (red.slh_red) result.model = model_spec(*red.slh_red, spec.options);
      if (!red.slh_red) {
        result.report["error"] =
            "reduced matrix is not star-unitary; edge gains are not unitary";
      }
      result.report["pass"] = pass;
      result.exit_code = pass ? kPass : kValidationFailure;
    }
  } catch (const AlgebraicLoop& e) {
    result.report["rcond"] = e.rcond();
    result.report["error"] = std::string("AlgebraicLoop: ") + e.what();
    result.exit_code = kAlgebraicLoop;
    return result;
  } catch (const Error& e) {
    result.report["error"] = e.what();
    result.exit_code = kValidationFailure;
    return result;
  }

  if (result.model) {
    result.report["model"] = json::parse(write_spec(*result.model));
    if (output) write_spec_file(*output, *result.model);
  }
  return result;
}

CommandResult check(const std::optional<NetworkSpec>& spec,
                    const std::string& input, std::uint64_t seed,
                    std::int64_t trials, double tol) {
  CommandResult result;
  result.report = base_report("check", json{{"source", input},
                                            {"builtin", !spec.has_value()},
                                            {"seed", seed},
                                            {"trials", trials},
                                            {"tol", tol}});
  std::optional<BelavkinMatrix> fixed_v;
  if (spec) {
    try {
      fixed_v = from_slh(concatenate(components_of(*spec)), tol);
    } catch (const Error& e) {
      result.report["error"] = e.what();
      result.exit_code = kValidationFailure;
      return result;
    }
  }

  DefectTable table;
  double min_rcond = std::numeric_limits<double>::infinity();
  for (std::int64_t t = 0; t < trials; ++t) {
    CounterRng rng = CounterRng::for_trial(seed, static_cast<std::uint64_t>(t));
    const Index n = fixed_v ? fixed_v->n() : rng.uniform_int(2, 5);
    const Index d = fixed_v ? fixed_v->d() : rng.uniform_int(1, 3);

    // Ito <-> Belavkin dictionary and the product rule for f(z) = z^2.
    {
      const ItoMatrix x = random_ito(rng, n, d);
      const ItoMatrix y = random_ito(rng, n, d);
      const ItoDefects ito = ito_correspondence_defects(x, y);
      table.record("ito_identifications",
                   std::max({ito.product, ito.plain, ito.involution}));
      const Op x0 = gaussian_matrix(rng, d, d);
      const BelavkinMatrix xx = belavkin_embed(x);
      const std::array<Complex, 3> square{0.0, 0.0, 1.0};
      const BelavkinMatrix f = polynomial_ito_matrix(x0, xx, square);
      Matrix shift = Matrix::Zero((n + 2) * d, (n + 2) * d);
      for (Index b = 0; b < n + 2; ++b) shift.block(b * d, b * d, d, d) = x0;
      const Matrix& xs = xx.matrix().scalars();
      const Matrix expected = shift * xs + xs * shift + xs * xs;
      table.record("ito_product_rule",
                   norm_inf(f.matrix().scalars() - expected));
    }

    // Star-unitarity of the coefficient matrix of a valid triple.
    const SLHTriple g1 = random_slh(rng, n, d);
    const SLHTriple g2 = random_slh(rng, n, d);
    const SLHTriple g3 = random_slh(rng, n, d);
    const BelavkinMatrix v1 = from_slh(g1);
    const BelavkinMatrix v2 = from_slh(g2);
    const BelavkinMatrix v3 = from_slh(g3);
    {
      const auto report = is_star_unitary(v1);
      table.record("slh_star_unitarity",
                   std::max(report.left_defect, report.right_defect));
    }

    // Series product, both presentations.
    table.record("series_agreement",
                 norm_inf(from_slh(series_slh(g2, g1)).matrix() -
                          series(v2, v1).matrix()));
    table.record("series_associativity",
                 norm_inf(series(series(v3, v2), v1).matrix() -
                          series(v3, series(v2, v1)).matrix()));

    // Cascade realised as a one-bundle feedback network.
    {
      const Index m = rng.uniform_int(1, 2);
      const SLHTriple a = random_slh(rng, m, d);
      const SLHTriple b = random_slh(rng, m, d);
      table.record("cascade_agreement",
                   max_abs_diff(cascade_via_feedback(a, b), series_slh(b, a)));
    }

    // Reduction identities.
    const BelavkinMatrix v = fixed_v ? *fixed_v : from_slh(random_slh(rng, n, d));
    if (v.n() < 2) {
      for (const char* key : {"reduction_star_unitarity", "involution_identity",
                              "siegel_left", "siegel_right"}) {
        table.skip(key);
      }
      continue;
    }
    const Labels internal = random_internal_set(rng, v.channels());
    const auto n_i = static_cast<Index>(internal.size());
    double rcond = 0.0;

    if (auto w = conditioned_wiring(
            v, internal, [&] { return random_unitary(rng, n_i); }, &rcond)) {
      min_rcond = std::min(min_rcond, rcond);
      const BelavkinMatrix f = feedback_reduce(v, *w).v_red;
      const auto report = is_star_unitary(f);
      table.record("reduction_star_unitarity",
                   std::max(report.left_defect, report.right_defect));
    } else {
      table.skip("reduction_star_unitarity");
    }

    if (auto w = conditioned_wiring(
            v, internal,
            [&] { return random_scaled_unitary(rng, n_i, 0.5, 2.0); }, &rcond)) {
      min_rcond = std::min(min_rcond, rcond);
      table.record("involution_identity", involution_identity_defect(v, *w));
    } else {
      table.skip("involution_identity");
    }

    {
      double rx = 0.0;
      double ry = 0.0;
      auto wx = conditioned_wiring(
          v, internal, [&] { return random_scaled_unitary(rng, n_i, 0.1, 0.9); },
          &rx);
      auto wy = conditioned_wiring(
          v, internal, [&] { return random_scaled_unitary(rng, n_i, 0.1, 0.9); },
          &ry);
      if (wx && wy) {
        min_rcond = std::min({min_rcond, rx, ry});
        const SiegelDefects s = siegel_defects(v, *wx, wx->x, wy->x);
        table.record("siegel_left", s.left);
        table.record("siegel_right", s.right);
      } else {
        table.skip("siegel_left");
        table.skip("siegel_right");
      }
    }
  }

  const bool pass = table.all_within(tol);
  result.report["defects"] = table.defects();
  result.report["skipped"] = table.skipped();
  if (std::isfinite(min_rcond)) result.report["rcond"] = min_rcond;
  result.report["pass"] = pass;
  result.exit_code = pass ? kPass : kValidationFailure;
  return result;
}

CommandResult simulate(const NetworkSpec& model, const std::string& input,
                       const Matrix& rho0, double t, double dt, double tol) {
  CommandResult result;
  result.report = base_report(
      "simulate", json{{"source", input}, {"t", t}, {"dt", dt}, {"tol", tol}});
  try {
    SLHTriple g = concatenate(components_of(model));
    if (!model.connections.empty()) {
      const BelavkinMatrix v = from_slh(g, tol);
      const Wiring w = wiring_of(model);
      const DomainReport domain = domain_check(v, w);
      result.report["rcond"] = domain.rcond;
      if (!domain.in_domain) {
        result.report["error"] =
            "AlgebraicLoop: 1 - V_ii X is singular for this wiring";
        result.exit_code = kAlgebraicLoop;
        return result;
      }
      g = reduced_slh(v, w, tol);
    }
    const Superoperator gen = lindblad_generator(g, tol);
    const Matrix id_row = vec(Matrix::Identity(gen.d, gen.d)).transpose();
    const double trace_leak = norm_inf(Matrix(id_row * gen.matrix));
    const EvolveResult out = evolve(rho0, gen, t, dt);
    result.report["defects"] = {{"trace_drift", out.max_trace_drift},
                                {"generator_trace_leak", trace_leak}};
    result.report["rho"] = matrix_json(out.rho);
    result.report["min_eigenvalue"] = out.min_eigenvalue;
    result.report["steps"] = out.steps;
    const bool pass =
        out.max_trace_drift <= tol && trace_leak <= tol && out.positive;
    result.report["pass"] = pass;
    result.exit_code = pass ? kPass : kValidationFailure;
  } catch (const AlgebraicLoop& e) {
    result.report["rcond"] = e.rcond();
    result.report["error"] = std::string("AlgebraicLoop: ") + e.what();
    result.exit_code = kAlgebraicLoop;
  } catch (const Error& e) {
    result.report["error"] = e.what();
    result.exit_code = kValidationFailure;
  }
  return result;
}

}  // namespace qfn::cli
