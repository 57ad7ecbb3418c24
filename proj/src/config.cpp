// Copyright 2026 The wslab Authors.
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

#include "wslab/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "toml.hpp"
#include "wslab/error.hpp"

namespace wslab {
namespace {

using nlohmann::json;

[[noreturn]] void fail(std::string_view source, const std::string& what) {
  throw ParseError(std::string(source) + ": " + what);
}

void reject_unknown(const json& table, std::initializer_list<std::string_view> allowed,
                    std::string_view section, std::string_view source) {
  if (!table.is_object()) fail(source, std::string(section) + " must be a table");
  for (const auto& [key, value] : table.items()) {
    bool ok = false;
    for (std::string_view a : allowed) ok = ok || key == a;
    if (!ok) fail(source, "unknown key '" + key + "' in " + std::string(section));
  }
}

// Overlays `given` on `defaults`; unknown keys and type changes are errors.
json merge_section(const json& defaults, const json& given, std::string_view section,
                   std::string_view source) {
  json out = defaults;
  if (given.is_null()) return out;
  if (!given.is_object()) fail(source, "[" + std::string(section) + "] must be a table");
  for (const auto& [key, value] : given.items()) {
    if (!defaults.contains(key)) {
      fail(source, "unknown key '" + key + "' in [" + std::string(section) + "]");
    }
    const json& def = defaults.at(key);
    const bool both_numbers = def.is_number() && value.is_number();
    if (!both_numbers && def.type() != value.type()) {
      fail(source, "key '" + key + "' in [" + std::string(section) + "] has the wrong type");
    }
    out[key] = value;
  }
  return out;
}

json params_table(std::string_view experiment) {
  if (experiment == "duality_gap") {
    return {{"instances", 100}, {"min_atoms", 2}, {"max_atoms", 50},
            {"half_width", 2.0}, {"p_values", json::array()}};
  }
  if (experiment == "potential_estimates") {
    return {{"instances", 20},  {"radii", {1.0, 2.0}}, {"p_values", json::array()},
            {"nu_atoms", 50},   {"mu_atoms", 50},      {"mu_radius", 3.0},
            {"sample_pairs", 10000}};
  }
  if (experiment == "slope_check") {
    return {{"functions", 10},
            {"function", "random"},
            {"fields", 3},
            {"atoms", 5},
            {"half_width", 1.0},
            {"p_values", json::array()},
            {"eps", 1e-3},
            {"t_schedule", {1e-1, 1e-2, 1e-3, 1e-4}},
            {"radii", {0.5, 0.25, 0.1, 0.05, 0.02, 0.01}},
            {"pairs_per_radius", 40}};
  }
  if (experiment == "maxpot_convergence") {
    return {{"nu_atoms", 20},     {"nu_radius", 1.0},   {"grid_size", 40},
            {"battery", 5},       {"battery_atoms", 4}, {"half_width", 1.5},
            {"include_battery", true}, {"eps", 0.05},   {"sample_n", 2000},
            {"resamples", 200},   {"save_dictionary", false}};
  }
  if (experiment == "boas_suite") {
    return {{"presets", {{2.0, 2.0, 2.0, 2.0}, {3.0, 3.0, 1.5, 2.0}}},
            {"pairs", 500},
            {"fields", 2},
            {"meta_atoms", 10},
            {"measure_atoms", 4},
            {"half_width", 1.0},
            {"parallelogram", true}};
  }
  if (experiment == "projection_convergence") {
    return {{"instances", 20}, {"atoms", 12}, {"half_width", 1.0}};
  }
  if (experiment == "modulus_probe") {
    return {{"functional", "norm"},
            {"t", 2.0},
            {"q", 2.0},
            {"trials", 2000},
            {"eps_grid", {0.05, 0.1, 0.2, 0.4, 0.8, 1.2, 1.6}},
            {"fields", 2},
            {"meta_atoms", 10},
            {"measure_atoms", 4},
            {"half_width", 1.0},
            {"expect_positive", true}};
  }
  throw ParseError("unknown experiment '" + std::string(experiment) + "'");
}

json tolerance_table(std::string_view experiment) {
  if (experiment == "duality_gap") {
    return {{"gap", 1e-8}, {"feasibility", 1e-8}, {"slackness", 1e-8}, {"fixpoint", 1e-10}};
  }
  if (experiment == "potential_estimates") return {{"residual", 1e-9}};
  if (experiment == "slope_check") {
    return {{"bracket_width", 0.05}, {"upper_excess", 1e-6}, {"lower_roundoff", 1e-13}};
  }
  if (experiment == "maxpot_convergence") {
    return {{"stderr_multiple", 3.0}, {"rel_tol", 1e-6}};
  }
  if (experiment == "boas_suite") return {{"residual", 1e-9}, {"parallelogram", 1e-8}};
  if (experiment == "projection_convergence") return {{"monotone", 1e-8}};
  if (experiment == "modulus_probe") return {{"homogeneity", 1e-9}};
  throw ParseError("unknown experiment '" + std::string(experiment) + "'");
}

void require_positive_count(const json& params, const char* key, std::string_view source) {
  if (!params.at(key).is_number_integer() || params.at(key).get<long long>() < 1) {
    fail(source, std::string("params.") + key + " must be a positive integer");
  }
}

void require_positive_list(const json& params, const char* key, std::string_view source,
                           bool allow_empty) {
  const json& list = params.at(key);
  if (!list.is_array() || (!allow_empty && list.empty())) {
    fail(source, std::string("params.") + key + " must be a nonempty list");
  }
  for (const json& v : list) {
    if (!v.is_number() || !(v.get<double>() > 0.0)) {
      fail(source, std::string("params.") + key + " must hold positive reals");
    }
  }
}

void check_params(const ExperimentConfig& cfg, std::string_view source) {
  const json& p = cfg.params;
  for (const auto& [key, value] : p.items()) {
    if (value.is_number_integer() && key != "min_atoms") {
      require_positive_count(p, key.c_str(), source);
    }
    if (value.is_number_float() && !(value.get<double>() > 0.0)) {
      fail(source, "params." + key + " must be positive");
    }
    if (value.is_array() && key != "presets") {
      require_positive_list(p, key.c_str(), source, key == "p_values");
    }
  }
  if (p.contains("p_values")) {
    for (const json& v : p.at("p_values")) {
      if (!(v.get<double>() > 1.0)) fail(source, "params.p_values must exceed 1");
    }
  }
  const std::string& e = cfg.experiment;
  if (e == "duality_gap") {
    if (p.at("min_atoms").get<long long>() < 1 ||
        p.at("min_atoms").get<long long>() > p.at("max_atoms").get<long long>()) {
      fail(source, "params.min_atoms must lie in 1..max_atoms");
    }
  } else if (e == "slope_check") {
    const std::string f = p.at("function").get<std::string>();
    if (f != "random" && f != "constant" && f != "linear") {
      fail(source, "params.function must be random, constant or linear");
    }
  } else if (e == "maxpot_convergence") {
    if (!(p.at("eps").get<double>() < 1.0)) fail(source, "params.eps must lie in (0, 1)");
    if (p.at("battery").get<long long>() > p.at("grid_size").get<long long>() &&
        p.at("include_battery").get<bool>()) {
      fail(source, "params.battery exceeds params.grid_size");
    }
  } else if (e == "boas_suite") {
    if (!p.at("presets").is_array() || p.at("presets").empty()) {
      fail(source, "params.presets must be a nonempty list");
    }
    for (const json& row : p.at("presets")) {
      if (!row.is_array() || row.size() != 4) {
        fail(source, "each preset is [p_conj, r, s, q]");
      }
      for (const json& v : row) {
        if (!v.is_number() || !(v.get<double>() > 1.0)) {
          fail(source, "preset entries must exceed 1");
        }
      }
    }
  } else if (e == "projection_convergence") {
    if (cfg.cost.norm.kind() == NormKind::kSmoothed) {
      fail(source, "projection_convergence needs a coordinate norm");
    }
  } else if (e == "modulus_probe") {
    const std::string f = p.at("functional").get<std::string>();
    if (f != "norm" && f != "pce") fail(source, "params.functional must be norm or pce");
    if (!(p.at("t").get<double>() > 1.0) || !(p.at("q").get<double>() > 1.0)) {
      fail(source, "params.t and params.q must exceed 1");
    }
  }
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = {
      "slope_check",        "duality_gap", "potential_estimates",
      "maxpot_convergence", "boas_suite",  "projection_convergence",
      "modulus_probe"};
  return kinds;
}

json default_params(std::string_view experiment) { return params_table(experiment); }

json default_tolerances(std::string_view experiment) { return tolerance_table(experiment); }

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
  json doc;
  try {
    const toml::table table = toml::parse(text, source);
    std::ostringstream os;
    os << toml::json_formatter{table};
    doc = json::parse(os.str());
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << e.description() << " at line " << e.source().begin.line;
    fail(source, os.str());
  }

  for (const auto& [key, value] : doc.items()) {
    static const char* known[] = {"schema_version", "experiment", "seed", "cost",
                                  "params", "tolerances", "output"};
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) fail(source, "unknown top-level key '" + key + "'");
  }

  ExperimentConfig cfg;
  try {
    if (!doc.contains("schema_version") || doc.at("schema_version").get<int>() != kSchemaVersion) {
      fail(source, "schema_version must be " + std::to_string(kSchemaVersion));
    }
    if (!doc.contains("experiment")) fail(source, "missing 'experiment'");
    cfg.experiment = doc.at("experiment").get<std::string>();
    bool known = false;
    for (const std::string& k : experiment_kinds()) known = known || k == cfg.experiment;
    if (!known) fail(source, "unknown experiment '" + cfg.experiment + "'");

    if (!doc.contains("seed") || !doc.at("seed").is_number_integer() ||
        doc.at("seed").get<long long>() < 0) {
      fail(source, "'seed' must be an explicit nonnegative integer");
    }
    cfg.seed = doc.at("seed").get<std::uint64_t>();

    if (!doc.contains("cost")) fail(source, "missing [cost]");
    const json& cost = doc.at("cost");
    reject_unknown(cost, {"p", "norm"}, "[cost]", source);
    if (cost.contains("norm")) {
      reject_unknown(cost.at("norm"), {"kind", "dim", "params"}, "[cost.norm]", source);
    }
    cfg.cost = cost_from_json(cost);
    if (!(cfg.cost.p > 1.0)) fail(source, "cost.p must exceed 1");

    cfg.params = merge_section(params_table(cfg.experiment), doc.value("params", json()),
                               "params", source);
    cfg.tolerances = merge_section(tolerance_table(cfg.experiment),
                                   doc.value("tolerances", json()), "tolerances", source);
    for (const auto& [key, value] : cfg.tolerances.items()) {
      if (!(value.get<double>() > 0.0)) fail(source, "tolerances." + key + " must be positive");
    }
    if (doc.contains("output")) {
      const json& out = doc.at("output");
      for (const auto& [key, value] : out.items()) {
        if (key != "dir") fail(source, "unknown key '" + key + "' in [output]");
      }
      cfg.output_dir = out.value("dir", cfg.output_dir);
    }
  } catch (const json::exception& e) {
    fail(source, e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    fail(source, e.what());
  }
  check_params(cfg, source);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read config '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), path);
}

}  // namespace wslab
