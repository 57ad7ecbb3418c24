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

#include "wslab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "parallel.hpp"
#include "wslab/approx.hpp"
#include "wslab/cylinder.hpp"
#include "wslab/energy.hpp"
#include "wslab/error.hpp"
#include "wslab/log.hpp"
#include "wslab/measures.hpp"
#include "wslab/norms.hpp"
#include "wslab/random_instances.hpp"
#include "wslab/rng.hpp"
#include "wslab/transport.hpp"

namespace wslab {

using nlohmann::json;

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw InvalidArgument("table row has the wrong width");
  rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    out += (c ? "," : "") + columns[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + row[c];
    out += '\n';
  }
  return out;
}

std::string cell(double v) { return format_double(v); }
std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(const std::string& v) { return v; }

void ExperimentReport::fail(std::string message) {
  ++violations;
  if (failures.size() < 50) failures.push_back(std::move(message));
}

namespace {

// JSON has no infinities; unreached values become null.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<double> p_values(const ExperimentConfig& cfg) {
  std::vector<double> ps = cfg.params.at("p_values").get<std::vector<double>>();
  if (ps.empty()) ps.push_back(cfg.cost.p);
  return ps;
}

std::size_t count(const ExperimentConfig& cfg, const char* key) {
  return cfg.params.at(key).get<std::size_t>();
}

double real(const ExperimentConfig& cfg, const char* key) {
  return cfg.params.at(key).get<double>();
}

double tol(const ExperimentConfig& cfg, const char* key) {
  return cfg.tolerances.at(key).get<double>();
}

CounterRng instance_rng(const ExperimentConfig& cfg, std::size_t i) {
  return CounterRng(cfg.seed, CounterRng::stream_id(cfg.experiment)).child(i);
}

// Same norm family restricted to the first h coordinates.
Norm restrict_norm(const Norm& norm, int h) {
  switch (norm.kind()) {
    case NormKind::kEuclidean:
      return Norm::euclidean(h);
    case NormKind::kPNorm:
      return Norm::p_norm(h, norm.exponent());
    case NormKind::kOneNorm:
      return Norm::one_norm(h);
    case NormKind::kWeightedP: {
      const Vec& w = norm.weights();
      return Norm::weighted_p(Vec(w.begin(), w.begin() + h), norm.exponent());
    }
    case NormKind::kSmoothed:
      break;
  }
  throw InvalidArgument("coordinate projection needs a coordinate norm");
}

// ---------------------------------------------------------------- duality_gap

ExperimentReport run_duality_gap(const ExperimentConfig& cfg, std::size_t jobs) {
  ExperimentReport rep;
  rep.details = Table({"instance", "p", "rows", "cols", "primal", "wp", "gap", "feasibility",
                       "slackness", "phi_fixpoint", "psi_fixpoint", "marginals",
                       "displacement", "superdiff_failures"});
  const std::vector<double> ps = p_values(cfg);
  const std::size_t n_inst = count(cfg, "instances");
  const auto lo = cfg.params.at("min_atoms").get<std::size_t>();
  const std::size_t hi = count(cfg, "max_atoms");
  const double hw = real(cfg, "half_width");
  const int d = cfg.cost.dim();

  struct Row {
    double p;
    std::size_t m, n;
    TransportSolution sol;
    PotentialResiduals res;
    double displacement;
    std::size_t superdiff_failures;
  };
  std::vector<Row> rows(n_inst);
  detail::parallel_for(n_inst, jobs, [&](std::size_t i) {
    CounterRng rng = instance_rng(cfg, i);
    const double p = ps[i % ps.size()];
    const Cost cost(cfg.cost.norm, p);
    const std::size_t m = lo + rng.below(hi - lo + 1);
    const std::size_t n = lo + rng.below(hi - lo + 1);
    const DiscreteMeasure mu = random_measure(d, m, hw, rng);
    const DiscreteMeasure nu = random_measure(d, n, hw, rng);
    Row r{p, mu.size(), nu.size(), solve_ot(mu, nu, cost), {}, 0.0, 0};
    const KantorovichPotentials pot = dual_potentials(mu, nu, cost, r.sol);
    r.res = potential_residuals(mu, nu, cost, r.sol, pot);

    // Sum of |x - y|^p against the plan equals W_p^p.
    double disp = 0.0;
    for (const PlanEntry& e : r.sol.plan) {
      disp += e.mass * std::pow(cost.norm.eval(sub(mu.point(e.i), nu.point(e.j))), p);
    }
    r.displacement = std::abs(disp - std::pow(r.sol.wp, p)) / std::max(disp, 1e-300);

    // Plan partners of y lie in the c-superdifferential of psi at y.
    for (std::size_t j = 0; j < nu.size(); ++j) {
      std::vector<Vec> partners;
      for (const PlanEntry& e : r.sol.plan) {
        if (e.j == j) partners.push_back(mu.point(e.i));
      }
      const auto members =
          c_superdifferential_members(pot.psi, nu.points(), j, partners, cost);
      r.superdiff_failures += partners.size() - members.size();
    }
    rows[i] = std::move(r);
    log_debug("duality_gap instance " + std::to_string(i) + " done");
  });

  double max_gap = 0, max_feas = 0, max_slack = 0, max_fix = 0, max_marg = 0, max_disp = 0;
  std::size_t superdiff = 0;
  for (std::size_t i = 0; i < n_inst; ++i) {
    const Row& r = rows[i];
    const PotentialResiduals& s = r.res;
    rep.details.add({cell(i), cell(r.p), cell(r.m), cell(r.n), cell(r.sol.primal_cost),
                     cell(r.sol.wp), cell(s.duality_gap), cell(s.feasibility),
                     cell(s.slackness), cell(s.phi_fixpoint), cell(s.psi_fixpoint),
                     cell(s.marginals), cell(r.displacement), cell(r.superdiff_failures)});
    max_gap = std::max(max_gap, s.duality_gap);
    max_feas = std::max(max_feas, s.feasibility);
    max_slack = std::max(max_slack, s.slackness);
    max_fix = std::max({max_fix, s.phi_fixpoint, s.psi_fixpoint});
    max_marg = std::max(max_marg, s.marginals);
    max_disp = std::max(max_disp, r.displacement);
    superdiff += r.superdiff_failures;
    const std::string tag = "instance " + std::to_string(i) + ": ";
    if (s.duality_gap > tol(cfg, "gap")) rep.fail(tag + "duality gap " + cell(s.duality_gap));
    if (s.feasibility > tol(cfg, "feasibility")) rep.fail(tag + "dual infeasible");
    if (s.slackness > tol(cfg, "slackness")) rep.fail(tag + "slackness residual");
    if (std::max(s.phi_fixpoint, s.psi_fixpoint) > tol(cfg, "fixpoint")) {
      rep.fail(tag + "c-transform fixpoint residual");
    }
    if (s.marginals > tol(cfg, "feasibility")) rep.fail(tag + "plan marginals");
    if (r.displacement > tol(cfg, "gap")) rep.fail(tag + "displacement identity");
    if (r.superdiff_failures > 0) rep.fail(tag + "plan outside c-superdifferential");
  }
  rep.summary["results"] = {{"instances", n_inst},
                            {"max_gap", max_gap},
                            {"max_feasibility", max_feas},
                            {"max_slackness", max_slack},
                            {"max_fixpoint", max_fix},
                            {"max_marginals", max_marg},
                            {"max_displacement", max_disp},
                            {"superdifferential_failures", superdiff}};
  return rep;
}

// ------------------------------------------------------- potential_estimates

ExperimentReport run_potential_estimates(const ExperimentConfig& cfg, std::size_t jobs) {
  ExperimentReport rep;
  rep.details = Table({"instance", "p", "radius", "k_pr", "pairs", "points", "violations",
                       "min_lipschitz", "min_upper", "min_lower"});
  const std::vector<double> ps = p_values(cfg);
  const auto radii = cfg.params.at("radii").get<std::vector<double>>();
  const std::size_t n_inst = count(cfg, "instances");

  struct Row {
    double p, radius;
    PotentialEstimateReport est;
  };
  std::vector<Row> rows(n_inst);
  detail::parallel_for(n_inst, jobs, [&](std::size_t i) {
    CounterRng rng = instance_rng(cfg, i);
    const double radius = radii[i % radii.size()];
    const double p = ps[(i / radii.size()) % ps.size()];
    const Cost cost(cfg.cost.norm, p);
    const DiscreteMeasure ball =
        random_ball_measure(cost.norm, count(cfg, "nu_atoms"), radius, rng);
    const DiscreteMeasure other =
        random_ball_measure(cost.norm, count(cfg, "mu_atoms"), real(cfg, "mu_radius"), rng);
    const TransportSolution sol = solve_ot(ball, other, cost);
    const KantorovichPotentials pot = dual_potentials(ball, other, cost, sol);
    rows[i] = {p, radius,
               check_potential_estimates(ball, pot.phi, other, radius, cost,
                                         count(cfg, "sample_pairs"), rng.next_u64())};
  });

  std::size_t total_violations = 0, total_pairs = 0;
  double min_lip = std::numeric_limits<double>::infinity();
  double min_up = min_lip, min_low = min_lip;
  for (std::size_t i = 0; i < n_inst; ++i) {
    const PotentialEstimateReport& e = rows[i].est;
    rep.details.add({cell(i), cell(rows[i].p), cell(rows[i].radius), cell(e.k_pr),
                     cell(e.pairs), cell(e.points), cell(e.violations),
                     cell(e.min_lipschitz_residual), cell(e.min_upper_residual),
                     cell(e.min_lower_residual)});
    total_violations += e.violations;
    total_pairs += e.pairs;
    min_lip = std::min(min_lip, e.min_lipschitz_residual);
    min_up = std::min(min_up, e.min_upper_residual);
    min_low = std::min(min_low, e.min_lower_residual);
    const double worst = std::min({e.min_lipschitz_residual, e.min_upper_residual,
                                   e.min_lower_residual});
    if (e.violations > 0 || worst < -tol(cfg, "residual")) {
      rep.fail("instance " + std::to_string(i) + ": " + std::to_string(e.violations) +
               " estimate violations");
    }
  }
  rep.summary["results"] = {{"instances", n_inst},
                            {"pairs", total_pairs},
                            {"violations", total_violations},
                            {"min_lipschitz_residual", finite_or_null(min_lip)},
                            {"min_upper_residual", finite_or_null(min_up)},
                            {"min_lower_residual", finite_or_null(min_low)}};
  return rep;
}

// --------------------------------------------------------------- slope_check

CylinderFunction slope_function(const ExperimentConfig& cfg, int d, CounterRng& rng) {
  const std::string kind = cfg.params.at("function").get<std::string>();
  const double hw = real(cfg, "half_width");
  if (kind == "constant") {
    return CylinderFunction({SmoothScalarField::clamped_linear(Vec(d, 1.0), 1.0)},
                            OuterMap::constant(1, rng.uniform(-1.0, 1.0)));
  }
  if (kind == "linear") {
    Vec a = random_vector(d, 1.0, rng);
    double l1 = 0.0;
    for (double x : a) l1 += std::abs(x);
    const double level = l1 * (hw + 2.0) + 1.0;
    return CylinderFunction({SmoothScalarField::clamped_linear(std::move(a), level)},
                            OuterMap::identity_clamp(level + 1.0));
  }
  // Perturbed measures stay within the largest probe radius of the data.
  const auto radii = cfg.params.at("radii").get<std::vector<double>>();
  const double reach = *std::max_element(radii.begin(), radii.end());
  return random_cylinder(d, count(cfg, "fields"), hw + reach, rng);
}

ExperimentReport run_slope_check(const ExperimentConfig& cfg, std::size_t jobs) {
  ExperimentReport rep;
  rep.details = Table({"function", "p", "differential_norm", "lower", "lower_max_ratio",
                       "upper", "relative_width", "worst_pair_excess"});
  Table brackets({"function", "p", "radius", "max_ratio", "envelope", "ball_sup", "lower",
                  "differential_norm"});
  const std::vector<double> ps = p_values(cfg);
  const std::size_t n_fun = count(cfg, "functions");
  const int d = cfg.cost.dim();
  const auto t_schedule = cfg.params.at("t_schedule").get<std::vector<double>>();
  const auto radii = cfg.params.at("radii").get<std::vector<double>>();
  const std::vector<Vec> directions = direction_dictionary(cfg.cost.norm);

  struct Row {
    double p = 0, dn = 0;
    SlopeLowerReport lower;
    std::vector<SlopeUpperEntry> upper;
  };
  std::vector<Row> rows(n_fun);
  detail::parallel_for(n_fun, jobs, [&](std::size_t i) {
    CounterRng rng = instance_rng(cfg, i);
    const double p = ps[i % ps.size()];
    const Cost cost(cfg.cost.norm, p);
    const DiscreteMeasure mu =
        random_measure(d, count(cfg, "atoms"), real(cfg, "half_width"), rng);
    const CylinderFunction f = slope_function(cfg, d, rng);
    Row r;
    r.p = p;
    r.dn = differential_norm(f, mu, cost);
    r.lower = slope_lower_bound(f, mu, cost, real(cfg, "eps"), t_schedule, directions);
    r.upper = slope_upper_probe(f, mu, cost, radii, count(cfg, "pairs_per_radius"),
                                rng.next_u64());
    rows[i] = std::move(r);
    log_debug("slope_check function " + std::to_string(i) + " done");
  });

  double max_width = 0.0, max_excess = -std::numeric_limits<double>::infinity();
  double max_lower_excess = -std::numeric_limits<double>::infinity();
  json brackets_json = json::array();
  for (std::size_t i = 0; i < n_fun; ++i) {
    const Row& r = rows[i];
    const double upper = r.upper.empty() ? 0.0 : r.upper.back().max_ratio;
    const std::string tag = "function " + std::to_string(i) + ": ";
    double width = 0.0;
    if (r.dn > 0.0) {
      width = (std::max(upper, r.dn) - std::min(r.lower.value, r.dn)) / r.dn;
    } else if (upper > tol(cfg, "upper_excess") || r.lower.value > tol(cfg, "upper_excess")) {
      width = std::numeric_limits<double>::infinity();
    }
    double excess = -std::numeric_limits<double>::infinity();
    for (const SlopeUpperEntry& e : r.upper) {
      excess = std::max({excess, e.worst_pair_excess, e.max_ratio - e.ball_sup});
      brackets.add({cell(i), cell(r.p), cell(e.radius), cell(e.max_ratio), cell(e.envelope),
                    cell(e.ball_sup), cell(r.lower.value), cell(r.dn)});
    }
    const double lower_excess = r.lower.value - r.dn;
    rep.details.add({cell(i), cell(r.p), cell(r.dn), cell(r.lower.value),
                     cell(r.lower.max_ratio), cell(upper), cell(width), cell(excess)});
    brackets_json.push_back({{"function", i},
                             {"p", r.p},
                             {"differential_norm", r.dn},
                             {"lower", r.lower.value},
                             {"upper", upper},
                             {"relative_width", finite_or_null(width)}});
    max_width = std::max(max_width, width);
    max_excess = std::max(max_excess, excess);
    max_lower_excess = std::max(max_lower_excess, lower_excess);
    if (lower_excess > tol(cfg, "lower_roundoff") * std::max(1.0, r.dn)) {
      rep.fail(tag + "lower bound exceeds the differential norm");
    }
    if (!(width <= tol(cfg, "bracket_width"))) rep.fail(tag + "bracket too wide");
    if (excess > tol(cfg, "upper_excess")) rep.fail(tag + "probe ratio above its bound");
  }
  rep.plots.emplace("plot_brackets.csv", std::move(brackets));
  rep.summary["results"] = {{"functions", n_fun},
                            {"max_relative_width", finite_or_null(max_width)},
                            {"max_upper_excess", finite_or_null(max_excess)},
                            {"max_lower_excess", finite_or_null(max_lower_excess)},
                            {"brackets", brackets_json}};
  return rep;
}

// -------------------------------------------------------- maxpot_convergence

// Atom a has its first coordinate in the a-th of `atoms` equal strips.
DiscreteMeasure stratified_measure(int d, std::size_t atoms, double hw, CounterRng& rng) {
  std::vector<Vec> points(atoms, Vec(static_cast<std::size_t>(d)));
  Vec weights(atoms);
  const double strip = 2.0 * hw / static_cast<double>(atoms);
  for (std::size_t a = 0; a < atoms; ++a) {
    for (double& x : points[a]) x = rng.uniform(-hw, hw);
    points[a][0] = -hw + strip * (static_cast<double>(a) + rng.uniform());
    weights[a] = rng.uniform(0.2, 1.0);
  }
  return DiscreteMeasure(std::move(points), std::move(weights));
}

ExperimentReport run_maxpot_convergence(const ExperimentConfig& cfg, std::size_t jobs) {
  ExperimentReport rep;
  rep.details = Table({"battery", "grid_index", "F", "F_stderr", "G_final", "final_gap",
                       "combined_stderr", "monotone", "worst_excess", "grid_excess"});
  Table curves({"battery", "k", "G_k", "F", "stderr"});
  const int d = cfg.cost.dim();
  const Cost& cost = cfg.cost;
  const double hw = real(cfg, "half_width");
  const double radius = real(cfg, "nu_radius");
  const double mult = tol(cfg, "stderr_multiple");

  CounterRng rng(cfg.seed, CounterRng::stream_id("maxpot_convergence/measures"));
  const DiscreteMeasure nu = random_ball_measure(cost.norm, count(cfg, "nu_atoms"), radius, rng);
  std::vector<DiscreteMeasure> battery;
  for (std::size_t b = 0; b < count(cfg, "battery"); ++b) {
    battery.push_back(random_measure(d, count(cfg, "battery_atoms"), hw, rng));
  }
  const std::size_t grid_size = count(cfg, "grid_size");
  const bool include = cfg.params.at("include_battery").get<bool>();
  std::vector<DiscreteMeasure> grid;
  std::size_t next_b = 0;
  for (std::size_t h = 0; h < grid_size; ++h) {
    // Battery members spread evenly through the grid.
    const std::size_t slot = (next_b + 1) * grid_size / (battery.size() + 1);
    if (include && next_b < battery.size() && h + 1 >= slot) {
      grid.push_back(battery[next_b++]);
    } else {
      grid.push_back(stratified_measure(d, count(cfg, "battery_atoms"), hw, rng));
    }
  }

  const Mollifier moll(d, real(cfg, "eps"));
  log_info("building dictionary of " + std::to_string(grid.size()) + " potentials");
  const PotentialDictionary dict =
      build_dictionary(nu, radius, grid, moll, cost, count(cfg, "sample_n"),
                       CounterRng::mix64(cfg.seed ^ CounterRng::stream_id("dictionary")), jobs);
  if (cfg.params.at("save_dictionary").get<bool>()) {
    rep.files.emplace("dictionary.json", dict.to_json().dump(1) + "\n");
  }
  log_info("evaluating the battery");
  const ConvergenceReport conv = convergence_report(
      dict, battery, moll, CounterRng::mix64(cfg.seed ^ CounterRng::stream_id("f_estimate")),
      count(cfg, "resamples"), tol(cfg, "rel_tol"), jobs);

  json per = json::array();
  bool all_monotone = true;
  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_grid_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < conv.measures.size(); ++b) {
    const MeasureConvergence& mc = conv.measures[b];
    const std::string tag = "battery " + std::to_string(b) + ": ";
    double excess = -std::numeric_limits<double>::infinity();
    double grid_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < mc.g.size(); ++k) {
      const double se = mc.combined_stderr[k];
      excess = std::max(excess, mc.g[k].value - mc.f.value - mult * se);
      if (mc.grid_index && k >= *mc.grid_index) {
        grid_excess = std::max(grid_excess, mc.f.value - mc.g[k].value - mult * se);
      }
      curves.add({cell(b), cell(k + 1), cell(mc.g[k].value), cell(mc.f.value), cell(se)});
    }
    if (!mc.monotone) rep.fail(tag + "G_k decreased");
    if (excess > 0.0) rep.fail(tag + "G_k above F beyond the statistical margin");
    if (mc.grid_index && grid_excess > 0.0) rep.fail(tag + "gap on a grid member too large");
    all_monotone = all_monotone && mc.monotone;
    worst_excess = std::max(worst_excess, excess);
    if (mc.grid_index) worst_grid_excess = std::max(worst_grid_excess, grid_excess);
    const double se_final = mc.combined_stderr.empty() ? 0.0 : mc.combined_stderr.back();
    const double g_final = mc.g.empty() ? 0.0 : mc.g.back().value;
    rep.details.add({cell(b), mc.grid_index ? cell(*mc.grid_index) : std::string(),
                     cell(mc.f.value), cell(mc.f.stderr), cell(g_final), cell(mc.final_gap),
                     cell(se_final), mc.monotone ? "1" : "0", cell(excess),
                     mc.grid_index ? cell(grid_excess) : std::string()});
    per.push_back({{"battery", b},
                   {"grid_index", mc.grid_index ? json(*mc.grid_index) : json(nullptr)},
                   {"F", mc.f.value},
                   {"F_stderr", mc.f.stderr},
                   {"G_final", g_final},
                   {"final_gap", mc.final_gap},
                   {"combined_stderr", se_final},
                   {"monotone", mc.monotone}});
  }
  double worst_lip = -std::numeric_limits<double>::infinity();
  for (const LipschitzCheck& lc : conv.lipschitz) {
    const double slack = lc.lhs - lc.rhs;
    worst_lip = std::max(worst_lip, slack);
    if (slack > tol(cfg, "rel_tol") * std::max(1.0, lc.rhs)) {
      rep.fail("pair " + std::to_string(lc.a) + "," + std::to_string(lc.b) +
               ": Lipschitz bound exceeded");
    }
  }
  rep.plots.emplace("plot_curves.csv", std::move(curves));
  rep.summary["results"] = {{"dictionary_size", dict.size()},
                            {"kernel_moment", conv.kernel_moment},
                            {"monotone", all_monotone},
                            {"worst_excess", finite_or_null(worst_excess)},
                            {"worst_grid_excess", finite_or_null(worst_grid_excess)},
                            {"worst_lipschitz_slack", finite_or_null(worst_lip)},
                            {"battery", per}};
  return rep;
}

// ---------------------------------------------------------------- boas_suite

ExperimentReport run_boas_suite(const ExperimentConfig& cfg, std::size_t /*jobs*/) {
  ExperimentReport rep;
  rep.details = Table({"preset", "trial", "sobolev_residual"});
  Table para({"preset", "trial", "relative_residual"});
  const int d = cfg.cost.dim();
  const double hw = real(cfg, "half_width");
  const std::size_t pairs = count(cfg, "pairs");
  const std::size_t fields = count(cfg, "fields");
  const auto presets = cfg.params.at("presets").get<std::vector<std::vector<double>>>();

  json per = json::array();
  for (std::size_t k = 0; k < presets.size(); ++k) {
    const double pc = presets[k][0];
    const BoasParams bp(presets[k][1], presets[k][2]);
    const double q = presets[k][3];
    const Cost cost(cfg.cost.norm, pc / (pc - 1.0));
    const std::string tag = "preset " + std::to_string(k) + ": ";
    if (!bp.admits(q)) {
      rep.fail(tag + "parameters violate r' <= s <= q <= r");
      continue;
    }
    CounterRng rng = instance_rng(cfg, k);
    const MetaMeasure m = random_meta_measure(d, count(cfg, "meta_atoms"),
                                              count(cfg, "measure_atoms"), hw, rng);
    const Functional<CylinderFunction> j_lq = [&](const CylinderFunction& f) {
      double s = 0.0;
      for (const MetaAtom& a : m.atoms()) s += a.mass * std::pow(std::abs(eval_cylinder(f, a.measure)), q);
      return std::pow(s, 1.0 / q);
    };
    const Functional<CylinderFunction> j_pce = [&](const CylinderFunction& f) {
      return std::pow(pre_cheeger(f, m, cost, q), 1.0 / q);
    };
    const PairSampler<CylinderFunction> sampler = [&](CounterRng& r) {
      CylinderFunction u = random_cylinder(d, fields, hw, r);
      CylinderFunction v = random_cylinder(d, fields, hw, r);
      return std::make_pair(std::move(u), std::move(v));
    };
    const QSumReport qs = boas_qsum_preservation(j_lq, j_pce, q, bp, pairs, rng.next_u64(),
                                                 sampler);
    for (std::size_t t = 0; t < qs.residuals.size(); ++t) {
      rep.details.add({cell(k), cell(t), cell(qs.residuals[t])});
    }
    const double floor = -tol(cfg, "residual");
    if (qs.min_residual_second < floor) rep.fail(tag + "pre-Cheeger Boas residual negative");
    if (qs.min_residual_sum < floor) rep.fail(tag + "Sobolev Boas residual negative");
    if (qs.counterexamples > 0) rep.fail(tag + "q-sum counterexamples");

    json entry = {{"p_conj", pc},
                  {"r", bp.r},
                  {"s", bp.s},
                  {"q", q},
                  {"trials", qs.trials},
                  {"min_residual_lq", qs.min_residual_first},
                  {"min_residual_pce", qs.min_residual_second},
                  {"min_residual_sobolev", qs.min_residual_sum},
                  {"counterexamples", qs.counterexamples}};

    const bool hilbert = pc == 2.0 && q == 2.0 && cost.norm.kind() == NormKind::kEuclidean;
    if (cfg.params.at("parallelogram").get<bool>() && hilbert) {
      CounterRng prng(rng.next_u64(), CounterRng::stream_id("parallelogram"));
      double worst = 0.0;
      for (std::size_t t = 0; t < pairs; ++t) {
        const auto [f, g] = sampler(prng);
        const double lhs = pre_cheeger(combine(1.0, f, 1.0, g), m, cost, 2.0) +
                           pre_cheeger(combine(1.0, f, -1.0, g), m, cost, 2.0);
        const double rhs = 2.0 * pre_cheeger(f, m, cost, 2.0) + 2.0 * pre_cheeger(g, m, cost, 2.0);
        const double rel = std::abs(lhs - rhs) / std::max(rhs, 1e-300);
        worst = std::max(worst, rel);
        para.add({cell(k), cell(t), cell(rel)});
      }
      if (worst > tol(cfg, "parallelogram")) rep.fail(tag + "parallelogram identity residual");
      entry["parallelogram_max_relative"] = worst;
    }
    per.push_back(std::move(entry));
  }
  rep.plots.emplace("plot_parallelogram.csv", std::move(para));
  rep.summary["results"] = {{"presets", per}};
  return rep;
}

// ---------------------------------------------------- projection_convergence

ExperimentReport run_projection_convergence(const ExperimentConfig& cfg, std::size_t jobs) {
  ExperimentReport rep;
  rep.details = Table({"instance", "h", "w_projected", "w_full"});
  const int d = cfg.cost.dim();
  const std::size_t n_inst = count(cfg, "instances");
  const double hw = real(cfg, "half_width");
  const double eps = tol(cfg, "monotone");

  std::vector<std::vector<double>> ws(n_inst);
  std::vector<double> full(n_inst);
  detail::parallel_for(n_inst, jobs, [&](std::size_t i) {
    CounterRng rng = instance_rng(cfg, i);
    const DiscreteMeasure mu = random_measure(d, count(cfg, "atoms"), hw, rng);
    const DiscreteMeasure nu = random_measure(d, count(cfg, "atoms"), hw, rng);
    full[i] = wasserstein(mu, nu, cfg.cost);
    for (int h = 1; h <= d; ++h) {
      const Cost ch(restrict_norm(cfg.cost.norm, h), cfg.cost.p);
      ws[i].push_back(wasserstein(project_measure(mu, h), project_measure(nu, h), ch));
    }
  });

  double worst_drop = 0.0, worst_final = 0.0;
  for (std::size_t i = 0; i < n_inst; ++i) {
    for (std::size_t h = 0; h < ws[i].size(); ++h) {
      rep.details.add({cell(i), cell(h + 1), cell(ws[i][h]), cell(full[i])});
      if (h > 0) worst_drop = std::max(worst_drop, ws[i][h - 1] - ws[i][h]);
    }
    const double final_err = std::abs(ws[i].back() - full[i]);
    worst_final = std::max(worst_final, final_err);
    const std::string tag = "instance " + std::to_string(i) + ": ";
    for (std::size_t h = 1; h < ws[i].size(); ++h) {
      if (ws[i][h - 1] - ws[i][h] > eps) rep.fail(tag + "projected W decreased in h");
    }
    if (final_err > eps) rep.fail(tag + "W at h = d differs from the full W");
  }
  rep.summary["results"] = {{"instances", n_inst},
                            {"max_decrease", worst_drop},
                            {"max_final_error", worst_final}};
  return rep;
}

// ------------------------------------------------------------- modulus_probe

ExperimentReport run_modulus_probe(const ExperimentConfig& cfg, std::size_t /*jobs*/) {
  ExperimentReport rep;
  rep.details = Table({"trial", "delta", "gap"});
  Table moduli({"eps", "envelope"});
  const int d = cfg.cost.dim();
  const double t = real(cfg, "t");
  const auto eps_grid = cfg.params.at("eps_grid").get<std::vector<double>>();
  const std::size_t trials = count(cfg, "trials");
  CounterRng rng = instance_rng(cfg, 0);

  ModulusReport mr;
  if (cfg.params.at("functional").get<std::string>() == "norm") {
    const Functional<Vec> j = [&](const Vec& v) { return cfg.cost.norm.eval(v); };
    const PairSampler<Vec> sampler = [d](CounterRng& r) {
      return std::make_pair(random_vector(d, 1.0, r), random_vector(d, 1.0, r));
    };
    mr = convexity_modulus_probe(j, t, trials, rng.next_u64(), sampler, eps_grid);
  } else {
    const double hw = real(cfg, "half_width");
    const double q = real(cfg, "q");
    const MetaMeasure m = random_meta_measure(d, count(cfg, "meta_atoms"),
                                              count(cfg, "measure_atoms"), hw, rng);
    const std::size_t fields = count(cfg, "fields");
    const Functional<CylinderFunction> j = [&](const CylinderFunction& f) {
      return std::pow(pre_cheeger(f, m, cfg.cost, q), 1.0 / q);
    };
    const PairSampler<CylinderFunction> sampler = [&](CounterRng& r) {
      CylinderFunction u = random_cylinder(d, fields, hw, r);
      CylinderFunction v = random_cylinder(d, fields, hw, r);
      return std::make_pair(std::move(u), std::move(v));
    };
    mr = convexity_modulus_probe(j, t, trials, rng.next_u64(), sampler, eps_grid);
  }

  for (std::size_t k = 0; k < mr.rows.size(); ++k) {
    rep.details.add({cell(k), cell(mr.rows[k].delta), cell(mr.rows[k].gap)});
  }
  json env = json::array();
  bool positive = true;
  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    const double v = mr.envelope[e];
    moduli.add({cell(eps_grid[e]), std::isfinite(v) ? cell(v) : std::string()});
    env.push_back({{"eps", eps_grid[e]}, {"envelope", finite_or_null(v)}});
    if (std::isfinite(v) && !(v > 0.0)) positive = false;
  }
  if (mr.homogeneity_defect > tol(cfg, "homogeneity")) {
    rep.fail("functional is not positively homogeneous on the samples");
  }
  if (cfg.params.at("expect_positive").get<bool>() && !positive) {
    rep.fail("envelope is not strictly positive");
  }
  rep.plots.emplace("plot_moduli.csv", std::move(moduli));
  rep.summary["results"] = {{"pairs", mr.rows.size()},
                            {"homogeneity_defect", mr.homogeneity_defect},
                            {"strictly_positive", positive},
                            {"envelope", env}};
  return rep;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, std::size_t jobs) {
  log_info("running " + cfg.experiment);
  ExperimentReport rep;
  const std::string& e = cfg.experiment;
  if (e == "duality_gap") {
    rep = run_duality_gap(cfg, jobs);
  } else if (e == "potential_estimates") {
    rep = run_potential_estimates(cfg, jobs);
  } else if (e == "slope_check") {
    rep = run_slope_check(cfg, jobs);
  } else if (e == "maxpot_convergence") {
    rep = run_maxpot_convergence(cfg, jobs);
  } else if (e == "boas_suite") {
    rep = run_boas_suite(cfg, jobs);
  } else if (e == "projection_convergence") {
    rep = run_projection_convergence(cfg, jobs);
  } else if (e == "modulus_probe") {
    rep = run_modulus_probe(cfg, jobs);
  } else {
    throw InvalidArgument("unknown experiment '" + e + "'");
  }
  rep.experiment = e;
  rep.summary["schema_version"] = cfg.schema_version;
  rep.summary["experiment"] = e;
  rep.summary["seed"] = cfg.seed;
  rep.summary["cost"] = to_json(cfg.cost);
  rep.summary["params"] = cfg.params;
  rep.summary["tolerances"] = cfg.tolerances;
  rep.summary["violations"] = rep.violations;
  rep.summary["failures"] = rep.failures;
  rep.summary["status"] = rep.violations == 0 ? "pass" : "fail";
  for (const std::string& f : rep.failures) log_warn(e + ": " + f);
  return rep;
}

void emit_plot_data(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [name, table] : report.plots) write_file(dir / name, table.to_csv());
}

void write_report(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file(dir / "summary.json", report.summary.dump(2) + "\n");
  write_file(dir / "details.csv", report.details.to_csv());
  for (const auto& [name, text] : report.files) write_file(dir / name, text);
  emit_plot_data(report, dir);
}

}  // namespace wslab
