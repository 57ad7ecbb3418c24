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


// Runs the release acceptance checks and prints one PASS/FAIL line each.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "wslab/config.hpp"
#include "wslab/cylinder.hpp"
#include "wslab/energy.hpp"
#include "wslab/error.hpp"
#include "wslab/experiments.hpp"
#include "wslab/norms.hpp"
#include "wslab/random_instances.hpp"
#include "wslab/rng.hpp"
#include "wslab/transport.hpp"

namespace {

using nlohmann::json;
using wslab::Cost;
using wslab::CounterRng;
using wslab::Norm;
using wslab::Vec;

const double kInf = std::numeric_limits<double>::infinity();

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double rel(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

std::size_t jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

wslab::ExperimentConfig config(const std::string& name) {
  return wslab::load_config(std::string(WSLAB_SOURCE_DIR) + "/configs/" + name + ".toml");
}

Outcome from_report(const wslab::ExperimentReport& rep, bool ok, std::string detail) {
  if (rep.violations > 0) {
    detail += "; " + std::to_string(rep.violations) + " violation(s)";
    if (!rep.failures.empty()) detail += ", first: " + rep.failures.front();
  }
  return {ok && rep.violations == 0 && rep.summary.at("status") == "pass", detail};
}

// 1
Outcome duality_map_identity() {
  CounterRng rng(101, CounterRng::stream_id("acceptance/duality_map"));
  double worst_pair = 0.0, worst_norm = 0.0;
  std::size_t evaluated = 0, kinks = 0;
  for (int d : {2, 4, 8}) {
    Vec w(d);
    for (int i = 0; i < d; ++i) w[i] = 0.5 + 0.25 * i;
    const std::vector<Norm> norms{Norm::euclidean(d),  Norm::p_norm(d, 3.0),
                                  Norm::p_norm(d, 1.5), Norm::p_norm(d, kInf),
                                  Norm::one_norm(d),    Norm::weighted_p(w, 2.5)};
    for (const Norm& n : norms) {
      for (double p : {1.5, 2.0, 3.0}) {
        const Cost cost(n, p);
        for (int t = 0; t < 1000; ++t) {
          Vec v = wslab::random_vector(d, 1.0, rng);
          const double scale = std::pow(10.0, rng.uniform(-2.0, 2.0));
          for (double& x : v) x *= scale;
          Vec j;
          try {
            j = wslab::duality_map(cost, v);
          } catch (const wslab::NotDifferentiable&) {
            ++kinks;
            continue;
          }
          const double target = std::pow(n.eval_dual(v), cost.p_conj());
          worst_pair = std::max(worst_pair, rel(wslab::dot(j, v), target));
          worst_norm = std::max(worst_norm, rel(std::pow(n.eval(j), p), target));
          ++evaluated;
        }
      }
    }
  }
  return {worst_pair <= 1e-9 && worst_norm <= 1e-9 && kinks == 0,
          std::to_string(evaluated) + " covectors, max rel <j,v> " + fmt(worst_pair) +
              ", |j|^p " + fmt(worst_norm) + " (tol 1e-9)"};
}

// 2
Outcome duality_gap() {
  auto cfg = config("duality_gap");
  cfg.params["instances"] = 100;
  cfg.params["max_atoms"] = 50;
  cfg.params["p_values"] = {2.0, 2.5, 3.0};
  cfg.tolerances = {{"gap", 1e-8}, {"feasibility", 1e-8}, {"slackness", 1e-8},
                    {"fixpoint", 1e-10}};
  const auto rep = wslab::run_experiment(cfg, jobs());
  const json& r = rep.summary.at("results");
  const double gap = r.at("max_gap"), feas = r.at("max_feasibility"),
               slack = r.at("max_slackness"), fix = r.at("max_fixpoint");
  return from_report(rep, gap <= 1e-8 && feas <= 1e-8 && slack <= 1e-8 && fix <= 1e-10,
                     "gap " + fmt(gap) + ", feasibility " + fmt(feas) + ", slackness " +
                         fmt(slack) + ", fixpoint " + fmt(fix));
}

// 3
Outcome potential_estimates() {
  auto cfg = config("potential_estimates");
  cfg.params["instances"] = 20;
  cfg.params["radii"] = {1.0, 2.0};
  cfg.params["p_values"] = {2.0, 2.5};
  cfg.params["sample_pairs"] = 10000;
  const auto rep = wslab::run_experiment(cfg, jobs());
  const json& r = rep.summary.at("results");
  const std::size_t v = r.at("violations");
  return from_report(rep, v == 0,
                     std::to_string(r.at("pairs").get<std::size_t>()) + " pairs, " +
                         std::to_string(v) + " violations");
}

// 4
Outcome slope_bracket() {
  auto cfg = config("slope_check");
  cfg.params["functions"] = 10;
  cfg.params["function"] = "random";
  cfg.params["p_values"] = {2.0, 3.0};
  cfg.tolerances["bracket_width"] = 0.05;
  if (cfg.cost.dim() != 2) return {false, "config is not two-dimensional"};
  const auto rep = wslab::run_experiment(cfg, jobs());
  double width = 0.0;
  bool lower_ok = true;
  for (const json& b : rep.summary.at("results").at("brackets")) {
    width = std::max(width, b.at("relative_width").get<double>());
    lower_ok = lower_ok && b.at("lower").get<double>() <= b.at("differential_norm").get<double>();
  }
  return from_report(rep, width <= 0.05 && lower_ok,
                     "max relative width " + fmt(width) + " (tol 0.05), lower <= |DF| " +
                         (lower_ok ? "always" : "violated"));
}

// 5
Outcome chain_rule() {
  CounterRng rng(505, CounterRng::stream_id("acceptance/chain_rule"));
  const std::vector<Cost> costs{Cost(Norm::euclidean(2), 2.0), Cost(Norm::p_norm(2, 3.0), 2.5),
                                Cost(Norm::p_norm(3, 1.5), 3.0), Cost(Norm::one_norm(2), 1.5)};
  double worst = 0.0;
  std::size_t failures = 0;
  for (int t = 0; t < 200; ++t) {
    const Cost& cost = costs[t % costs.size()];
    const int d = cost.dim();
    const auto f = wslab::random_cylinder(d, 3, 1.0, rng);
    const auto mu0 = wslab::random_measure(d, 2 + rng.below(5), 1.0, rng);
    const auto mu1 = wslab::random_measure(d, 2 + rng.below(5), 1.0, rng);
    const auto plan = wslab::solve_ot(mu0, mu1, cost);
    const double s = rng.uniform(0.05, 0.95);
    const double a = wslab::derivative_along_curve(f, mu0, mu1, plan, s);
    const double h = 1e-5;
    const double fd =
        (wslab::eval_cylinder(f, wslab::geodesic_interpolate(mu0, mu1, plan, s + h)) -
         wslab::eval_cylinder(f, wslab::geodesic_interpolate(mu0, mu1, plan, s - h))) /
        (2.0 * h);
    const double err = std::abs(a - fd);
    if (err > 1e-3 * std::abs(a) + 1e-9) ++failures;
    if (std::abs(a) > 1e-6) worst = std::max(worst, err / std::abs(a));
  }
  return {failures == 0, "200 triples, max relative error " + fmt(worst) + ", " +
                             std::to_string(failures) + " outside 1e-3 |a| + 1e-9"};
}

// 6
Outcome parallelogram() {
  CounterRng rng(606, CounterRng::stream_id("acceptance/parallelogram"));
  const Cost cost(Norm::euclidean(2), 2.0);
  const auto m = wslab::random_meta_measure(2, 10, 4, 1.0, rng);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto f = wslab::random_cylinder(2, 2, 1.0, rng);
    const auto g = wslab::random_cylinder(2, 2, 1.0, rng);
    auto e = [&](const wslab::CylinderFunction& h) { return wslab::pre_cheeger(h, m, cost, 2.0); };
    const double lhs = e(wslab::combine(1.0, f, 1.0, g)) + e(wslab::combine(1.0, f, -1.0, g));
    const double rhs = 2.0 * e(f) + 2.0 * e(g);
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(rhs, 1e-300));
  }
  return {worst <= 1e-8, "100 pairs, max relative residual " + fmt(worst) + " (tol 1e-8)"};
}

// 7
Outcome boas() {
  auto cfg = config("boas_suite");
  cfg.params["pairs"] = 500;
  cfg.params["presets"] = {{2.0, 2.0, 2.0, 2.0}, {3.0, 3.0, 1.5, 2.0}};
  cfg.tolerances["residual"] = 1e-9;
  const auto rep = wslab::run_experiment(cfg, jobs());
  double worst = kInf;
  std::size_t counter = 0;
  for (const json& p : rep.summary.at("results").at("presets")) {
    for (const char* key : {"min_residual_lq", "min_residual_pce", "min_residual_sobolev"}) {
      worst = std::min(worst, p.at(key).get<double>());
    }
    counter += p.at("counterexamples").get<std::size_t>();
  }
  return from_report(rep, worst >= -1e-9 && counter == 0,
                     "min residual " + fmt(worst) + " (tol -1e-9), " + std::to_string(counter) +
                         " q-sum counterexamples");
}

// 8
Outcome maxpot() {
  auto cfg = config("maxpot_convergence");
  cfg.params["grid_size"] = 40;
  cfg.params["battery"] = 5;
  cfg.params["include_battery"] = true;
  cfg.params["eps"] = 0.05;
  cfg.params["sample_n"] = 2000;
  cfg.params["resamples"] = 200;
  cfg.tolerances["stderr_multiple"] = 3.0;
  const auto rep = wslab::run_experiment(cfg, jobs());
  const json& r = rep.summary.at("results");
  std::size_t in_grid = 0;
  for (const json& b : r.at("battery")) in_grid += b.at("grid_index").is_null() ? 0 : 1;
  const bool mono = r.at("monotone");
  const double excess = r.at("worst_excess").get<double>();
  const double grid = r.at("worst_grid_excess").get<double>();
  return from_report(rep, mono && excess <= 0.0 && grid <= 0.0 && in_grid == 5,
                     std::string("monotone ") + (mono ? "yes" : "no") +
                         ", max(G_k - F - 3se) " + fmt(excess) + ", max(gap - 3se) on grid " +
                         fmt(grid) + ", battery members in grid " + std::to_string(in_grid));
}

// 9
Outcome projection() {
  auto cfg = config("projection_convergence");
  cfg.tolerances["monotone"] = 1e-8;
  const bool sup_norm = cfg.cost.norm.kind() == wslab::NormKind::kPNorm &&
                        std::isinf(cfg.cost.norm.exponent()) && cfg.cost.dim() == 6;
  const auto rep = wslab::run_experiment(cfg, jobs());
  const json& r = rep.summary.at("results");
  const double dec = r.at("max_decrease"), fin = r.at("max_final_error");
  return from_report(rep, sup_norm && dec <= 1e-8 && fin <= 1e-8,
                     "max decrease " + fmt(dec) + ", |W(pi^d) - W| " + fmt(fin) +
                         (sup_norm ? "" : ", config is not the d=6 sup norm"));
}

// 10
Outcome smoothed_family() {
  CounterRng rng(1010, CounterRng::stream_id("acceptance/smoothed"));
  const Norm base = Norm::p_norm(2, 4.0);
  const std::vector<int> ks{5, 10, 20, 40};
  std::vector<Norm> fam;
  for (int k : ks) fam.push_back(Norm::smoothed(base, k));
  std::vector<double> mean_gap(ks.size(), 0.0);
  std::size_t order_fail = 0;
  for (int t = 0; t < 1000; ++t) {
    const Vec x = wslab::random_vector(2, 2.0, rng);
    const double b = base.eval(x);
    double prev = 0.0;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      const double v = fam[i].eval(x);
      // Gauges are evaluated by root finding; allow relative roundoff.
      if (v < prev - 1e-10 * v) ++order_fail;
      if (v > b * (1.0 + 1e-10)) ++order_fail;
      prev = v;
      mean_gap[i] += (b - v) / 1000.0;
    }
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < ks.size(); ++i) decreasing = decreasing && mean_gap[i] < mean_gap[i - 1];
  std::string gaps;
  for (double g : mean_gap) gaps += (gaps.empty() ? "" : ", ") + fmt(g);
  return {order_fail == 0 && decreasing,
          std::to_string(order_fail) + " order violations, mean gap by k [" + gaps + "]"};
}

// 11
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / ("wslab_acceptance_" + std::to_string(
                                                         std::chrono::steady_clock::now()
                                                             .time_since_epoch()
                                                             .count()));
  std::size_t identical = 0, total = 0;
  std::string detail;
  for (const char* name : {"projection_convergence", "boas_suite"}) {
    std::string runs[2];
    for (int r = 0; r < 2; ++r) {
      const fs::path out = root / (std::string(name) + "_" + std::to_string(r));
      const std::string cmd = std::string("\"") + WSLAB_CLI + "\" run \"" + WSLAB_SOURCE_DIR +
                              "/configs/" + name + ".toml\" --out \"" + out.string() +
                              "\" > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) detail += std::string(name) + " exited nonzero; ";
      runs[r] = slurp(out / "summary.json");
    }
    ++total;
    if (!runs[0].empty() && runs[0] == runs[1]) ++identical;
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  return {identical == total && detail.empty(),
          detail + std::to_string(identical) + "/" + std::to_string(total) +
              " configs byte-identical across two runs"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "duality-map identity", 1.0, duality_map_identity},
      {2, "zero duality gap and potential invariants", 30.0, duality_gap},
      {3, "potential estimates", 60.0, potential_estimates},
      {4, "metric slope bracket", 300.0, slope_bracket},
      {5, "chain-rule derivatives", 30.0, chain_rule},
      {6, "pre-Cheeger parallelogram identity", 10.0, parallelogram},
      {7, "Boas suites and q-sum preservation", 60.0, boas},
      {8, "max-of-potentials convergence", 600.0, maxpot},
      {9, "projection monotone contraction", 60.0, projection},
      {10, "smoothed-norm monotone family", 60.0, smoothed_family},
      {11, "CLI determinism", 1.0, determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = secs <= c.budget_s;
    const bool pass = o.pass && in_budget;
    if (!pass) ++failed;
    std::printf("[%s] %2d %s: %s; %.2f s (budget %.0f s)%s\n", pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), o.detail.c_str(), secs, c.budget_s,
                in_budget ? "" : " over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
