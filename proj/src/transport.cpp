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

#include "wslab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "network_simplex.hpp"
#include "wslab/error.hpp"
#include "wslab/rng.hpp"

namespace wslab {
namespace {

void check_dims(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                const Cost& cost) {
  require_dim(static_cast<std::size_t>(mu.dim()),
              static_cast<std::size_t>(cost.dim()), "transport: mu");
  require_dim(static_cast<std::size_t>(nu.dim()),
              static_cast<std::size_t>(cost.dim()), "transport: nu");
}

double max_abs(const Vec& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double gap_scale(double primal, const Vec& c) {
  return std::max({std::abs(primal), 1e-12 * max_abs(c),
                   std::numeric_limits<double>::min()});
}

double dual_value(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                  const KantorovichPotentials& pot) {
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) s += mu.weight(i) * pot.phi[i];
  for (std::size_t j = 0; j < nu.size(); ++j) s += nu.weight(j) * pot.psi[j];
  return s;
}

}  // namespace

std::vector<Vec> TransportSolution::dense_plan() const {
  std::vector<Vec> out(rows, Vec(cols, 0.0));
  for (const PlanEntry& e : plan) out[e.i][e.j] = e.mass;
  return out;
}

std::vector<double> cost_matrix(const DiscreteMeasure& mu,
                                const DiscreteMeasure& nu, const Cost& cost) {
  check_dims(mu, nu, cost);
  std::vector<double> c(mu.size() * nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      c[i * nu.size() + j] = cost(mu.point(i), nu.point(j));
    }
  }
  return c;
}

TransportSolution solve_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const Cost& cost, std::size_t max_iterations) {
  const std::vector<double> c = cost_matrix(mu, nu, cost);
  const std::size_t m = mu.size();
  const std::size_t n = nu.size();
  if (max_iterations == 0) max_iterations = std::max<std::size_t>(100000, 20 * m * n);
  detail::SimplexResult r =
      detail::solve_transport_lp(mu.weights(), nu.weights(), c, max_iterations);
  if (r.artificial_flow > 1e-12) {
    throw ConvergenceError("transport solver left artificial flow " +
                           std::to_string(r.artificial_flow));
  }
  TransportSolution sol;
  sol.rows = m;
  sol.cols = n;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double f = r.flow[i * n + j];
      if (f > 0.0) {
        sol.plan.push_back({i, j, f});
        sol.primal_cost += f * c[i * n + j];
      }
    }
  }
  sol.wp = std::pow(cost.p * std::max(0.0, sol.primal_cost), 1.0 / cost.p);
  sol.solver_phi = std::move(r.phi);
  sol.solver_psi = std::move(r.psi);
  sol.iterations = r.iterations;
  return sol;
}

double wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                   const Cost& cost) {
  return solve_ot(mu, nu, cost).wp;
}

Vec c_transform(const Vec& values, const std::vector<Vec>& from,
                const std::vector<Vec>& to, const Cost& cost) {
  require_dim(values.size(), from.size(), "c_transform values");
  if (from.empty()) throw InvalidArgument("c_transform needs a nonempty support");
  Vec out(to.size(), std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < to.size(); ++j) {
    for (std::size_t i = 0; i < from.size(); ++i) {
      out[j] = std::min(out[j], cost(from[i], to[j]) - values[i]);
    }
  }
  return out;
}

KantorovichPotentials dual_potentials(const DiscreteMeasure& mu,
                                      const DiscreteMeasure& nu,
                                      const Cost& cost,
                                      const TransportSolution& sol) {
  const std::vector<double> c = cost_matrix(mu, nu, cost);
  const std::size_t m = mu.size();
  const std::size_t n = nu.size();
  require_dim(sol.solver_phi.size(), m, "dual_potentials phi");
  require_dim(sol.solver_psi.size(), n, "dual_potentials psi");

  KantorovichPotentials pot;
  pot.phi = sol.solver_phi;
  pot.psi = sol.solver_psi;
  for (int round = 0; round < 8; ++round) {
    Vec psi(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        psi[j] = std::min(psi[j], c[i * n + j] - pot.phi[i]);
      }
    }
    Vec phi(m, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        phi[i] = std::min(phi[i], c[i * n + j] - psi[j]);
      }
    }
    const bool fixed = phi == pot.phi && psi == pot.psi;
    pot.phi = std::move(phi);
    pot.psi = std::move(psi);
    if (fixed) break;
  }

  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    const double r = cost.norm.eval(nu.point(j));
    if (r < best) {
      best = r;
      pot.anchor = j;
    }
  }
  const double shift = pot.psi[pot.anchor];
  for (double& v : pot.psi) v -= shift;
  for (double& v : pot.phi) v += shift;
  pot.psi[pot.anchor] = 0.0;

  const double gap = std::abs(dual_value(mu, nu, pot) - sol.primal_cost);
  if (gap > 1e-8 * gap_scale(sol.primal_cost, c)) {
    throw InvariantViolation("duality gap " + std::to_string(gap) +
                             " after potential tightening");
  }
  return pot;
}

PotentialResiduals potential_residuals(const DiscreteMeasure& mu,
                                       const DiscreteMeasure& nu,
                                       const Cost& cost,
                                       const TransportSolution& sol,
                                       const KantorovichPotentials& pot) {
  const std::vector<double> c = cost_matrix(mu, nu, cost);
  const std::size_t m = mu.size();
  const std::size_t n = nu.size();
  PotentialResiduals r;
  r.duality_gap = std::abs(dual_value(mu, nu, pot) - sol.primal_cost) /
                  gap_scale(sol.primal_cost, c);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      r.feasibility = std::max(r.feasibility, pot.phi[i] + pot.psi[j] - c[i * n + j]);
    }
  }
  Vec row(m, 0.0);
  Vec col(n, 0.0);
  for (const PlanEntry& e : sol.plan) {
    if (e.mass > 1e-12) {
      r.slackness = std::max(
          r.slackness, std::abs(pot.phi[e.i] + pot.psi[e.j] - c[e.i * n + e.j]));
    }
    row[e.i] += e.mass;
    col[e.j] += e.mass;
  }
  for (std::size_t i = 0; i < m; ++i) {
    r.marginals = std::max(r.marginals, std::abs(row[i] - mu.weight(i)));
  }
  for (std::size_t j = 0; j < n; ++j) {
    r.marginals = std::max(r.marginals, std::abs(col[j] - nu.weight(j)));
  }
  for (std::size_t i = 0; i < m; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) best = std::min(best, c[i * n + j] - pot.psi[j]);
    r.phi_fixpoint = std::max(r.phi_fixpoint, std::abs(pot.phi[i] - best));
  }
  for (std::size_t j = 0; j < n; ++j) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) best = std::min(best, c[i * n + j] - pot.phi[i]);
    r.psi_fixpoint = std::max(r.psi_fixpoint, std::abs(pot.psi[j] - best));
  }
  return r;
}

double kp_constant(double p) {
  if (!(p > 1.0)) throw InvalidArgument("K_p needs p > 1");
  const double s = 1.0 / (std::pow(2.0, 1.0 / (p - 1.0)) - 1.0);
  return std::max(0.5, 0.5 * std::pow(1.0 + s, p) - std::pow(s, p));
}

double kpr_constant(double p, double radius) {
  const double growth =
      std::pow(2.0, p) * std::pow(radius, p - 1.0) + std::pow(2.0, p - 1.0);
  const double coercive = (kp_constant(p) + 1.0) * std::pow(radius, p) / p;
  return std::max(growth, coercive);
}

PotentialEstimateReport check_potential_estimates(
    const DiscreteMeasure& ball, const Vec& phi_on_ball,
    const DiscreteMeasure& other, double radius, const Cost& cost,
    std::size_t sample_pairs, std::uint64_t seed) {
  require_dim(phi_on_ball.size(), ball.size(), "check_potential_estimates phi");
  if (!(radius > 0.0)) throw InvalidArgument("ball radius must be positive");
  if (ball.support_radius(cost.norm) > radius * (1.0 + 1e-12)) {
    throw InvalidArgument("reference measure is not supported in the ball");
  }
  const double p = cost.p;
  const int d = cost.dim();
  auto psi_raw = [&](ConstSpan y) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ball.size(); ++i) {
      best = std::min(best, cost(ball.point(i), y) - phi_on_ball[i]);
    }
    return best;
  };
  const Vec origin(d, 0.0);
  const double shift = psi_raw(origin);
  auto psi = [&](ConstSpan y) { return psi_raw(y) - shift; };

  PotentialEstimateReport rep;
  rep.k_pr = kpr_constant(p, radius);
  rep.min_lipschitz_residual = std::numeric_limits<double>::infinity();
  rep.min_upper_residual = std::numeric_limits<double>::infinity();
  rep.min_lower_residual = std::numeric_limits<double>::infinity();
  const double box = 2.0 * std::max(radius, other.support_radius(Norm::euclidean(d)));
  CounterRng rng(seed, CounterRng::stream_id("potential_estimates"));
  Vec dir(d);
  auto draw = [&]() -> Vec {
    if (rng.uniform() < 0.5) return other.point(rng.below(other.size()));
    rng.unit_vector(dir);
    const double r = box * std::pow(rng.uniform(), 1.0 / d);
    return scaled(r, dir);
  };
  constexpr double kTol = -1e-9;
  auto point_check = [&](const Vec& y, double value) {
    const double ny = std::pow(cost.norm.eval(y), p);
    const double upper = rep.k_pr * (1.0 + ny) - std::abs(value);
    const double lower = value - (ny / (2.0 * p) - rep.k_pr);
    rep.min_upper_residual = std::min(rep.min_upper_residual, upper);
    rep.min_lower_residual = std::min(rep.min_lower_residual, lower);
    if (upper < kTol) ++rep.violations;
    if (lower < kTol) ++rep.violations;
    ++rep.points;
  };
  for (std::size_t s = 0; s < sample_pairs; ++s) {
    const Vec y1 = draw();
    const Vec y2 = draw();
    const double v1 = psi(y1);
    const double v2 = psi(y2);
    const double n1 = cost.norm.eval(y1);
    const double n2 = cost.norm.eval(y2);
    const double bound = cost.norm.eval(sub(y1, y2)) * std::pow(2.0, p - 1.0) *
                         (2.0 * std::pow(radius, p - 1.0) + std::pow(n1, p - 1.0) +
                          std::pow(n2, p - 1.0));
    const double lip = bound - std::abs(v1 - v2);
    rep.min_lipschitz_residual = std::min(rep.min_lipschitz_residual, lip);
    if (lip < kTol) ++rep.violations;
    ++rep.pairs;
    point_check(y1, v1);
    point_check(y2, v2);
  }
  return rep;
}

std::vector<std::size_t> c_superdifferential_members(
    const Vec& psi, const std::vector<Vec>& grid, std::size_t y_index,
    const std::vector<Vec>& candidates, const Cost& cost,
    std::optional<double> tol) {
  require_dim(psi.size(), grid.size(), "c_superdifferential psi");
  if (y_index >= grid.size()) throw InvalidArgument("y index outside the grid");
  const Vec& y = grid[y_index];
  const double t = tol.value_or(1e-8 * (1.0 + std::abs(psi[y_index])));
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const Vec& x = candidates[k];
    const double base = psi[y_index] - cost(y, x);
    bool member = true;
    for (std::size_t z = 0; z < grid.size() && member; ++z) {
      member = psi[z] <= base + cost(grid[z], x) + t;
    }
    if (member) out.push_back(k);
  }
  return out;
}

nlohmann::json instance_to_json(const DiscreteMeasure& mu,
                                const DiscreteMeasure& nu, const Cost& cost) {
  return {{"mu", to_json(mu)}, {"nu", to_json(nu)}, {"cost", to_json(cost)}};
}

nlohmann::json to_json(const TransportSolution& sol) {
  nlohmann::json plan = nlohmann::json::array();
  for (const PlanEntry& e : sol.plan) plan.push_back({e.i, e.j, e.mass});
  return {{"rows", sol.rows},
          {"cols", sol.cols},
          {"primal_cost", sol.primal_cost},
          {"wp", sol.wp},
          {"plan", plan}};
}

}  // namespace wslab
