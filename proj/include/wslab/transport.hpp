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

#ifndef WSLAB_TRANSPORT_HPP_
#define WSLAB_TRANSPORT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "wslab/measures.hpp"
#include "wslab/norms.hpp"
#include "wslab/vec.hpp"

namespace wslab {

struct PlanEntry {
  std::size_t i;
  std::size_t j;
  double mass;
};

// Optimal coupling of (mu, nu) for c(x, y) = |x - y|^p / p.
struct TransportSolution {
  std::size_t rows = 0;
  std::size_t cols = 0;
  // Positive entries in row-major order.
  std::vector<PlanEntry> plan;
  double primal_cost = 0.0;
  // W_p = (p * primal_cost)^(1/p).
  double wp = 0.0;
  // Dual prices reported by the solver, before tightening.
  Vec solver_phi;
  Vec solver_psi;
  std::size_t iterations = 0;

  std::vector<Vec> dense_plan() const;
};

// phi over supp(mu), psi over supp(nu), psi[anchor] == 0.
struct KantorovichPotentials {
  Vec phi;
  Vec psi;
  std::size_t anchor = 0;
};

std::vector<double> cost_matrix(const DiscreteMeasure& mu,
                                const DiscreteMeasure& nu, const Cost& cost);

// Exact discrete OT by network simplex. Throws ConvergenceError at the
// iteration cap (0 picks a cap proportional to the instance size).
TransportSolution solve_ot(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           const Cost& cost, std::size_t max_iterations = 0);

double wasserstein(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                   const Cost& cost);

// out(y) = min over x in from of c(x, y) - values(x).
Vec c_transform(const Vec& values, const std::vector<Vec>& from,
                const std::vector<Vec>& to, const Cost& cost);

// Tightens the solver duals by alternating c-transforms until they are a
// c-conjugate pair, then shifts so psi vanishes at the nu atom nearest the
// origin (lowest index on ties). Throws InvariantViolation if the duality
// gap exceeds 1e-8 relative afterwards.
KantorovichPotentials dual_potentials(const DiscreteMeasure& mu,
                                      const DiscreteMeasure& nu,
                                      const Cost& cost,
                                      const TransportSolution& sol);

// Largest residuals of the potential invariants; all should be ~0.
struct PotentialResiduals {
  double duality_gap = 0.0;        // |dual - primal| / |primal|, guarded at 0
  double feasibility = 0.0;        // max(phi_i + psi_j - c_ij, 0)
  double slackness = 0.0;          // max |phi_i + psi_j - c_ij| on the plan
  double phi_fixpoint = 0.0;       // max |phi - psi^c|
  double psi_fixpoint = 0.0;       // max |psi - phi^c|
  double marginals = 0.0;          // max marginal defect of the plan
};

PotentialResiduals potential_residuals(const DiscreteMeasure& mu,
                                       const DiscreteMeasure& nu,
                                       const Cost& cost,
                                       const TransportSolution& sol,
                                       const KantorovichPotentials& pot);

// sup_{s >= 0} (1 + s)^p / 2 - s^p: the smallest K_p with
// |x - y|^p >= |y|^p / 2 - K_p |x|^p.
double kp_constant(double p);
// Constant for the growth bounds of a potential whose dual side lives in the
// ball of radius R: max(2^p R^(p-1) + 2^(p-1), (K_p + 1) R^p / p).
double kpr_constant(double p, double radius);

struct PotentialEstimateReport {
  std::size_t pairs = 0;
  std::size_t points = 0;
  std::size_t violations = 0;
  double k_pr = 0.0;
  double min_lipschitz_residual = 0.0;
  double min_upper_residual = 0.0;
  double min_lower_residual = 0.0;
};

// Checks the Lipschitz, growth and coercivity bounds of the c-transform
// extension psi(y) = min_x c(x, y) - phi(x) over the ball-supported measure,
// normalized by psi(0) = 0. Half of the sampled points are atoms of `other`,
// the rest uniform in a Euclidean ball of radius 2 max(R, radius(other)).
PotentialEstimateReport check_potential_estimates(
    const DiscreteMeasure& ball, const Vec& phi_on_ball,
    const DiscreteMeasure& other, double radius, const Cost& cost,
    std::size_t sample_pairs, std::uint64_t seed);

// Indices of candidates x with psi(z) <= psi(y) + c(z, x) - c(y, x) + tol
// for every grid point z, where y = grid[y_index]. The default tolerance is
// 1e-8 (1 + |psi(y)|).
std::vector<std::size_t> c_superdifferential_members(
    const Vec& psi, const std::vector<Vec>& grid, std::size_t y_index,
    const std::vector<Vec>& candidates, const Cost& cost,
    std::optional<double> tol = std::nullopt);

nlohmann::json instance_to_json(const DiscreteMeasure& mu,
                                const DiscreteMeasure& nu, const Cost& cost);
nlohmann::json to_json(const TransportSolution& sol);

}  // namespace wslab

#endif  // WSLAB_TRANSPORT_HPP_
