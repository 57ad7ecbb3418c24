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

#ifndef WSLAB_APPROX_HPP_
#define WSLAB_APPROX_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "wslab/measures.hpp"
#include "wslab/norms.hpp"
#include "wslab/transport.hpp"

namespace wslab {

// One dictionary entry: optimal potentials for (nu, sampled mollification of
// a grid measure).
struct DictionaryEntry {
  DiscreteMeasure grid_measure;
  std::uint64_t seed = 0;
  // Potential over supp(nu), normalized so its c-transform vanishes at 0.
  Vec phi;
  // a_h = int phi dnu.
  double offset = 0.0;
  // Standard error of the sample mean of u_h over the mollified sample.
  double stderr_u = 0.0;
};

class PotentialDictionary {
 public:
  PotentialDictionary(DiscreteMeasure nu, double radius, double eps, Cost cost,
                      std::size_t sample_n, std::vector<DictionaryEntry> entries);

  const DiscreteMeasure& nu() const { return nu_; }
  double radius() const { return radius_; }
  double eps() const { return eps_; }
  const Cost& cost() const { return cost_; }
  std::size_t sample_n() const { return sample_n_; }
  const std::vector<DictionaryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // u_h(y) = min_x (c(x, y) - phi_h(x)) + a_h, h zero-based.
  double u(std::size_t h, ConstSpan y) const;

  nlohmann::json to_json() const;
  static PotentialDictionary from_json(const nlohmann::json& j);

 private:
  DiscreteMeasure nu_;
  double radius_;
  double eps_;
  Cost cost_;
  std::size_t sample_n_;
  std::vector<DictionaryEntry> entries_;
};

// Seed of the h-th (zero-based) grid sample.
std::uint64_t dictionary_seed(std::uint64_t seed, std::size_t h);

// Solves OT(nu, sample of mu^h_eps) for every grid measure. nu must be
// supported in the cost-norm ball of the given radius. `jobs` > 1 solves
// entries on worker threads; results do not depend on it.
PotentialDictionary build_dictionary(const DiscreteMeasure& nu, double radius,
                                     const std::vector<DiscreteMeasure>& grid,
                                     const Mollifier& moll, const Cost& cost,
                                     std::size_t sample_n, std::uint64_t seed,
                                     std::size_t jobs = 1);

// l_h(mu) = int u_h d(mu_eps) for every h, by cubature.
std::vector<double> potential_integrals(const PotentialDictionary& dict,
                                        const DiscreteMeasure& mu,
                                        const Mollifier& moll,
                                        double rel_tol = 1e-6);

struct GkValue {
  double value = 0.0;
  std::size_t argmax = 0;  // zero-based, lowest index on ties
};

// G_k(mu) = max_{h < k} l_h(mu) for k = 1..size.
std::vector<GkValue> gk_sequence(const std::vector<double>& integrals);
GkValue G_k(const PotentialDictionary& dict, const DiscreteMeasure& mu,
            std::size_t k, const Mollifier& moll, double rel_tol = 1e-6);

struct FEstimate {
  double value = 0.0;   // (1/p) W_p^p(sample, nu)
  double stderr = 0.0;  // bootstrap
  std::size_t sample_n = 0;
  std::size_t resamples = 0;
};

FEstimate F_nu_eps(const DiscreteMeasure& nu, const DiscreteMeasure& mu,
                   const Mollifier& moll, const Cost& cost, std::size_t sample_n,
                   std::uint64_t seed, std::size_t resamples = 200);

struct MeasureConvergence {
  std::vector<double> integrals;
  std::vector<GkValue> g;
  FEstimate f;
  // sqrt(se_F^2 + se_{u, argmax}^2) for each k.
  std::vector<double> combined_stderr;
  std::optional<std::size_t> grid_index;
  bool monotone = true;
  // max_k G_k - F - 3 se_k (should be <= 0)
  double worst_excess = 0.0;
  // Envelope of F - G_k is nonincreasing by construction; final gap.
  double final_gap = 0.0;
};

struct LipschitzCheck {
  std::size_t a = 0;
  std::size_t b = 0;
  double w = 0.0;
  double lhs = 0.0;  // max_k |G_k(mu_a) - G_k(mu_b)|
  double rhs = 0.0;
};

struct ConvergenceReport {
  std::vector<MeasureConvergence> measures;
  std::vector<LipschitzCheck> lipschitz;
  double kernel_moment = 0.0;
};

// Bound on |G_k(mu) - G_k(mu')| from the potential Lipschitz estimate,
// mollification contraction and the moment bound
//   sm(mu_eps)^(1/p) <= sm(mu)^(1/p) + C_eps^(1/p).
double gk_lipschitz_bound(double w, double radius, double p, double root_moment_a,
                          double root_moment_b, double kernel_moment);

ConvergenceReport convergence_report(const PotentialDictionary& dict,
                                     const std::vector<DiscreteMeasure>& battery,
                                     const Mollifier& moll, std::uint64_t f_seed,
                                     std::size_t resamples = 200,
                                     double rel_tol = 1e-6, std::size_t jobs = 1);

// Pushforward under (x_1..x_d) -> (x_1..x_h).
DiscreteMeasure project_measure(const DiscreteMeasure& mu, int h);

}  // namespace wslab

#endif  // WSLAB_APPROX_HPP_
