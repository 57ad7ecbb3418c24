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

#ifndef WSLAB_MEASURES_HPP_
#define WSLAB_MEASURES_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "wslab/norms.hpp"
#include "wslab/quadrature.hpp"
#include "wslab/vec.hpp"

namespace wslab {

// Finitely supported probability measure. Construction merges exactly
// coincident points (keeping first-occurrence order), drops zero weights and
// renormalizes, so every instance has distinct points and positive weights
// summing to one.
class DiscreteMeasure {
 public:
  DiscreteMeasure(std::vector<Vec> points, Vec weights);

  static DiscreteMeasure dirac(Vec point);
  static DiscreteMeasure uniform(std::vector<Vec> points);

  int dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Vec>& points() const { return points_; }
  const Vec& weights() const { return weights_; }
  const Vec& point(std::size_t i) const { return points_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  // Largest cost-norm of a support point.
  double support_radius(const Norm& norm) const;

 private:
  int dim_ = 0;
  std::vector<Vec> points_;
  Vec weights_;
};

struct MetaAtom {
  double mass;
  DiscreteMeasure measure;
};

// Finitely supported positive measure on the space of measures.
class MetaMeasure {
 public:
  explicit MetaMeasure(std::vector<MetaAtom> atoms);

  const std::vector<MetaAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double total_mass() const;

 private:
  std::vector<MetaAtom> atoms_;
};

// kappa_eps(x) = eps^-d kappa(x / eps), with kappa(u) = exp(-1/(1-|u|^2)) / Z_d
// on the open Euclidean unit ball.
class Mollifier {
 public:
  Mollifier(int dim, double eps);

  int dim() const { return dim_; }
  double eps() const { return eps_; }
  // Unit-scale kernel kappa.
  double kernel(ConstSpan u) const;
  // Normalizing constant Z_d (d in 1..3).
  static double normalization(int dim);

 private:
  int dim_;
  double eps_;
  double z_;
};

// sum_i w_i |x_i|^p in the cost norm.
double moment_p(const DiscreteMeasure& mu, const Cost& cost);

// Integral of f against mu convolved with kappa_eps, by adaptive cubature
// over the kernel's unit cube.
double mollified_expectation(const DiscreteMeasure& mu, const Mollifier& moll,
                             const ScalarField& f, double rel_tol = 1e-8);

// p-th moment of kappa_eps in the cost norm: int |x|^p kappa_eps(x) dx.
double kernel_moment(const Mollifier& moll, const Cost& cost);

// Draws the n i.i.d. samples X + eps U, X ~ mu, U ~ kappa, in draw order.
std::vector<Vec> draw_mollified(const DiscreteMeasure& mu,
                                const Mollifier& moll, std::size_t n,
                                std::uint64_t seed);
// Empirical measure of draw_mollified.
DiscreteMeasure sample_mollified(const DiscreteMeasure& mu,
                                 const Mollifier& moll, std::size_t n,
                                 std::uint64_t seed);

nlohmann::json to_json(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MetaMeasure& m);
MetaMeasure meta_measure_from_json(const nlohmann::json& j);
// One row per atom: weight, x1, ..., xd, preceded by a header row.
std::string to_csv(const DiscreteMeasure& mu);
DiscreteMeasure measure_from_csv(const std::string& text);

// Shortest decimal text that round-trips to the same double.
std::string format_double(double x);

}  // namespace wslab

#endif  // WSLAB_MEASURES_HPP_
