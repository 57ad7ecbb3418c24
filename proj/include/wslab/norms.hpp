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

#ifndef WSLAB_NORMS_HPP_
#define WSLAB_NORMS_HPP_

#include <cstddef>
#include <memory>
#include <vector>

#include "json.hpp"
#include "wslab/vec.hpp"

namespace wslab {

enum class NormKind { kEuclidean, kPNorm, kOneNorm, kWeightedP, kSmoothed };

// A norm on R^d together with its dual norm.
//
// The smoothed kind is the gauge of
//   C_k = {x : (|x|_b + |x|^2 / k) / (1 + eta^2 / k) <= 1} + B_b(0, 1/k)
// where |.|_b is the base norm, |.| the Euclidean norm and eta the smallest
// constant with |x| <= eta |x|_b. The family is nondecreasing in k and
// increases to the base norm. Only dimensions 1..3 are supported for it.
class Norm {
 public:
  static Norm euclidean(int dim);
  // exponent in (1, inf]; pass +infinity for the sup norm.
  static Norm p_norm(int dim, double exponent);
  static Norm one_norm(int dim);
  // (sum_i w_i |x_i|^a)^(1/a), a in (1, inf), w_i > 0.
  static Norm weighted_p(Vec weights, double exponent);
  static Norm smoothed(const Norm& base, int k);

  int dim() const { return dim_; }
  NormKind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  const Vec& weights() const { return weights_; }
  // Only valid for the smoothed kind.
  const Norm& base() const;
  int smoothing_index() const { return k_; }
  // Norm-equivalence constant of the base norm (smoothed kind only).
  double eta() const { return eta_; }

  double eval(ConstSpan x) const;
  double eval_dual(ConstSpan v) const;

 private:
  Norm() = default;

  // Radial function of the strictly convex core {|x|_b + |x|^2/k <= c}.
  double core_radius(ConstSpan unit_dir) const;
  bool in_smoothed_ball(ConstSpan z) const;
  double smoothed_gauge(ConstSpan x) const;
  double smoothed_support(ConstSpan v) const;

  int dim_ = 0;
  NormKind kind_ = NormKind::kEuclidean;
  double exponent_ = 2.0;
  Vec weights_;
  std::shared_ptr<const Norm> base_;
  int k_ = 0;
  double eta_ = 1.0;
};

double eval_norm(const Norm& norm, ConstSpan x);
double eval_dual_norm(const Norm& norm, ConstSpan v);

// Cost c(x, y) = |x - y|^p / p on (R^d, |.|).
struct Cost {
  Norm norm;
  double p = 2.0;

  Cost(Norm n, double exponent);

  int dim() const { return norm.dim(); }
  double p_conj() const { return p / (p - 1.0); }
  double operator()(ConstSpan x, ConstSpan y) const;
};

// Gradient of v -> |v|_*^{p'} / p'. Satisfies
//   <j(v), v> = |v|_*^{p'} = |j(v)|^p.
// Throws NotDifferentiable where the dual norm has a kink.
Vec duality_map(const Cost& cost, ConstSpan v);

// Measurable selection j_{p',eps}(v) = |v|_*^{p'/p} x_n where x_n is the
// first direction with <v, x_n> >= |v|_* - eps. Directions are rescaled to
// unit length in the cost norm. Throws InvalidArgument if none qualifies.
Vec approx_duality_map(const Cost& cost, ConstSpan v, double eps,
                       const std::vector<Vec>& directions);

// Deterministic directions, unit in `norm`: the signed axes and (d <= 10)
// the sign vectors, then `count` low-discrepancy points of the sphere.
// count == 0 picks a size that makes eps >= 1e-3 selections succeed for
// |v|_* <= 1, d <= 4.
std::vector<Vec> direction_dictionary(const Norm& norm, std::size_t count = 0);

nlohmann::json to_json(const Norm& norm);
Norm norm_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Cost& cost);
Cost cost_from_json(const nlohmann::json& j);

}  // namespace wslab

#endif  // WSLAB_NORMS_HPP_
