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

#ifndef WSLAB_CYLINDER_HPP_
#define WSLAB_CYLINDER_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "json.hpp"
#include "wslab/measures.hpp"
#include "wslab/norms.hpp"
#include "wslab/transport.hpp"
#include "wslab/vec.hpp"

namespace wslab {

// sat_C(t) = t on [-C, C], sign(t) (C + tanh(|t| - C)) outside. C^1 and
// bounded by C + 1.
double saturate(double t, double level);
double saturate_slope(double t, double level);

struct Monomial {
  double coef = 0.0;
  std::vector<int> exponents;
};

enum class FieldKind { kClampedPolynomial, kGaussianBump, kClampedLinear };

// Bounded C^1 scalar field on R^d with value and gradient oracles.
class SmoothScalarField {
 public:
  // P(sat_C(x_1), ..., sat_C(x_d)); a polynomial on [-C, C]^d.
  static SmoothScalarField clamped_polynomial(int dim, std::vector<Monomial> terms,
                                              double clamp);
  // amplitude * exp(-|x - center|^2 / (2 width^2)).
  static SmoothScalarField gaussian_bump(Vec center, double width,
                                         double amplitude);
  // sat_L(<a, x>).
  static SmoothScalarField clamped_linear(Vec a, double saturation);

  int dim() const { return dim_; }
  FieldKind kind() const { return kind_; }
  double value(ConstSpan x) const;
  Vec gradient(ConstSpan x) const;
  // Bounds on |f| and on the Euclidean length of its gradient.
  double sup_bound() const;
  double lipschitz_bound() const;

  nlohmann::json to_json() const;
  static SmoothScalarField from_json(const nlohmann::json& j);

 private:
  SmoothScalarField() = default;

  int dim_ = 0;
  FieldKind kind_ = FieldKind::kClampedLinear;
  std::vector<Monomial> terms_;
  double level_ = 0.0;  // clamp or saturation level
  Vec vec_;             // center or covector
  double width_ = 1.0;
  double amplitude_ = 1.0;
};

enum class OuterKind { kClampedPolynomial, kIdentityClamp, kSum, kScaled, kConstant };

// Smooth map psi: R^N -> R with gradient oracle.
class OuterMap {
 public:
  static OuterMap clamped_polynomial(int arity, std::vector<Monomial> terms,
                                     double clamp);
  // sat_S(u) on R.
  static OuterMap identity_clamp(double saturation);
  // a psi1(u_1..u_N1) + b psi2(u_N1+1..u_N).
  static OuterMap sum(double a, const OuterMap& first, double b,
                      const OuterMap& second);
  // t psi(u).
  static OuterMap scaled(double t, const OuterMap& inner);
  static OuterMap constant(int arity, double value);

  int arity() const { return arity_; }
  OuterKind kind() const { return kind_; }
  double value(ConstSpan u) const;
  Vec gradient(ConstSpan u) const;

  nlohmann::json to_json() const;
  static OuterMap from_json(const nlohmann::json& j);

 private:
  OuterMap() = default;

  int arity_ = 0;
  OuterKind kind_ = OuterKind::kConstant;
  std::vector<Monomial> terms_;
  double level_ = 0.0;
  double a_ = 1.0;
  double b_ = 1.0;
  std::shared_ptr<const OuterMap> first_;
  std::shared_ptr<const OuterMap> second_;
};

// F(mu) = psi(int phi_1 dmu, ..., int phi_N dmu).
class CylinderFunction {
 public:
  CylinderFunction(std::vector<SmoothScalarField> inner, OuterMap outer);

  int dim() const { return dim_; }
  const std::vector<SmoothScalarField>& inner() const { return inner_; }
  const OuterMap& outer() const { return outer_; }

  // (int phi_n dmu)_n
  Vec features(const DiscreteMeasure& mu) const;

  nlohmann::json to_json() const;
  static CylinderFunction from_json(const nlohmann::json& j);

 private:
  int dim_;
  std::vector<SmoothScalarField> inner_;
  OuterMap outer_;
};

// a F + b G as a cylinder function on the concatenated fields.
CylinderFunction combine(double a, const CylinderFunction& f, double b,
                         const CylinderFunction& g);
// t F on the same fields.
CylinderFunction scale(double t, const CylinderFunction& f);

double eval_cylinder(const CylinderFunction& f, const DiscreteMeasure& mu);

// DF[mu](x) = sum_n d_n psi(L(mu)) grad phi_n(x).
Vec differential(const CylinderFunction& f, const DiscreteMeasure& mu,
                 ConstSpan x);
// Differential at every atom of mu.
std::vector<Vec> differential_field(const CylinderFunction& f,
                                    const DiscreteMeasure& mu);
// (sum_i w_i |DF[mu](x_i)|_*^{p'})^{1/p'}.
double differential_norm(const CylinderFunction& f, const DiscreteMeasure& mu,
                         const Cost& cost);

// Pushforward of the plan under (x0, x1) -> (1 - t) x0 + t x1.
DiscreteMeasure geodesic_interpolate(const DiscreteMeasure& mu0,
                                     const DiscreteMeasure& mu1,
                                     const TransportSolution& plan, double t);

// d/dt F(mu_t) at t = s: sum over the plan of <DF[mu_s](x_s), x1 - x0>.
double derivative_along_curve(const CylinderFunction& f,
                              const DiscreteMeasure& mu0,
                              const DiscreteMeasure& mu1,
                              const TransportSolution& plan, double s);

// Pushforward of mu under x_i -> x_i + t v_i (one vector per atom).
DiscreteMeasure displace(const DiscreteMeasure& mu, const std::vector<Vec>& v,
                         double t);

struct SlopeLowerReport {
  // t -> 0 limit of (F(nu_t) - F(mu)) / (t |u|_{L^p(mu)}) along
  // nu_t = (id + t u)_# mu, u = j_{p',eps}(DF[mu]); never exceeds the
  // differential norm.
  double value = 0.0;
  // Ratios at each t of the schedule with the coupling bound
  // W_p(mu, nu_t) <= t |u|_{L^p(mu)}.
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double field_norm = 0.0;  // |u|_{L^p(mu)}
};

SlopeLowerReport slope_lower_bound(const CylinderFunction& f,
                                   const DiscreteMeasure& mu, const Cost& cost,
                                   double eps, const std::vector<double>& t_schedule,
                                   const std::vector<Vec>& directions);

struct SlopeUpperEntry {
  double radius = 0.0;
  // Largest |F(mu') - F(mu'')| / W_p(mu', mu'') over pairs sampled at this
  // radius, and over all radii up to this one.
  double max_ratio = 0.0;
  double envelope = 0.0;
  // Largest differential norm seen on the sampled measures and along the
  // geodesics joining each pair.
  double ball_sup = 0.0;
  // Largest ratio minus its Hoelder bound along the joining geodesic.
  double worst_pair_excess = 0.0;
  std::size_t pairs = 0;
};

std::vector<SlopeUpperEntry> slope_upper_probe(
    const CylinderFunction& f, const DiscreteMeasure& mu, const Cost& cost,
    const std::vector<double>& radius_schedule, std::size_t pairs_per_radius,
    std::uint64_t seed);

}  // namespace wslab

#endif  // WSLAB_CYLINDER_HPP_
