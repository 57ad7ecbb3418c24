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

#include "wslab/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "wslab/error.hpp"
#include "wslab/rng.hpp"

namespace wslab {
namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (int k = 0; k < e; ++k) r *= x;
  return r;
}

void check_terms(const std::vector<Monomial>& terms, int arity) {
  for (const Monomial& t : terms) {
    require_dim(t.exponents.size(), static_cast<std::size_t>(arity), "monomial");
    for (int e : t.exponents) {
      if (e < 0) throw InvalidArgument("monomial exponents must be nonnegative");
    }
  }
}

double poly_value(const std::vector<Monomial>& terms, ConstSpan z) {
  double s = 0.0;
  for (const Monomial& t : terms) {
    double m = t.coef;
    for (std::size_t k = 0; k < z.size(); ++k) m *= ipow(z[k], t.exponents[k]);
    s += m;
  }
  return s;
}

Vec poly_gradient(const std::vector<Monomial>& terms, ConstSpan z) {
  Vec g(z.size(), 0.0);
  for (const Monomial& t : terms) {
    for (std::size_t k = 0; k < z.size(); ++k) {
      if (t.exponents[k] == 0) continue;
      double m = t.coef * t.exponents[k] * ipow(z[k], t.exponents[k] - 1);
      for (std::size_t l = 0; l < z.size(); ++l) {
        if (l != k) m *= ipow(z[l], t.exponents[l]);
      }
      g[k] += m;
    }
  }
  return g;
}

nlohmann::json terms_to_json(const std::vector<Monomial>& terms) {
  nlohmann::json out = nlohmann::json::array();
  for (const Monomial& t : terms) {
    out.push_back({{"coef", t.coef}, {"exponents", t.exponents}});
  }
  return out;
}

std::vector<Monomial> terms_from_json(const nlohmann::json& j) {
  std::vector<Monomial> out;
  for (const auto& t : j) {
    out.push_back({t.at("coef").get<double>(), t.at("exponents").get<std::vector<int>>()});
  }
  return out;
}

void check_level(double level, const char* what) {
  if (!(level > 0.0) || !std::isfinite(level)) {
    throw InvalidArgument(std::string(what) + " must be positive and finite");
  }
}

double weighted_power_mean(const Vec& w, const Vec& values, double q) {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * std::pow(values[i], q);
  return std::pow(s, 1.0 / q);
}

}  // namespace

double saturate(double t, double level) {
  const double a = std::abs(t);
  if (a <= level) return t;
  return std::copysign(level + std::tanh(a - level), t);
}

double saturate_slope(double t, double level) {
  const double a = std::abs(t);
  if (a <= level) return 1.0;
  const double c = std::cosh(a - level);
  return 1.0 / (c * c);
}

SmoothScalarField SmoothScalarField::clamped_polynomial(int dim,
                                                        std::vector<Monomial> terms,
                                                        double clamp) {
  if (dim < 1) throw InvalidArgument("field dimension must be positive");
  check_terms(terms, dim);
  check_level(clamp, "polynomial clamp");
  SmoothScalarField f;
  f.dim_ = dim;
  f.kind_ = FieldKind::kClampedPolynomial;
  f.terms_ = std::move(terms);
  f.level_ = clamp;
  return f;
}

SmoothScalarField SmoothScalarField::gaussian_bump(Vec center, double width,
                                                   double amplitude) {
  if (center.empty()) throw InvalidArgument("field dimension must be positive");
  check_level(width, "bump width");
  SmoothScalarField f;
  f.dim_ = static_cast<int>(center.size());
  f.kind_ = FieldKind::kGaussianBump;
  f.vec_ = std::move(center);
  f.width_ = width;
  f.amplitude_ = amplitude;
  return f;
}

SmoothScalarField SmoothScalarField::clamped_linear(Vec a, double saturation) {
  if (a.empty()) throw InvalidArgument("field dimension must be positive");
  check_level(saturation, "linear saturation");
  SmoothScalarField f;
  f.dim_ = static_cast<int>(a.size());
  f.kind_ = FieldKind::kClampedLinear;
  f.vec_ = std::move(a);
  f.level_ = saturation;
  return f;
}

double SmoothScalarField::value(ConstSpan x) const {
  require_dim(x.size(), static_cast<std::size_t>(dim_), "field value");
  switch (kind_) {
    case FieldKind::kClampedPolynomial: {
      Vec z(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) z[k] = saturate(x[k], level_);
      return poly_value(terms_, z);
    }
    case FieldKind::kGaussianBump: {
      const Vec r = sub(x, vec_);
      return amplitude_ * std::exp(-dot(r, r) / (2.0 * width_ * width_));
    }
    case FieldKind::kClampedLinear:
      return saturate(dot(vec_, x), level_);
  }
  return 0.0;
}

Vec SmoothScalarField::gradient(ConstSpan x) const {
  require_dim(x.size(), static_cast<std::size_t>(dim_), "field gradient");
  switch (kind_) {
    case FieldKind::kClampedPolynomial: {
      Vec z(x.size());
      for (std::size_t k = 0; k < x.size(); ++k) z[k] = saturate(x[k], level_);
      Vec g = poly_gradient(terms_, z);
      for (std::size_t k = 0; k < x.size(); ++k) g[k] *= saturate_slope(x[k], level_);
      return g;
    }
    case FieldKind::kGaussianBump: {
      const Vec r = sub(x, vec_);
      const double e = amplitude_ * std::exp(-dot(r, r) / (2.0 * width_ * width_));
      return scaled(-e / (width_ * width_), r);
    }
    case FieldKind::kClampedLinear:
      return scaled(saturate_slope(dot(vec_, x), level_), vec_);
  }
  return {};
}

double SmoothScalarField::sup_bound() const {
  switch (kind_) {
    case FieldKind::kClampedPolynomial: {
      double s = 0.0;
      for (const Monomial& t : terms_) {
        double m = std::abs(t.coef);
        for (int e : t.exponents) m *= ipow(level_ + 1.0, e);
        s += m;
      }
      return s;
    }
    case FieldKind::kGaussianBump:
      return std::abs(amplitude_);
    case FieldKind::kClampedLinear:
      return level_ + 1.0;
  }
  return 0.0;
}

double SmoothScalarField::lipschitz_bound() const {
  switch (kind_) {
    case FieldKind::kClampedPolynomial: {
      double s2 = 0.0;
      for (int k = 0; k < dim_; ++k) {
        double gk = 0.0;
        for (const Monomial& t : terms_) {
          if (t.exponents[k] == 0) continue;
          int degree = 0;
          for (int e : t.exponents) degree += e;
          gk += std::abs(t.coef) * t.exponents[k] * ipow(level_ + 1.0, degree - 1);
        }
        s2 += gk * gk;
      }
      return std::sqrt(s2);
    }
    case FieldKind::kGaussianBump:
      return std::abs(amplitude_) / (width_ * std::sqrt(std::exp(1.0)));
    case FieldKind::kClampedLinear:
      return euclidean_length(vec_);
  }
  return 0.0;
}

nlohmann::json SmoothScalarField::to_json() const {
  switch (kind_) {
    case FieldKind::kClampedPolynomial:
      return {{"kind", "clamped_polynomial"},
              {"dim", dim_},
              {"clamp", level_},
              {"terms", terms_to_json(terms_)}};
    case FieldKind::kGaussianBump:
      return {{"kind", "gaussian_bump"},
              {"center", vec_},
              {"width", width_},
              {"amplitude", amplitude_}};
    case FieldKind::kClampedLinear:
      return {{"kind", "clamped_linear"}, {"covector", vec_}, {"saturation", level_}};
  }
  return {};
}

SmoothScalarField SmoothScalarField::from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "clamped_polynomial") {
      return clamped_polynomial(j.at("dim").get<int>(), terms_from_json(j.at("terms")),
                                j.at("clamp").get<double>());
    }
    if (kind == "gaussian_bump") {
      return gaussian_bump(j.at("center").get<Vec>(), j.at("width").get<double>(),
                           j.at("amplitude").get<double>());
    }
    if (kind == "clamped_linear") {
      return clamped_linear(j.at("covector").get<Vec>(), j.at("saturation").get<double>());
    }
    throw ParseError("unknown field kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed field: ") + e.what());
  }
}

OuterMap OuterMap::clamped_polynomial(int arity, std::vector<Monomial> terms,
                                      double clamp) {
  if (arity < 1) throw InvalidArgument("outer map arity must be positive");
  check_terms(terms, arity);
  check_level(clamp, "outer clamp");
  OuterMap o;
  o.arity_ = arity;
  o.kind_ = OuterKind::kClampedPolynomial;
  o.terms_ = std::move(terms);
  o.level_ = clamp;
  return o;
}

OuterMap OuterMap::identity_clamp(double saturation) {
  check_level(saturation, "identity clamp");
  OuterMap o;
  o.arity_ = 1;
  o.kind_ = OuterKind::kIdentityClamp;
  o.level_ = saturation;
  return o;
}

OuterMap OuterMap::sum(double a, const OuterMap& first, double b,
                       const OuterMap& second) {
  OuterMap o;
  o.arity_ = first.arity() + second.arity();
  o.kind_ = OuterKind::kSum;
  o.a_ = a;
  o.b_ = b;
  o.first_ = std::make_shared<const OuterMap>(first);
  o.second_ = std::make_shared<const OuterMap>(second);
  return o;
}

OuterMap OuterMap::scaled(double t, const OuterMap& inner) {
  OuterMap o;
  o.arity_ = inner.arity();
  o.kind_ = OuterKind::kScaled;
  o.a_ = t;
  o.first_ = std::make_shared<const OuterMap>(inner);
  return o;
}

OuterMap OuterMap::constant(int arity, double value) {
  if (arity < 1) throw InvalidArgument("outer map arity must be positive");
  OuterMap o;
  o.arity_ = arity;
  o.kind_ = OuterKind::kConstant;
  o.level_ = value;
  return o;
}

double OuterMap::value(ConstSpan u) const {
  require_dim(u.size(), static_cast<std::size_t>(arity_), "outer map value");
  switch (kind_) {
    case OuterKind::kClampedPolynomial: {
      Vec z(u.size());
      for (std::size_t k = 0; k < u.size(); ++k) z[k] = saturate(u[k], level_);
      return poly_value(terms_, z);
    }
    case OuterKind::kIdentityClamp:
      return saturate(u[0], level_);
    case OuterKind::kSum: {
      const std::size_t n1 = static_cast<std::size_t>(first_->arity());
      return a_ * first_->value(u.subspan(0, n1)) + b_ * second_->value(u.subspan(n1));
    }
    case OuterKind::kScaled:
      return a_ * first_->value(u);
    case OuterKind::kConstant:
      return level_;
  }
  return 0.0;
}

Vec OuterMap::gradient(ConstSpan u) const {
  require_dim(u.size(), static_cast<std::size_t>(arity_), "outer map gradient");
  switch (kind_) {
    case OuterKind::kClampedPolynomial: {
      Vec z(u.size());
      for (std::size_t k = 0; k < u.size(); ++k) z[k] = saturate(u[k], level_);
      Vec g = poly_gradient(terms_, z);
      for (std::size_t k = 0; k < u.size(); ++k) g[k] *= saturate_slope(u[k], level_);
      return g;
    }
    case OuterKind::kIdentityClamp:
      return {saturate_slope(u[0], level_)};
    case OuterKind::kSum: {
      const std::size_t n1 = static_cast<std::size_t>(first_->arity());
      Vec g = wslab::scaled(a_, first_->gradient(u.subspan(0, n1)));
      const Vec g2 = wslab::scaled(b_, second_->gradient(u.subspan(n1)));
      g.insert(g.end(), g2.begin(), g2.end());
      return g;
    }
    case OuterKind::kScaled:
      return wslab::scaled(a_, first_->gradient(u));
    case OuterKind::kConstant:
      return Vec(u.size(), 0.0);
  }
  return {};
}

nlohmann::json OuterMap::to_json() const {
  switch (kind_) {
    case OuterKind::kClampedPolynomial:
      return {{"kind", "clamped_polynomial"},
              {"arity", arity_},
              {"clamp", level_},
              {"terms", terms_to_json(terms_)}};
    case OuterKind::kIdentityClamp:
      return {{"kind", "identity_clamp"}, {"saturation", level_}};
    case OuterKind::kSum:
      return {{"kind", "sum"},
              {"a", a_},
              {"b", b_},
              {"first", first_->to_json()},
              {"second", second_->to_json()}};
    case OuterKind::kScaled:
      return {{"kind", "scaled"}, {"t", a_}, {"inner", first_->to_json()}};
    case OuterKind::kConstant:
      return {{"kind", "constant"}, {"arity", arity_}, {"value", level_}};
  }
  return {};
}

OuterMap OuterMap::from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "clamped_polynomial") {
      return clamped_polynomial(j.at("arity").get<int>(), terms_from_json(j.at("terms")),
                                j.at("clamp").get<double>());
    }
    if (kind == "identity_clamp") return identity_clamp(j.at("saturation").get<double>());
    if (kind == "sum") {
      return sum(j.at("a").get<double>(), from_json(j.at("first")),
                 j.at("b").get<double>(), from_json(j.at("second")));
    }
    if (kind == "scaled") return scaled(j.at("t").get<double>(), from_json(j.at("inner")));
    if (kind == "constant") {
      return constant(j.at("arity").get<int>(), j.at("value").get<double>());
    }
    throw ParseError("unknown outer map kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed outer map: ") + e.what());
  }
}

CylinderFunction::CylinderFunction(std::vector<SmoothScalarField> inner,
                                   OuterMap outer)
    : inner_(std::move(inner)), outer_(std::move(outer)) {
  if (inner_.empty()) throw InvalidArgument("cylinder function needs inner fields");
  require_dim(inner_.size(), static_cast<std::size_t>(outer_.arity()),
              "cylinder outer arity");
  dim_ = inner_[0].dim();
  for (const SmoothScalarField& f : inner_) {
    require_dim(static_cast<std::size_t>(f.dim()), static_cast<std::size_t>(dim_),
                "cylinder inner field");
  }
}

Vec CylinderFunction::features(const DiscreteMeasure& mu) const {
  require_dim(static_cast<std::size_t>(mu.dim()), static_cast<std::size_t>(dim_),
              "cylinder features");
  Vec out(inner_.size(), 0.0);
  for (std::size_t n = 0; n < inner_.size(); ++n) {
    for (std::size_t i = 0; i < mu.size(); ++i) {
      out[n] += mu.weight(i) * inner_[n].value(mu.point(i));
    }
  }
  return out;
}

nlohmann::json CylinderFunction::to_json() const {
  nlohmann::json inner = nlohmann::json::array();
  for (const SmoothScalarField& f : inner_) inner.push_back(f.to_json());
  return {{"inner", inner}, {"outer", outer_.to_json()}};
}

CylinderFunction CylinderFunction::from_json(const nlohmann::json& j) {
  try {
    std::vector<SmoothScalarField> inner;
    for (const auto& f : j.at("inner")) inner.push_back(SmoothScalarField::from_json(f));
    return CylinderFunction(std::move(inner), OuterMap::from_json(j.at("outer")));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed cylinder function: ") + e.what());
  }
}

CylinderFunction combine(double a, const CylinderFunction& f, double b,
                         const CylinderFunction& g) {
  std::vector<SmoothScalarField> inner = f.inner();
  inner.insert(inner.end(), g.inner().begin(), g.inner().end());
  return CylinderFunction(std::move(inner), OuterMap::sum(a, f.outer(), b, g.outer()));
}

CylinderFunction scale(double t, const CylinderFunction& f) {
  return CylinderFunction(f.inner(), OuterMap::scaled(t, f.outer()));
}

double eval_cylinder(const CylinderFunction& f, const DiscreteMeasure& mu) {
  return f.outer().value(f.features(mu));
}

namespace {

Vec differential_at(const CylinderFunction& f, const Vec& outer_grad, ConstSpan x) {
  Vec out(x.size(), 0.0);
  for (std::size_t n = 0; n < f.inner().size(); ++n) {
    if (outer_grad[n] == 0.0) continue;
    const Vec g = f.inner()[n].gradient(x);
    for (std::size_t k = 0; k < x.size(); ++k) out[k] += outer_grad[n] * g[k];
  }
  return out;
}

}  // namespace

Vec differential(const CylinderFunction& f, const DiscreteMeasure& mu,
                 ConstSpan x) {
  require_dim(x.size(), static_cast<std::size_t>(f.dim()), "differential point");
  return differential_at(f, f.outer().gradient(f.features(mu)), x);
}

std::vector<Vec> differential_field(const CylinderFunction& f,
                                    const DiscreteMeasure& mu) {
  const Vec g = f.outer().gradient(f.features(mu));
  std::vector<Vec> out;
  out.reserve(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    out.push_back(differential_at(f, g, mu.point(i)));
  }
  return out;
}

double differential_norm(const CylinderFunction& f, const DiscreteMeasure& mu,
                         const Cost& cost) {
  const std::vector<Vec> df = differential_field(f, mu);
  Vec norms(df.size());
  for (std::size_t i = 0; i < df.size(); ++i) norms[i] = cost.norm.eval_dual(df[i]);
  return weighted_power_mean(mu.weights(), norms, cost.p_conj());
}

DiscreteMeasure geodesic_interpolate(const DiscreteMeasure& mu0,
                                     const DiscreteMeasure& mu1,
                                     const TransportSolution& plan, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("interpolation time outside [0, 1]");
  if (plan.rows != mu0.size() || plan.cols != mu1.size()) {
    throw DimensionError("plan does not match its marginals");
  }
  std::vector<Vec> points;
  Vec weights;
  for (const PlanEntry& e : plan.plan) {
    const Vec& x0 = mu0.point(e.i);
    const Vec& x1 = mu1.point(e.j);
    Vec x(x0.size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = (1.0 - t) * x0[k] + t * x1[k];
    points.push_back(std::move(x));
    weights.push_back(e.mass);
  }
  return DiscreteMeasure(std::move(points), std::move(weights));
}

double derivative_along_curve(const CylinderFunction& f,
                              const DiscreteMeasure& mu0,
                              const DiscreteMeasure& mu1,
                              const TransportSolution& plan, double s) {
  const DiscreteMeasure mus = geodesic_interpolate(mu0, mu1, plan, s);
  const Vec g = f.outer().gradient(f.features(mus));
  double total = 0.0;
  for (const PlanEntry& e : plan.plan) {
    const Vec& x0 = mu0.point(e.i);
    const Vec& x1 = mu1.point(e.j);
    Vec x(x0.size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = (1.0 - s) * x0[k] + s * x1[k];
    total += e.mass * dot(differential_at(f, g, x), sub(x1, x0));
  }
  return total;
}

DiscreteMeasure displace(const DiscreteMeasure& mu, const std::vector<Vec>& v,
                         double t) {
  require_dim(v.size(), mu.size(), "displacement field");
  std::vector<Vec> points;
  points.reserve(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) points.push_back(axpy(mu.point(i), t, v[i]));
  return DiscreteMeasure(std::move(points), mu.weights());
}

SlopeLowerReport slope_lower_bound(const CylinderFunction& f,
                                   const DiscreteMeasure& mu, const Cost& cost,
                                   double eps, const std::vector<double>& t_schedule,
                                   const std::vector<Vec>& directions) {
  SlopeLowerReport rep;
  const std::vector<Vec> df = differential_field(f, mu);
  std::vector<Vec> u;
  u.reserve(df.size());
  double numerator = 0.0;
  double lp = 0.0;
  for (std::size_t i = 0; i < df.size(); ++i) {
    u.push_back(approx_duality_map(cost, df[i], eps, directions));
    numerator += mu.weight(i) * dot(df[i], u.back());
    lp += mu.weight(i) * std::pow(cost.norm.eval(u.back()), cost.p);
  }
  rep.field_norm = std::pow(lp, 1.0 / cost.p);
  if (rep.field_norm == 0.0) {
    rep.ratios.assign(t_schedule.size(), 0.0);
    return rep;
  }
  rep.value = std::max(0.0, numerator / rep.field_norm);
  const double base = eval_cylinder(f, mu);
  rep.max_ratio = -std::numeric_limits<double>::infinity();
  for (double t : t_schedule) {
    if (!(t > 0.0)) throw InvalidArgument("t schedule must be positive");
    const double r = (eval_cylinder(f, displace(mu, u, t)) - base) / (t * rep.field_norm);
    rep.ratios.push_back(r);
    rep.max_ratio = std::max(rep.max_ratio, r);
  }
  return rep;
}

std::vector<SlopeUpperEntry> slope_upper_probe(
    const CylinderFunction& f, const DiscreteMeasure& mu, const Cost& cost,
    const std::vector<double>& radius_schedule, std::size_t pairs_per_radius,
    std::uint64_t seed) {
  const int d = mu.dim();
  const std::vector<Vec> df = differential_field(f, mu);

  // Unit-L^p field aligned with the differential.
  std::vector<Vec> aligned(mu.size(), Vec(d, 0.0));
  double lp = 0.0;
  std::vector<Vec> dictionary;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    try {
      aligned[i] = duality_map(cost, df[i]);
    } catch (const NotDifferentiable&) {
      if (dictionary.empty()) dictionary = direction_dictionary(cost.norm);
      aligned[i] = approx_duality_map(cost, df[i], 1e-3, dictionary);
    }
    lp += mu.weight(i) * std::pow(cost.norm.eval(aligned[i]), cost.p);
  }
  lp = std::pow(lp, 1.0 / cost.p);
  if (lp > 0.0) {
    for (Vec& v : aligned) v = scaled(1.0 / lp, v);
  }

  Vec nodes;
  Vec weights;
  gauss_legendre(16, nodes, weights);

  CounterRng rng(seed, CounterRng::stream_id("slope_upper_probe"));
  std::vector<SlopeUpperEntry> out;
  Vec dir(d);
  auto random_field = [&](double r) {
    std::vector<Vec> v(mu.size());
    for (Vec& x : v) {
      rng.unit_vector(dir);
      x = scaled(r * rng.uniform() / cost.norm.eval(dir), dir);
    }
    return v;
  };

  for (double r : radius_schedule) {
    if (!(r > 0.0)) throw InvalidArgument("radius schedule must be positive");
    SlopeUpperEntry e;
    e.radius = r;
    e.worst_pair_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pairs_per_radius; ++k) {
      std::vector<Vec> v1;
      std::vector<Vec> v2;
      if (k % 2 == 0 && lp > 0.0) {
        const double s = 0.5 * r * rng.uniform(0.2, 1.0);
        v1.resize(mu.size());
        v2.resize(mu.size());
        for (std::size_t i = 0; i < mu.size(); ++i) {
          v1[i] = scaled(-s, aligned[i]);
          v2[i] = scaled(s, aligned[i]);
        }
      } else {
        v1 = random_field(r);
        v2 = random_field(r);
      }
      const DiscreteMeasure m1 = displace(mu, v1, 1.0);
      const DiscreteMeasure m2 = displace(mu, v2, 1.0);
      const TransportSolution sol = solve_ot(m1, m2, cost);
      if (sol.wp <= 1e-13) continue;
      const double ratio = std::abs(eval_cylinder(f, m1) - eval_cylinder(f, m2)) / sol.wp;

      // Hoelder bound along the geodesic: |F(m1) - F(m2)| <= W int_0^1 g.
      double bound = 0.0;
      for (std::size_t node = 0; node < nodes.size(); ++node) {
        const double t = 0.5 * (nodes[node] + 1.0);
        const double g =
            differential_norm(f, geodesic_interpolate(m1, m2, sol, t), cost);
        bound += 0.5 * weights[node] * g;
        e.ball_sup = std::max(e.ball_sup, g);
      }
      e.ball_sup = std::max({e.ball_sup, differential_norm(f, m1, cost),
                             differential_norm(f, m2, cost)});
      e.max_ratio = std::max(e.max_ratio, ratio);
      e.worst_pair_excess = std::max(e.worst_pair_excess, ratio - bound);
      ++e.pairs;
    }
    if (e.pairs == 0) e.worst_pair_excess = 0.0;
    out.push_back(e);
  }
  for (SlopeUpperEntry& e : out) {
    for (const SlopeUpperEntry& other : out) {
      if (other.radius <= e.radius) e.envelope = std::max(e.envelope, other.max_ratio);
    }
  }
  return out;
}

}  // namespace wslab
