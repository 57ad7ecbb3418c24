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

#include "wslab/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "sphere_search.hpp"
#include "wslab/error.hpp"

namespace wslab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double max_abs(ConstSpan x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

// (sum_i w_i |x_i|^a)^(1/a) with w == nullptr meaning unit weights.
double lp(ConstSpan x, double a, const Vec* w) {
  if (std::isinf(a)) return max_abs(x);
  const double m = max_abs(x);
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = std::pow(std::abs(x[i]) / m, a);
    s += w ? (*w)[i] * t : t;
  }
  return m * std::pow(s, 1.0 / a);
}

double conjugate(double a) {
  if (std::isinf(a)) return 1.0;
  if (a == 1.0) return kInf;
  return a / (a - 1.0);
}

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

void check_dim(int dim) {
  if (dim < 1) throw InvalidArgument("norm dimension must be positive");
}

}  // namespace

Norm Norm::euclidean(int dim) {
  check_dim(dim);
  Norm n;
  n.dim_ = dim;
  n.kind_ = NormKind::kEuclidean;
  return n;
}

Norm Norm::p_norm(int dim, double exponent) {
  check_dim(dim);
  if (!(exponent > 1.0)) {
    throw InvalidArgument("p_norm exponent must lie in (1, inf]");
  }
  Norm n;
  n.dim_ = dim;
  n.kind_ = NormKind::kPNorm;
  n.exponent_ = exponent;
  return n;
}

Norm Norm::one_norm(int dim) {
  check_dim(dim);
  Norm n;
  n.dim_ = dim;
  n.kind_ = NormKind::kOneNorm;
  n.exponent_ = 1.0;
  return n;
}

Norm Norm::weighted_p(Vec weights, double exponent) {
  check_dim(static_cast<int>(weights.size()));
  if (!(exponent > 1.0) || std::isinf(exponent)) {
    throw InvalidArgument("weighted_p exponent must lie in (1, inf)");
  }
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("weighted_p weights must be positive and finite");
    }
  }
  Norm n;
  n.dim_ = static_cast<int>(weights.size());
  n.kind_ = NormKind::kWeightedP;
  n.exponent_ = exponent;
  n.weights_ = std::move(weights);
  return n;
}

Norm Norm::smoothed(const Norm& base, int k) {
  if (base.kind() == NormKind::kSmoothed) {
    throw InvalidArgument("smoothed norm base must not itself be smoothed");
  }
  if (base.dim() > 3) {
    throw DimensionError("smoothed norm supports dimensions 1 to 3");
  }
  if (k < 1) throw InvalidArgument("smoothing index must be >= 1");
  Norm n;
  n.dim_ = base.dim();
  n.kind_ = NormKind::kSmoothed;
  n.base_ = std::make_shared<const Norm>(base);
  n.k_ = k;
  const auto m = detail::minimize_on_sphere(
      base.dim(), [&base](ConstSpan u) { return base.eval(u); });
  n.eta_ = 1.0 / m.value;
  return n;
}

const Norm& Norm::base() const {
  if (!base_) throw InvalidArgument("norm has no base");
  return *base_;
}

double Norm::eval(ConstSpan x) const {
  require_dim(x.size(), static_cast<std::size_t>(dim_), "eval_norm");
  switch (kind_) {
    case NormKind::kEuclidean:
      return lp(x, 2.0, nullptr);
    case NormKind::kPNorm:
      return lp(x, exponent_, nullptr);
    case NormKind::kOneNorm: {
      double s = 0.0;
      for (double v : x) s += std::abs(v);
      return s;
    }
    case NormKind::kWeightedP:
      return lp(x, exponent_, &weights_);
    case NormKind::kSmoothed:
      return smoothed_gauge(x);
  }
  return 0.0;
}

double Norm::eval_dual(ConstSpan v) const {
  require_dim(v.size(), static_cast<std::size_t>(dim_), "eval_dual_norm");
  switch (kind_) {
    case NormKind::kEuclidean:
      return lp(v, 2.0, nullptr);
    case NormKind::kPNorm: {
      const double b = conjugate(exponent_);
      if (b == 1.0) {
        double s = 0.0;
        for (double x : v) s += std::abs(x);
        return s;
      }
      return lp(v, b, nullptr);
    }
    case NormKind::kOneNorm:
      return max_abs(v);
    case NormKind::kWeightedP: {
      const double b = conjugate(exponent_);
      Vec w(weights_.size());
      for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = std::pow(weights_[i], 1.0 - b);
      }
      return lp(v, b, &w);
    }
    case NormKind::kSmoothed:
      return smoothed_support(v) + base_->eval_dual(v) / k_;
  }
  return 0.0;
}

double Norm::core_radius(ConstSpan unit_dir) const {
  const double b = base_->eval(unit_dir);
  const double c = 1.0 + eta_ * eta_ / k_;
  // Positive root of r b + r^2 / k = c.
  return 2.0 * c / (b + std::sqrt(b * b + 4.0 * c / k_));
}

bool Norm::in_smoothed_ball(ConstSpan z) const {
  const double c = 1.0 + eta_ * eta_ / k_;
  const double inner = base_->eval(z) + dot(z, z) / k_;
  if (inner <= c) return true;
  const double radius = 1.0 / k_;
  Vec diff(z.size());
  const auto m = detail::minimize_on_sphere(dim_, [&](ConstSpan u) {
    const double r = core_radius(u);
    for (std::size_t i = 0; i < z.size(); ++i) diff[i] = z[i] - r * u[i];
    return base_->eval(diff);
  });
  return m.value <= radius;
}

double Norm::smoothed_gauge(ConstSpan x) const {
  const double bx = base_->eval(x);
  if (bx == 0.0) return 0.0;
  const double c = 1.0 + eta_ * eta_ / k_;
  Vec z(x.size());
  auto inside = [&](double t) {
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] / t;
    return in_smoothed_ball(z);
  };
  // C_k lies in B_b(0, c + 1/k), so the gauge is at least bx / (c + 1/k).
  double lo = bx / (c + 1.0 / k_);
  double hi = bx * k_ / (k_ + 1.0);
  while (!inside(hi)) hi *= 1.5;
  while (hi - lo > 1e-13 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (inside(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double Norm::smoothed_support(ConstSpan v) const {
  const auto m = detail::minimize_on_sphere(
      dim_, [&](ConstSpan u) { return -core_radius(u) * dot(v, u); });
  return std::max(0.0, -m.value);
}

double eval_norm(const Norm& norm, ConstSpan x) { return norm.eval(x); }

double eval_dual_norm(const Norm& norm, ConstSpan v) {
  return norm.eval_dual(v);
}

Cost::Cost(Norm n, double exponent) : norm(std::move(n)), p(exponent) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw InvalidArgument("cost exponent p must lie in (1, inf)");
  }
}

double Cost::operator()(ConstSpan x, ConstSpan y) const {
  require_dim(x.size(), static_cast<std::size_t>(dim()), "cost");
  require_dim(y.size(), static_cast<std::size_t>(dim()), "cost");
  const std::size_t d = x.size();
  if (d <= 8) {
    std::array<double, 8> diff{};
    for (std::size_t i = 0; i < d; ++i) diff[i] = x[i] - y[i];
    return std::pow(norm.eval(ConstSpan(diff.data(), d)), p) / p;
  }
  return std::pow(norm.eval(sub(x, y)), p) / p;
}

Vec duality_map(const Cost& cost, ConstSpan v) {
  const Norm& norm = cost.norm;
  require_dim(v.size(), static_cast<std::size_t>(norm.dim()), "duality_map");
  const double q = cost.p_conj();
  const std::size_t d = v.size();
  Vec j(d, 0.0);
  const double nv = norm.eval_dual(v);
  if (nv == 0.0) return j;

  switch (norm.kind()) {
    case NormKind::kEuclidean: {
      const double s = std::pow(nv, q - 2.0);
      for (std::size_t i = 0; i < d; ++i) j[i] = s * v[i];
      return j;
    }
    case NormKind::kPNorm:
    case NormKind::kWeightedP: {
      const double b = conjugate(norm.exponent());
      if (b == 1.0) {
        for (double x : v) {
          if (x == 0.0) {
            throw NotDifferentiable(
                "dual l1 norm is not differentiable at a zero coordinate");
          }
        }
        const double s = std::pow(nv, q - 1.0);
        for (std::size_t i = 0; i < d; ++i) j[i] = s * sign(v[i]);
        return j;
      }
      const double s = std::pow(nv, q - b);
      for (std::size_t i = 0; i < d; ++i) {
        const double w = norm.kind() == NormKind::kWeightedP
                             ? std::pow(norm.weights()[i], 1.0 - b)
                             : 1.0;
        j[i] = s * w * sign(v[i]) * std::pow(std::abs(v[i]), b - 1.0);
      }
      return j;
    }
    case NormKind::kOneNorm: {
      std::size_t arg = 0;
      int count = 0;
      for (std::size_t i = 0; i < d; ++i) {
        if (std::abs(v[i]) == nv) {
          if (count == 0) arg = i;
          ++count;
        }
      }
      if (count > 1) {
        throw NotDifferentiable(
            "dual max norm is not differentiable at a tied maximum");
      }
      j[arg] = std::pow(nv, q - 1.0) * sign(v[arg]);
      return j;
    }
    case NormKind::kSmoothed: {
      const double h = 1e-6 * (1.0 + nv);
      Vec w(v.begin(), v.end());
      for (std::size_t i = 0; i < d; ++i) {
        w[i] = v[i] + h;
        const double up = std::pow(norm.eval_dual(w), q) / q;
        w[i] = v[i] - h;
        const double down = std::pow(norm.eval_dual(w), q) / q;
        w[i] = v[i];
        j[i] = (up - down) / (2.0 * h);
      }
      return j;
    }
  }
  return j;
}

Vec approx_duality_map(const Cost& cost, ConstSpan v, double eps,
                       const std::vector<Vec>& directions) {
  if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
  const Norm& norm = cost.norm;
  require_dim(v.size(), static_cast<std::size_t>(norm.dim()),
              "approx_duality_map");
  const double nv = norm.eval_dual(v);
  const double scale = std::pow(nv, cost.p_conj() / cost.p);
  for (const Vec& x : directions) {
    require_dim(x.size(), v.size(), "approx_duality_map direction");
    const double nx = norm.eval(x);
    if (nx == 0.0) continue;
    if (dot(v, x) / nx >= nv - eps) return scaled(scale / nx, x);
  }
  throw InvalidArgument("no dictionary direction is eps-optimal for v");
}

std::vector<Vec> direction_dictionary(const Norm& norm, std::size_t count) {
  const int d = norm.dim();
  if (count == 0) {
    static constexpr std::size_t kDefault[] = {0, 0, 8192, 65536, 262144};
    count = d <= 4 ? kDefault[d] : 262144;
  }
  std::vector<Vec> out;
  out.reserve(count + 2 * d + (d <= 10 ? (std::size_t{1} << d) : 0));
  // Extreme points of the l1 and sup-norm balls first, so polyhedral norms
  // attain their dual norm exactly.
  for (int i = 0; i < d; ++i) {
    for (double sgn : {1.0, -1.0}) {
      Vec e(d, 0.0);
      e[i] = sgn;
      out.push_back(std::move(e));
    }
  }
  if (d >= 2 && d <= 10) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      Vec e(d);
      for (int i = 0; i < d; ++i) e[i] = (mask >> i) & 1 ? -1.0 : 1.0;
      out.push_back(std::move(e));
    }
  }
  if (d == 2) {
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    for (std::size_t n = 0; n < count; ++n) {
      const double frac = std::fmod(n * golden, 1.0);
      const double t = 2.0 * std::numbers::pi * frac;
      out.push_back({std::cos(t), std::sin(t)});
    }
  } else if (d >= 3) {
    // Additive recurrence with the generalized golden ratio in R^(2m),
    // mapped to Gaussians with Box-Muller and projected to the sphere.
    const int m = (d + 1) / 2;
    const int s = 2 * m;
    double g = 2.0;
    for (int it = 0; it < 64; ++it) g = std::pow(1.0 + g, 1.0 / (s + 1));
    Vec alpha(s);
    for (int i = 0; i < s; ++i) alpha[i] = std::fmod(std::pow(1.0 / g, i + 1), 1.0);
    for (std::size_t n = 0; n < count; ++n) {
      Vec x(d);
      for (int i = 0; i < m; ++i) {
        double u1 = std::fmod(0.5 + (n + 1) * alpha[2 * i], 1.0);
        const double u2 = std::fmod(0.5 + (n + 1) * alpha[2 * i + 1], 1.0);
        u1 = std::max(u1, 1e-300);
        const double r = std::sqrt(-2.0 * std::log(u1));
        x[2 * i] = r * std::cos(2.0 * std::numbers::pi * u2);
        if (2 * i + 1 < d) x[2 * i + 1] = r * std::sin(2.0 * std::numbers::pi * u2);
      }
      if (euclidean_length(x) == 0.0) continue;
      out.push_back(std::move(x));
    }
  }
  for (Vec& x : out) {
    const double nx = norm.eval(x);
    for (double& c : x) c /= nx;
  }
  return out;
}

nlohmann::json to_json(const Norm& norm) {
  nlohmann::json params = nlohmann::json::object();
  std::string kind;
  switch (norm.kind()) {
    case NormKind::kEuclidean:
      kind = "euclidean";
      break;
    case NormKind::kPNorm:
      kind = "p_norm";
      if (std::isinf(norm.exponent())) {
        params["exponent"] = "inf";
      } else {
        params["exponent"] = norm.exponent();
      }
      break;
    case NormKind::kOneNorm:
      kind = "one_norm";
      break;
    case NormKind::kWeightedP:
      kind = "weighted_p";
      params["exponent"] = norm.exponent();
      params["weights"] = norm.weights();
      break;
    case NormKind::kSmoothed:
      kind = "smoothed";
      params["base"] = to_json(norm.base());
      params["k"] = norm.smoothing_index();
      break;
  }
  return {{"dim", norm.dim()}, {"kind", kind}, {"params", params}};
}

Norm norm_from_json(const nlohmann::json& j) {
  try {
    const int dim = j.at("dim").get<int>();
    const std::string kind = j.at("kind").get<std::string>();
    const nlohmann::json params =
        j.contains("params") ? j.at("params") : nlohmann::json::object();
    Norm out = [&] {
      if (kind == "euclidean") return Norm::euclidean(dim);
      if (kind == "one_norm") return Norm::one_norm(dim);
      if (kind == "p_norm") {
        const auto& e = params.at("exponent");
        const double a = e.is_string() && e.get<std::string>() == "inf"
                             ? kInf
                             : e.get<double>();
        return Norm::p_norm(dim, a);
      }
      if (kind == "weighted_p") {
        return Norm::weighted_p(params.at("weights").get<Vec>(),
                                params.at("exponent").get<double>());
      }
      if (kind == "smoothed") {
        return Norm::smoothed(norm_from_json(params.at("base")),
                              params.at("k").get<int>());
      }
      throw ParseError("unknown norm kind '" + kind + "'");
    }();
    if (out.dim() != dim) {
      throw ParseError("norm dim does not match its parameters");
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed norm: ") + e.what());
  }
}

nlohmann::json to_json(const Cost& cost) {
  return {{"norm", to_json(cost.norm)}, {"p", cost.p}};
}

Cost cost_from_json(const nlohmann::json& j) {
  try {
    return Cost(norm_from_json(j.at("norm")), j.at("p").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed cost: ") + e.what());
  }
}

}  // namespace wslab
