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

#include "wslab/measures.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "wslab/error.hpp"
#include "wslab/rng.hpp"

namespace wslab {
namespace {

double bump(double r2) { return r2 < 1.0 ? std::exp(-1.0 / (1.0 - r2)) : 0.0; }

// int_0^1 r^a exp(-1/(1-r^2)) dr
double radial_integral(double a) {
  const Vec lo{0.0};
  const Vec hi{1.0};
  CubatureOptions opts;
  opts.rel_tol = 1e-14;
  opts.order = 16;
  return adaptive_cubature(
             [a](ConstSpan r) { return std::pow(r[0], a) * bump(r[0] * r[0]); },
             lo, hi, opts)
      .value;
}

double sphere_area(int dim) {
  switch (dim) {
    case 1:
      return 2.0;
    case 2:
      return 2.0 * std::numbers::pi;
    case 3:
      return 4.0 * std::numbers::pi;
    default:
      throw DimensionError("mollification supports dimensions 1 to 3");
  }
}

// int over the Euclidean unit sphere of g(theta) d sigma.
double sphere_integral(int dim, const ScalarField& g) {
  CubatureOptions opts;
  opts.rel_tol = 1e-12;
  switch (dim) {
    case 1: {
      const std::array<double, 1> pos{1.0};
      const std::array<double, 1> neg{-1.0};
      return g(pos) + g(neg);
    }
    case 2: {
      const Vec lo{0.0};
      const Vec hi{2.0 * std::numbers::pi};
      Vec u(2);
      return adaptive_cubature(
                 [&](ConstSpan t) {
                   u = {std::cos(t[0]), std::sin(t[0])};
                   return g(u);
                 },
                 lo, hi, opts)
          .value;
    }
    case 3: {
      const Vec lo{0.0, 0.0};
      const Vec hi{std::numbers::pi, 2.0 * std::numbers::pi};
      Vec u(3);
      opts.rel_tol = 1e-10;
      return adaptive_cubature(
                 [&](ConstSpan t) {
                   const double s = std::sin(t[0]);
                   u = {s * std::cos(t[1]), s * std::sin(t[1]), std::cos(t[0])};
                   return g(u) * s;
                 },
                 lo, hi, opts)
          .value;
    }
    default:
      throw DimensionError("mollification supports dimensions 1 to 3");
  }
}

Vec canonical(Vec x) {
  for (double& v : x) {
    if (v == 0.0) v = 0.0;  // folds -0.0 into +0.0
  }
  return x;
}

}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<Vec> points, Vec weights) {
  if (points.empty()) throw InvalidArgument("measure needs at least one atom");
  if (points.size() != weights.size()) {
    throw InvalidArgument("measure needs one weight per point");
  }
  dim_ = static_cast<int>(points[0].size());
  if (dim_ < 1) throw DimensionError("measure points must have dimension >= 1");
  std::map<Vec, std::size_t> index;
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_dim(points[i].size(), static_cast<std::size_t>(dim_), "measure point");
    const double w = weights[i];
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("measure weights must be finite and nonnegative");
    }
    for (double v : points[i]) {
      if (!std::isfinite(v)) throw InvalidArgument("measure points must be finite");
    }
    if (w == 0.0) continue;
    Vec x = canonical(std::move(points[i]));
    auto [it, inserted] = index.try_emplace(x, points_.size());
    if (inserted) {
      points_.push_back(std::move(x));
      weights_.push_back(w);
    } else {
      weights_[it->second] += w;
    }
    total += w;
  }
  if (points_.empty()) throw InvalidArgument("measure has zero total weight");
  for (double& w : weights_) w /= total;
}

DiscreteMeasure DiscreteMeasure::dirac(Vec point) {
  return DiscreteMeasure({std::move(point)}, {1.0});
}

DiscreteMeasure DiscreteMeasure::uniform(std::vector<Vec> points) {
  Vec w(points.size(), 1.0);
  return DiscreteMeasure(std::move(points), std::move(w));
}

double DiscreteMeasure::support_radius(const Norm& norm) const {
  double r = 0.0;
  for (const Vec& x : points_) r = std::max(r, norm.eval(x));
  return r;
}

MetaMeasure::MetaMeasure(std::vector<MetaAtom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InvalidArgument("meta-measure needs at least one atom");
  for (const MetaAtom& a : atoms_) {
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) {
      throw InvalidArgument("meta-measure masses must be positive and finite");
    }
  }
}

double MetaMeasure::total_mass() const {
  double s = 0.0;
  for (const MetaAtom& a : atoms_) s += a.mass;
  return s;
}

double Mollifier::normalization(int dim) {
  static const std::array<double, 3> table = [] {
    std::array<double, 3> z{};
    for (int d = 1; d <= 3; ++d) z[d - 1] = sphere_area(d) * radial_integral(d - 1.0);
    return z;
  }();
  if (dim < 1 || dim > 3) {
    throw DimensionError("mollification supports dimensions 1 to 3");
  }
  return table[dim - 1];
}

Mollifier::Mollifier(int dim, double eps) : dim_(dim), eps_(eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) {
    throw InvalidArgument("mollifier scale must lie in (0, 1)");
  }
  z_ = normalization(dim);
}

double Mollifier::kernel(ConstSpan u) const {
  require_dim(u.size(), static_cast<std::size_t>(dim_), "mollifier kernel");
  return bump(dot(u, u)) / z_;
}

double moment_p(const DiscreteMeasure& mu, const Cost& cost) {
  require_dim(static_cast<std::size_t>(mu.dim()),
              static_cast<std::size_t>(cost.dim()), "moment_p");
  double s = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    s += mu.weight(i) * std::pow(cost.norm.eval(mu.point(i)), cost.p);
  }
  return s;
}

double mollified_expectation(const DiscreteMeasure& mu, const Mollifier& moll,
                             const ScalarField& f, double rel_tol) {
  require_dim(static_cast<std::size_t>(mu.dim()),
              static_cast<std::size_t>(moll.dim()), "mollified_expectation");
  const int d = mu.dim();
  const double eps = moll.eps();
  Vec y(d);
  auto integrand = [&](ConstSpan u) {
    const double k = moll.kernel(u);
    if (k == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const Vec& x = mu.point(i);
      for (int c = 0; c < d; ++c) y[c] = x[c] + eps * u[c];
      s += mu.weight(i) * f(y);
    }
    return k * s;
  };
  const Vec lo(d, -1.0);
  const Vec hi(d, 1.0);
  CubatureOptions opts;
  opts.rel_tol = rel_tol;
  return adaptive_cubature(integrand, lo, hi, opts).value;
}

double kernel_moment(const Mollifier& moll, const Cost& cost) {
  require_dim(static_cast<std::size_t>(moll.dim()),
              static_cast<std::size_t>(cost.dim()), "kernel_moment");
  const int d = moll.dim();
  const double p = cost.p;
  const double angular = sphere_integral(
      d, [&](ConstSpan u) { return std::pow(cost.norm.eval(u), p); });
  const double radial = radial_integral(p + d - 1.0);
  return std::pow(moll.eps(), p) * angular * radial / Mollifier::normalization(d);
}

std::vector<Vec> draw_mollified(const DiscreteMeasure& mu,
                                const Mollifier& moll, std::size_t n,
                                std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("sample count must be >= 1");
  require_dim(static_cast<std::size_t>(mu.dim()),
              static_cast<std::size_t>(moll.dim()), "sample_mollified");
  const int d = mu.dim();
  Vec cumulative(mu.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) cumulative[i] = acc += mu.weight(i);
  CounterRng rng(seed, CounterRng::stream_id("sample_mollified"));
  std::vector<Vec> out;
  out.reserve(n);
  Vec u(d);
  for (std::size_t s = 0; s < n; ++s) {
    const double t = rng.uniform() * acc;
    const std::size_t i = std::min<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), t) - cumulative.begin(),
        mu.size() - 1);
    while (true) {
      for (int c = 0; c < d; ++c) u[c] = rng.uniform(-1.0, 1.0);
      const double r2 = dot(u, u);
      if (r2 >= 1.0) continue;
      // Accept with probability bump(r2) / bump(0).
      if (rng.uniform() < std::exp(1.0 - 1.0 / (1.0 - r2))) break;
    }
    out.push_back(axpy(mu.point(i), moll.eps(), u));
  }
  return out;
}

DiscreteMeasure sample_mollified(const DiscreteMeasure& mu,
                                 const Mollifier& moll, std::size_t n,
                                 std::uint64_t seed) {
  return DiscreteMeasure::uniform(draw_mollified(mu, moll, n, seed));
}

nlohmann::json to_json(const DiscreteMeasure& mu) {
  return {{"dim", mu.dim()}, {"points", mu.points()}, {"weights", mu.weights()}};
}

DiscreteMeasure measure_from_json(const nlohmann::json& j) {
  try {
    DiscreteMeasure mu(j.at("points").get<std::vector<Vec>>(),
                       j.at("weights").get<Vec>());
    if (j.contains("dim") && j.at("dim").get<int>() != mu.dim()) {
      throw ParseError("measure dim does not match its points");
    }
    return mu;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed measure: ") + e.what());
  }
}

nlohmann::json to_json(const MetaMeasure& m) {
  nlohmann::json out = nlohmann::json::array();
  for (const MetaAtom& a : m.atoms()) {
    out.push_back({{"mass", a.mass}, {"measure", to_json(a.measure)}});
  }
  return out;
}

MetaMeasure meta_measure_from_json(const nlohmann::json& j) {
  try {
    std::vector<MetaAtom> atoms;
    for (const auto& a : j) {
      atoms.push_back({a.at("mass").get<double>(), measure_from_json(a.at("measure"))});
    }
    return MetaMeasure(std::move(atoms));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed meta-measure: ") + e.what());
  }
}

std::string format_double(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string to_csv(const DiscreteMeasure& mu) {
  std::string out = "weight";
  for (int c = 1; c <= mu.dim(); ++c) out += ",x" + std::to_string(c);
  out += '\n';
  for (std::size_t i = 0; i < mu.size(); ++i) {
    out += format_double(mu.weight(i));
    for (double v : mu.point(i)) out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

DiscreteMeasure measure_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Vec> points;
  Vec weights;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Vec row;
    std::size_t start = 0;
    bool numeric = true;
    while (start <= line.size()) {
      std::size_t end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      double v = 0.0;
      const char* first = line.data() + start;
      const char* last = line.data() + end;
      while (first < last && *first == ' ') ++first;
      const auto res = std::from_chars(first, last, v);
      if (res.ec != std::errc() || res.ptr != last) {
        numeric = false;
        break;
      }
      row.push_back(v);
      start = end + 1;
    }
    if (!numeric) {
      if (line_no == 1) continue;  // header
      throw ParseError("non-numeric CSV field on line " + std::to_string(line_no));
    }
    if (row.size() < 2) {
      throw ParseError("CSV row needs a weight and coordinates, line " +
                       std::to_string(line_no));
    }
    weights.push_back(row[0]);
    points.emplace_back(row.begin() + 1, row.end());
  }
  if (points.empty()) throw ParseError("CSV measure has no rows");
  try {
    return DiscreteMeasure(std::move(points), std::move(weights));
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  } catch (const DimensionError& e) {
    throw ParseError(e.what());
  }
}

}  // namespace wslab
