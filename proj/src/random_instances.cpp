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

#include "wslab/random_instances.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "wslab/error.hpp"

namespace wslab {
namespace {

// Random monomials of total degree <= max_degree in `vars` variables, with
// coefficients scaled so each term is O(1) on [-scale, scale]^vars.
std::vector<Monomial> random_terms(int vars, int max_degree, std::size_t count,
                                   double scale, CounterRng& rng) {
  std::vector<Monomial> terms;
  for (std::size_t t = 0; t < count; ++t) {
    Monomial m;
    m.exponents.assign(static_cast<std::size_t>(vars), 0);
    const int degree = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_degree)));
    for (int k = 0; k < degree; ++k) {
      ++m.exponents[rng.below(static_cast<std::uint64_t>(vars))];
    }
    m.coef = rng.uniform(-1.0, 1.0) / std::pow(std::max(scale, 1.0), degree);
    terms.push_back(std::move(m));
  }
  return terms;
}

}  // namespace

DiscreteMeasure random_measure(int dim, std::size_t atoms, double half_width,
                               CounterRng& rng) {
  if (dim < 1 || atoms == 0) throw InvalidArgument("random_measure needs dim >= 1 and atoms");
  std::vector<Vec> points(atoms, Vec(static_cast<std::size_t>(dim)));
  Vec weights(atoms);
  for (std::size_t i = 0; i < atoms; ++i) {
    for (double& x : points[i]) x = rng.uniform(-half_width, half_width);
    weights[i] = rng.uniform(0.2, 1.0);
  }
  return DiscreteMeasure(std::move(points), std::move(weights));
}

DiscreteMeasure random_ball_measure(const Norm& norm, std::size_t atoms,
                                    double radius, CounterRng& rng) {
  if (atoms == 0) throw InvalidArgument("random_ball_measure needs atoms");
  const auto d = static_cast<std::size_t>(norm.dim());
  std::vector<Vec> points(atoms, Vec(d));
  Vec weights(atoms);
  for (std::size_t i = 0; i < atoms; ++i) {
    rng.unit_vector(points[i]);
    const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d));
    const double n = norm.eval(points[i]);
    for (double& x : points[i]) x *= r / n;
    weights[i] = rng.uniform(0.2, 1.0);
  }
  return DiscreteMeasure(std::move(points), std::move(weights));
}

Vec random_vector(int dim, double scale, CounterRng& rng) {
  Vec v(static_cast<std::size_t>(dim));
  for (double& x : v) x = rng.uniform(-scale, scale);
  return v;
}

CylinderFunction random_cylinder(int dim, std::size_t fields, double data_half_width,
                                 CounterRng& rng) {
  if (fields == 0) throw InvalidArgument("random_cylinder needs fields");
  const double box = data_half_width + 1.0;
  std::vector<SmoothScalarField> inner;
  double feature_bound = 0.0;
  for (std::size_t n = 0; n < fields; ++n) {
    switch (rng.below(3)) {
      case 0:
        inner.push_back(SmoothScalarField::clamped_polynomial(
            dim, random_terms(dim, 3, 4, box, rng), box));
        break;
      case 1:
        inner.push_back(SmoothScalarField::gaussian_bump(
            random_vector(dim, data_half_width, rng), rng.uniform(0.4, 1.5) * box / 2.0,
            rng.uniform(-1.5, 1.5)));
        break;
      default: {
        Vec a = random_vector(dim, 1.0, rng);
        double l1 = 0.0;
        for (double x : a) l1 += std::abs(x);
        inner.push_back(SmoothScalarField::clamped_linear(std::move(a), l1 * box + 1.0));
        break;
      }
    }
    feature_bound = std::max(feature_bound, inner.back().sup_bound());
  }
  const double clamp = feature_bound + 1.0;
  std::vector<Monomial> terms = random_terms(static_cast<int>(fields), 2,
                                             2 * fields + 1, feature_bound, rng);
  return CylinderFunction(std::move(inner),
                          OuterMap::clamped_polynomial(static_cast<int>(fields),
                                                       std::move(terms), clamp));
}

MetaMeasure random_meta_measure(int dim, std::size_t atoms, std::size_t measure_atoms,
                                double half_width, CounterRng& rng) {
  std::vector<MetaAtom> out;
  for (std::size_t k = 0; k < atoms; ++k) {
    const double mass = rng.uniform(0.2, 1.0);
    out.push_back({mass, random_measure(dim, measure_atoms, half_width, rng)});
  }
  return MetaMeasure(std::move(out));
}

}  // namespace wslab
