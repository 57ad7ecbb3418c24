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

#include "sphere_search.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "wslab/error.hpp"

namespace wslab::detail {
namespace {

constexpr int kCircleGrid = 720;
constexpr int kSphereGrid = 2000;
constexpr int kCandidates = 4;

SphereMin circle(const std::function<double(ConstSpan)>& f) {
  const double step = 2.0 * std::numbers::pi / kCircleGrid;
  std::array<double, 2> u{};
  auto at = [&](double theta) {
    u = {std::cos(theta), std::sin(theta)};
    return f(u);
  };
  std::vector<double> values(kCircleGrid);
  for (int i = 0; i < kCircleGrid; ++i) values[i] = at(i * step);

  std::vector<std::pair<double, int>> local;
  for (int i = 0; i < kCircleGrid; ++i) {
    const double prev = values[(i + kCircleGrid - 1) % kCircleGrid];
    const double next = values[(i + 1) % kCircleGrid];
    if (values[i] <= prev && values[i] <= next) local.emplace_back(values[i], i);
  }
  std::sort(local.begin(), local.end());
  if (local.size() > kCandidates) local.resize(kCandidates);

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  SphereMin best{values[0], {1.0, 0.0}};
  for (const auto& [v0, i] : local) {
    double a = (i - 1) * step;
    double b = (i + 1) * step;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = at(x1);
    double f2 = at(x2);
    while (b - a > 1e-13) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - inv_phi * (b - a);
        f1 = at(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + inv_phi * (b - a);
        f2 = at(x2);
      }
    }
    double theta = f1 <= f2 ? x1 : x2;
    double value = std::min(f1, f2);
    if (v0 < value) {
      theta = i * step;
      value = v0;
    }
    if (value < best.value) best = {value, {std::cos(theta), std::sin(theta)}};
  }
  return best;
}

Vec normalized(Vec v) {
  const double n = euclidean_length(v);
  for (double& x : v) x /= n;
  return v;
}

SphereMin sphere(const std::function<double(ConstSpan)>& f) {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<std::pair<double, Vec>> samples;
  samples.reserve(kSphereGrid);
  for (int i = 0; i < kSphereGrid; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / kSphereGrid;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double t = golden * i;
    Vec u{r * std::cos(t), r * std::sin(t), z};
    const double value = f(u);
    samples.emplace_back(value, std::move(u));
  }
  std::partial_sort(samples.begin(), samples.begin() + kCandidates * 4,
                    samples.end(),
                    [](const auto& a, const auto& b) { return a.first < b.first; });

  const double spacing = std::sqrt(4.0 * std::numbers::pi / kSphereGrid);
  SphereMin best{samples[0].first, samples[0].second};
  std::vector<Vec> starts;
  for (int i = 0; i < kCandidates * 4 && static_cast<int>(starts.size()) < kCandidates; ++i) {
    const Vec& c = samples[i].second;
    bool distinct = true;
    for (const Vec& s : starts) {
      if (euclidean_length(sub(s, c)) < 3.0 * spacing) distinct = false;
    }
    if (distinct) starts.push_back(c);
  }

  for (Vec u0 : starts) {
    double value = f(u0);
    double step = 2.0 * spacing;
    while (step > 1e-11) {
      // Orthonormal tangent basis at u0.
      Vec e1 = std::abs(u0[0]) < 0.9 ? Vec{1.0, 0.0, 0.0} : Vec{0.0, 1.0, 0.0};
      e1 = normalized(axpy(e1, -dot(e1, u0), u0));
      Vec e2{u0[1] * e1[2] - u0[2] * e1[1], u0[2] * e1[0] - u0[0] * e1[2],
             u0[0] * e1[1] - u0[1] * e1[0]};
      bool moved = false;
      for (const Vec* e : {&e1, &e2}) {
        for (double sgn : {1.0, -1.0}) {
          Vec trial = normalized(axpy(u0, sgn * step, *e));
          const double tv = f(trial);
          if (tv < value) {
            value = tv;
            u0 = std::move(trial);
            moved = true;
            break;
          }
        }
        if (moved) break;
      }
      if (!moved) step *= 0.5;
    }
    if (value < best.value) best = {value, u0};
  }
  return best;
}

}  // namespace

SphereMin minimize_on_sphere(int dim,
                             const std::function<double(ConstSpan)>& f) {
  switch (dim) {
    case 1: {
      const std::array<double, 1> pos{1.0};
      const std::array<double, 1> neg{-1.0};
      const double a = f(pos);
      const double b = f(neg);
      return a <= b ? SphereMin{a, {1.0}} : SphereMin{b, {-1.0}};
    }
    case 2:
      return circle(f);
    case 3:
      return sphere(f);
    default:
      throw DimensionError("sphere search supports dimensions 1 to 3");
  }
}

}  // namespace wslab::detail
