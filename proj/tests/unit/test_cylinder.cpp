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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracles/oracles.hpp"
#include "wslab/cylinder.hpp"
#include "wslab/error.hpp"
#include "wslab/random_instances.hpp"
#include "wslab/rng.hpp"
#include "wslab/transport.hpp"

using wslab::ConstSpan;
using wslab::Cost;
using wslab::CounterRng;
using wslab::CylinderFunction;
using wslab::DiscreteMeasure;
using wslab::Monomial;
using wslab::Norm;
using wslab::OuterMap;
using wslab::SmoothScalarField;
using wslab::Vec;

namespace {

// |a - b| <= rel |a| + abs
bool close(double a, double b, double rel, double abs) {
  return std::abs(a - b) <= rel * std::abs(a) + abs;
}

std::vector<SmoothScalarField> sample_fields(int d) {
  std::vector<Monomial> terms{{1.5, std::vector<int>(d, 0)},
                              {-0.7, std::vector<int>(d, 1)}};
  std::vector<int> sq(d, 0);
  sq[0] = 3;
  terms.push_back({0.4, sq});
  Vec center(d, 0.3), a(d);
  for (int i = 0; i < d; ++i) a[i] = 1.0 - 0.6 * i;
  return {SmoothScalarField::clamped_polynomial(d, terms, 1.2),
          SmoothScalarField::gaussian_bump(center, 0.8, -1.3),
          SmoothScalarField::clamped_linear(a, 0.9)};
}

CylinderFunction linear_cylinder() {
  return CylinderFunction({SmoothScalarField::clamped_linear({1.0, 1.0}, 10.0)},
                          OuterMap::identity_clamp(10.0));
}

}  // namespace

TEST_CASE("saturation") {
  for (double c : {0.5, 2.0}) {
    CHECK(wslab::saturate(0.3 * c, c) == 0.3 * c);
    CHECK(wslab::saturate(c, c) == doctest::Approx(c));
    CHECK(wslab::saturate(1e6, c) <= c + 1.0);
    CHECK(wslab::saturate(-1e6, c) >= -c - 1.0);
    CHECK(wslab::saturate(-3.0 * c, c) == -wslab::saturate(3.0 * c, c));
    for (double t : {-3.0, -c - 1e-3, -0.1, 0.0, 0.2, c + 1e-3, 4.0}) {
      const double fd = oracle::central_difference(
          [&](double s) { return wslab::saturate(s, c); }, t, 1e-6);
      CHECK(wslab::saturate_slope(t, c) == doctest::Approx(fd).epsilon(1e-7));
    }
    CHECK(wslab::saturate_slope(c + 1e-12, c) == doctest::Approx(1.0));
  }
}

TEST_CASE("field gradients match finite differences") {
  CounterRng rng(17);
  for (int d = 1; d <= 3; ++d) {
    for (const auto& f : sample_fields(d)) {
      for (int trial = 0; trial < 20; ++trial) {
        const Vec x = wslab::random_vector(d, 2.0, rng);
        const Vec g = f.gradient(x);
        const Vec fd = oracle::gradient_fd([&](const Vec& y) { return f.value(y); },
                                           x, 1e-6);
        double len = 0.0;
        for (int k = 0; k < d; ++k) {
          CHECK(close(g[k], fd[k], 1e-6, 1e-8));
          len += g[k] * g[k];
        }
        CHECK(std::sqrt(len) <= f.lipschitz_bound() + 1e-12);
        CHECK(std::abs(f.value(x)) <= f.sup_bound() + 1e-12);
      }
    }
  }
}

TEST_CASE("outer map gradients match finite differences") {
  const OuterMap poly = OuterMap::clamped_polynomial(
      2, {{1.0, {1, 0}}, {-2.0, {1, 1}}, {0.5, {0, 2}}}, 1.5);
  const OuterMap clamp = OuterMap::identity_clamp(0.8);
  const OuterMap combo = OuterMap::sum(2.0, poly, -1.0, clamp);
  const OuterMap scaled = OuterMap::scaled(-0.5, combo);
  CHECK(combo.arity() == 3);
  CounterRng rng(9);
  for (const OuterMap* m : {&poly, &clamp, &combo, &scaled}) {
    for (int trial = 0; trial < 20; ++trial) {
      const Vec u = wslab::random_vector(m->arity(), 2.0, rng);
      const Vec g = m->gradient(u);
      const Vec fd = oracle::gradient_fd([&](const Vec& v) { return m->value(v); },
                                         u, 1e-6);
      for (int k = 0; k < m->arity(); ++k) CHECK(close(g[k], fd[k], 1e-6, 1e-8));
    }
  }
  const Vec u{0.3, -0.2, 0.5};
  CHECK(combo.value(u) == doctest::Approx(2.0 * poly.value(Vec{0.3, -0.2}) -
                                          clamp.value(Vec{0.5})));
  CHECK(scaled.value(u) == doctest::Approx(-0.5 * combo.value(u)));
  const OuterMap k = OuterMap::constant(2, 4.0);
  CHECK(k.value(Vec{1.0, 2.0}) == 4.0);
  CHECK(k.gradient(Vec{1.0, 2.0}) == Vec{0.0, 0.0});
}

TEST_CASE("linear cylinder function") {
  const auto f = linear_cylinder();
  const DiscreteMeasure mu({{1.0, 0.0}, {0.0, 2.0}}, {0.5, 0.5});
  CHECK(wslab::eval_cylinder(f, mu) == doctest::Approx(1.5));
  CHECK(wslab::differential(f, mu, Vec{5.0, -3.0}) == Vec{1.0, 1.0});
  CHECK(wslab::differential_norm(f, mu, Cost{Norm::euclidean(2), 2.0}) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(wslab::differential_norm(f, mu, Cost{Norm::one_norm(2), 3.0}) ==
        doctest::Approx(1.0));
  CHECK(f.features(mu).size() == 1);
}

TEST_CASE("differential is the derivative under atom displacement") {
  CounterRng rng(2);
  for (int d = 1; d <= 3; ++d) {
    const auto f = wslab::random_cylinder(d, 3, 1.0, rng);
    const auto mu = wslab::random_measure(d, 5, 1.0, rng);
    const auto df = wslab::differential_field(f, mu);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      for (int k = 0; k < d; ++k) {
        auto moved = [&](double h) {
          std::vector<Vec> v(mu.size(), Vec(d, 0.0));
          v[i][k] = 1.0;
          return wslab::eval_cylinder(f, wslab::displace(mu, v, h));
        };
        const double fd = oracle::central_difference(moved, 0.0, 1e-5);
        CHECK(close(mu.weight(i) * df[i][k], fd, 1e-5, 1e-8));
      }
    }
  }
}

TEST_CASE("geodesics interpolate at constant speed") {
  CounterRng rng(21);
  for (const Cost& cost : {Cost{Norm::euclidean(2), 2.0}, Cost{Norm::p_norm(2, 3.0), 2.5}}) {
    const auto mu0 = wslab::random_measure(2, 6, 1.0, rng);
    const auto mu1 = wslab::random_measure(2, 7, 1.0, rng);
    const auto plan = wslab::solve_ot(mu0, mu1, cost);
    const double w = plan.wp;
    CHECK(wslab::wasserstein(wslab::geodesic_interpolate(mu0, mu1, plan, 0.0), mu0,
                             cost) == doctest::Approx(0.0).scale(1.0));
    CHECK(wslab::wasserstein(wslab::geodesic_interpolate(mu0, mu1, plan, 1.0), mu1,
                             cost) == doctest::Approx(0.0).scale(1.0));
    for (auto [s, t] : {std::pair{0.0, 0.3}, std::pair{0.25, 0.75}, std::pair{0.6, 1.0}}) {
      const auto a = wslab::geodesic_interpolate(mu0, mu1, plan, s);
      const auto b = wslab::geodesic_interpolate(mu0, mu1, plan, t);
      CHECK(wslab::wasserstein(a, b, cost) ==
            doctest::Approx((t - s) * w).epsilon(1e-9));
    }
  }
}

TEST_CASE("derivative along a geodesic matches finite differences") {
  CounterRng rng(88);
  const Cost cost{Norm::p_norm(2, 1.5), 2.0};
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = wslab::random_cylinder(2, 3, 1.0, rng);
    const auto mu0 = wslab::random_measure(2, 4, 1.0, rng);
    const auto mu1 = wslab::random_measure(2, 4, 1.0, rng);
    const auto plan = wslab::solve_ot(mu0, mu1, cost);
    const double s = rng.uniform(0.1, 0.9);
    const double a = wslab::derivative_along_curve(f, mu0, mu1, plan, s);
    const double fd = oracle::central_difference(
        [&](double t) {
          return wslab::eval_cylinder(f, wslab::geodesic_interpolate(mu0, mu1, plan, t));
        },
        s, 1e-5);
    CHECK(close(a, fd, 1e-3, 1e-9));
  }
}

TEST_CASE("combinations and representation independence") {
  CounterRng rng(5);
  const auto f = wslab::random_cylinder(2, 2, 1.0, rng);
  const auto g = wslab::random_cylinder(2, 3, 1.0, rng);
  const auto mu = wslab::random_measure(2, 5, 1.0, rng);
  const auto h = wslab::combine(2.0, f, -0.5, g);
  CHECK(wslab::eval_cylinder(h, mu) ==
        doctest::Approx(2.0 * wslab::eval_cylinder(f, mu) -
                        0.5 * wslab::eval_cylinder(g, mu)));
  CHECK(wslab::eval_cylinder(wslab::scale(3.0, f), mu) ==
        doctest::Approx(3.0 * wslab::eval_cylinder(f, mu)));

  // f written with an extra field that carries zero weight.
  const auto padded = wslab::combine(1.0, f, 0.0, g);
  CHECK(wslab::eval_cylinder(padded, mu) == doctest::Approx(wslab::eval_cylinder(f, mu)));
  const Cost cost{Norm::euclidean(2), 2.0};
  CHECK(wslab::differential_norm(padded, mu, cost) ==
        doctest::Approx(wslab::differential_norm(f, mu, cost)));
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Vec a = wslab::differential(padded, mu, mu.point(i));
    const Vec b = wslab::differential(f, mu, mu.point(i));
    for (int k = 0; k < 2; ++k) CHECK(a[k] == doctest::Approx(b[k]));
  }

  // Splitting an atom into two coincident halves does not change anything.
  std::vector<Vec> pts = mu.points();
  Vec w = mu.weights();
  pts.push_back(pts[0]);
  w[0] *= 0.5;
  w.push_back(w[0]);
  const DiscreteMeasure split(pts, w);
  CHECK(wslab::eval_cylinder(f, split) == doctest::Approx(wslab::eval_cylinder(f, mu)));
}

TEST_CASE("cylinder functions serialize") {
  CounterRng rng(6);
  const auto f = wslab::random_cylinder(3, 3, 1.0, rng);
  const auto back = CylinderFunction::from_json(f.to_json());
  const auto mu = wslab::random_measure(3, 4, 1.0, rng);
  CHECK(wslab::eval_cylinder(back, mu) == wslab::eval_cylinder(f, mu));
  const auto outer = OuterMap::sum(1.0, OuterMap::identity_clamp(1.0), 2.0,
                                   OuterMap::constant(1, 3.0));
  const auto o2 = OuterMap::from_json(outer.to_json());
  CHECK(o2.value(Vec{0.4, 7.0}) == outer.value(Vec{0.4, 7.0}));
  CHECK_THROWS_AS(CylinderFunction::from_json(nlohmann::json::parse("{}")),
                  wslab::ParseError);
}

TEST_CASE("slope brackets the differential norm") {
  CounterRng rng(314);
  const std::vector<double> ts{1e-1, 1e-2, 1e-3, 1e-4};
  const std::vector<double> radii{0.5, 0.1, 0.02, 0.01};
  for (const Cost& cost : {Cost{Norm::euclidean(2), 2.0}, Cost{Norm::p_norm(2, 3.0), 3.0}}) {
    const auto dirs = wslab::direction_dictionary(cost.norm);
    for (int trial = 0; trial < 3; ++trial) {
      const auto f = wslab::random_cylinder(2, 3, 1.0, rng);
      const auto mu = wslab::random_measure(2, 5, 1.0, rng);
      const double dn = wslab::differential_norm(f, mu, cost);
      const auto lo = wslab::slope_lower_bound(f, mu, cost, 1e-3, ts, dirs);
      CHECK(lo.value <= dn * (1.0 + 1e-13));
      CHECK(lo.value >= dn * (1.0 - 0.05));
      const auto up = wslab::slope_upper_probe(f, mu, cost, radii, 40, rng.next_u64());
      REQUIRE(up.size() == radii.size());
      for (const auto& e : up) {
        CHECK(e.pairs == 40);
        CHECK(e.worst_pair_excess <= 1e-6);
        CHECK(e.max_ratio <= e.envelope);
      }
      CHECK(up.back().envelope >= lo.value * (1.0 - 1e-9));
      CHECK(up.back().envelope <= dn * 1.05);
    }
  }
}

TEST_CASE("constant functions have zero slope") {
  const CylinderFunction f({SmoothScalarField::gaussian_bump({0.0, 0.0}, 1.0, 1.0)},
                           OuterMap::constant(1, 2.0));
  const DiscreteMeasure mu({{0.1, 0.2}, {-0.3, 0.4}}, {0.5, 0.5});
  const Cost cost{Norm::euclidean(2), 2.0};
  CHECK(wslab::differential_norm(f, mu, cost) == 0.0);
  const auto lo = wslab::slope_lower_bound(f, mu, cost, 1e-3, {1e-2},
                                           wslab::direction_dictionary(cost.norm));
  CHECK(lo.value == 0.0);
  const auto up = wslab::slope_upper_probe(f, mu, cost, {0.1}, 10, 1);
  CHECK(up[0].envelope == 0.0);
}
