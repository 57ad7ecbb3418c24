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
#include <limits>
#include <numbers>
#include <vector>

#include "oracles/oracles.hpp"
#include "wslab/error.hpp"
#include "wslab/measures.hpp"
#include "wslab/quadrature.hpp"
#include "wslab/random_instances.hpp"
#include "wslab/rng.hpp"

using wslab::ConstSpan;
using wslab::Cost;
using wslab::CounterRng;
using wslab::DiscreteMeasure;
using wslab::Mollifier;
using wslab::Norm;
using wslab::Vec;

namespace {

double euclid(ConstSpan x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// Reconstruction renormalizes, which may move a weight by one ulp.
bool same_weights(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a.weight(i) - b.weight(i)) > 4e-16) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rng streams follow the documented formula") {
  // Reference SplitMix64 output for state 0.
  CHECK(CounterRng::mix64(0x9E3779B97F4A7C15ULL) == 0xE220A8397B1DCDAFULL);

  const std::uint64_t seed = 12345, stream = CounterRng::stream_id("abc");
  const std::uint64_t key =
      CounterRng::mix64(seed ^ CounterRng::mix64(stream + 0x632BE59BD9B4E019ULL));
  CounterRng rng(seed, stream);
  for (std::uint64_t i = 0; i < 16; ++i) {
    CHECK(rng.next_u64() == CounterRng::mix64(key + (i + 1) * 0x9E3779B97F4A7C15ULL));
  }

  // FNV-1a reference values.
  CHECK(CounterRng::stream_id("") == 0xCBF29CE484222325ULL);
  CHECK(CounterRng::stream_id("a") == 0xAF63DC4C8601EC8CULL);
}

TEST_CASE("rng draws are reproducible and in range") {
  CounterRng a(7, 3), b(7, 3), c(8, 3);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    differs = differs || (u != c.uniform());
    const std::uint64_t k = a.below(17);
    b.below(17);
    c.below(17);
    CHECK(k < 17);
  }
  CHECK(differs);

  CounterRng parent(1);
  CounterRng c1 = parent.child(0), c2 = parent.child(1), c1b = parent.child(0);
  const std::uint64_t x = c1.next_u64();
  CHECK(x == c1b.next_u64());
  CHECK(x != c2.next_u64());

  Vec v(5);
  parent.unit_vector(v);
  CHECK(euclid(v) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("gauss-legendre rules integrate polynomials exactly") {
  for (int n : {1, 2, 5, 8, 16}) {
    Vec x, w;
    wslab::gauss_legendre(n, x, w);
    REQUIRE(x.size() == static_cast<std::size_t>(n));
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], deg);
      const double exact = deg % 2 == 1 ? 0.0 : 2.0 / (deg + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13));
    }
  }
}

TEST_CASE("adaptive cubature") {
  const Vec lo{0.0, 0.0}, hi{1.0, 2.0};
  auto r = wslab::adaptive_cubature(
      [](ConstSpan x) { return std::exp(x[0]) * std::cos(x[1]); }, lo, hi);
  CHECK(r.value == doctest::Approx((std::numbers::e - 1.0) * std::sin(2.0))
                       .epsilon(1e-10));

  // Kink at the diagonal forces refinement.
  auto k = wslab::adaptive_cubature(
      [](ConstSpan x) { return std::abs(x[0] - x[1]); }, lo, Vec{1.0, 1.0});
  CHECK(k.value == doctest::Approx(1.0 / 3.0).epsilon(1e-8));

  wslab::CubatureOptions tight;
  tight.rel_tol = 1e-14;
  tight.max_cells = 4;
  CHECK_THROWS_AS(wslab::adaptive_cubature(
                      [](ConstSpan x) { return std::abs(x[0] - x[1]); }, lo,
                      Vec{1.0, 1.0}, tight),
                  wslab::ConvergenceError);
}

TEST_CASE("discrete measures merge, drop and renormalize") {
  DiscreteMeasure mu({{0.0, 1.0}, {2.0, 0.0}, {0.0, 1.0}, {5.0, 5.0}},
                     {1.0, 2.0, 3.0, 0.0});
  REQUIRE(mu.size() == 2);
  CHECK(mu.point(0) == Vec{0.0, 1.0});
  CHECK(mu.point(1) == Vec{2.0, 0.0});
  CHECK(mu.weight(0) == doctest::Approx(4.0 / 6.0));
  CHECK(mu.weight(1) == doctest::Approx(2.0 / 6.0));

  const auto neg = DiscreteMeasure({{0.0}, {-0.0}}, {1.0, 1.0});
  CHECK(neg.size() == 1);

  CHECK_THROWS_AS(DiscreteMeasure({{0.0}}, {-1.0}), wslab::InvalidArgument);
  CHECK_THROWS_AS(DiscreteMeasure({{0.0}}, {0.0}), wslab::InvalidArgument);
  CHECK_THROWS(DiscreteMeasure({{0.0}, {1.0, 2.0}}, {1.0, 1.0}));
  CHECK_THROWS(DiscreteMeasure({{std::nan("")}}, {1.0}));
  CHECK_THROWS(DiscreteMeasure({{0.0}, {1.0}}, {1.0}));

  const auto u = DiscreteMeasure::uniform({{1.0}, {2.0}, {3.0}, {4.0}});
  for (double w : u.weights()) CHECK(w == 0.25);
  CHECK(DiscreteMeasure::dirac({3.0, 4.0}).support_radius(Norm::euclidean(2)) ==
        doctest::Approx(5.0));
}

TEST_CASE("moments") {
  const Cost c2{Norm::euclidean(2), 2.0};
  CHECK(wslab::moment_p(DiscreteMeasure::dirac({0.0, 0.0}), c2) == 0.0);
  CHECK(wslab::moment_p(DiscreteMeasure::uniform({{1.0, 0.0}, {0.0, 1.0}}), c2) ==
        doctest::Approx(1.0));
  const DiscreteMeasure line({{2.0}, {-1.0}}, {0.25, 0.75});
  CHECK(wslab::moment_p(line, Cost{Norm::euclidean(1), 3.0}) ==
        doctest::Approx(2.75).epsilon(1e-15));
}

TEST_CASE("mollifier normalization constants") {
  // Reference values computed independently to 30 digits.
  CHECK(Mollifier::normalization(1) ==
        doctest::Approx(0.443993816168079437823048921171).epsilon(1e-13));
  CHECK(Mollifier::normalization(2) ==
        doctest::Approx(0.466512393178330068879556171899).epsilon(1e-13));
  CHECK(Mollifier::normalization(3) ==
        doctest::Approx(0.441088887276604400456283817296).epsilon(1e-13));
  CHECK_THROWS(Mollifier(4, 0.1));
  CHECK_THROWS(Mollifier(2, 0.0));

  CHECK_THROWS(Mollifier(2, 1.0));
  const Mollifier m(2, 0.5);
  CHECK(m.kernel(Vec{1.0, 0.0}) == 0.0);
  CHECK(m.kernel(Vec{0.0, 0.0}) ==
        doctest::Approx(std::exp(-1.0) / Mollifier::normalization(2)));
}

TEST_CASE("euclidean kernel moments match frozen values") {
  const double ps[] = {2.0, 3.0, 2.5, 1.5};
  const double ref[3][4] = {
      {0.158113636263798230228050428161, 0.0873965766304104190768272064062,
       0.115880742663098885504009649546, 0.224022388155451816947352575053},
      {0.261311203420558646250796875298, 0.158412871081962097022979869775,
       0.201592258574047900662558752837, 0.346477373440116184287584088367},
      {0.335086961972601912867365005739, 0.216150206616833982908385698924,
       0.267383068300480127164898933799, 0.42642328884893686344667926671}};
  for (int d = 1; d <= 3; ++d) {
    for (int i = 0; i < 4; ++i) {
      const Cost cost{Norm::euclidean(d), ps[i]};
      // The eps kernel moment is eps^p times the unit-scale one.
      CHECK(wslab::kernel_moment(Mollifier(d, 0.5), cost) ==
            doctest::Approx(std::pow(0.5, ps[i]) * ref[d - 1][i]).epsilon(1e-7));
      CHECK(wslab::kernel_moment(Mollifier(d, 0.3), cost) ==
            doctest::Approx(std::pow(0.3, ps[i]) * ref[d - 1][i]).epsilon(1e-7));
    }
  }
}

TEST_CASE("kernel moment of a non-euclidean norm is bounded by its sup") {
  for (int d = 1; d <= 3; ++d) {
    const Cost cost{Norm::one_norm(d), 2.0};
    const double m = wslab::kernel_moment(Mollifier(d, 0.5), cost);
    CHECK(m > 0.0);
    CHECK(m <= std::pow(0.5 * std::sqrt(static_cast<double>(d)), 2.0));
  }
}

TEST_CASE("mollified expectation") {
  const DiscreteMeasure mu({{0.5, -1.0}, {2.0, 1.0}}, {0.3, 0.7});
  const Mollifier m(2, 0.25);
  CHECK(wslab::mollified_expectation(mu, m, [](ConstSpan) { return 1.0; }) ==
        doctest::Approx(1.0).epsilon(1e-10));
  // The kernel is centred, so affine functions see only the atom mean.
  CHECK(wslab::mollified_expectation(
            mu, m, [](ConstSpan x) { return 3.0 * x[0] - x[1] + 2.0; }) ==
        doctest::Approx(0.3 * (1.5 + 1.0 + 2.0) + 0.7 * (6.0 - 1.0 + 2.0))
            .epsilon(1e-10));

  const Vec x0{0.2, 0.1};
  auto f = [](const oracle::V& y) { return std::sin(3.0 * y[0]) * std::exp(y[1]); };
  const double got = wslab::mollified_expectation(
      DiscreteMeasure::dirac(x0), Mollifier(2, 0.4),
      [&](ConstSpan y) { return f(oracle::V(y.begin(), y.end())); });
  const auto mc = oracle::mc_bump_expectation(f, x0, 0.4, 400000, 99);
  CHECK(std::abs(got - mc.mean) <= 3.0 * mc.stderr);
}

TEST_CASE("mollified p-moment obeys the root-form bound") {
  CounterRng rng(2024);
  for (double p : {1.5, 2.0, 3.0}) {
    for (int trial = 0; trial < 3; ++trial) {
      const int d = 1 + trial;
      const auto mu = wslab::random_measure(d, 4, 1.5, rng);
      const Mollifier m(d, 0.5);
      const Cost cost{Norm::euclidean(d), p};
      const double smoothed = wslab::mollified_expectation(
          mu, m, [&](ConstSpan x) { return std::pow(euclid(x), p); });
      const double ce = wslab::kernel_moment(m, cost);
      const double base = wslab::moment_p(mu, cost);
      CHECK(std::pow(smoothed, 1.0 / p) <=
            std::pow(base, 1.0 / p) + std::pow(ce, 1.0 / p) + 1e-9);
      if (p == 2.0) {
        // Centred kernel: second moments add exactly.
        CHECK(smoothed == doctest::Approx(base + ce).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("mollified samples") {
  const DiscreteMeasure mu({{0.0, 0.0}, {3.0, 1.0}}, {0.25, 0.75});
  const Mollifier m(2, 0.1);
  const auto a = wslab::draw_mollified(mu, m, 5000, 11);
  const auto b = wslab::draw_mollified(mu, m, 5000, 11);
  const auto c = wslab::draw_mollified(mu, m, 5000, 12);
  CHECK(a == b);
  CHECK(a != c);
  std::size_t near_second = 0;
  for (const Vec& y : a) {
    const double d0 = std::hypot(y[0], y[1]);
    const double d1 = std::hypot(y[0] - 3.0, y[1] - 1.0);
    CHECK(std::min(d0, d1) < 0.1);
    if (d1 < 0.1) ++near_second;
  }
  const double frac = static_cast<double>(near_second) / a.size();
  CHECK(std::abs(frac - 0.75) < 4.0 * std::sqrt(0.75 * 0.25 / a.size()));

  const auto one = wslab::sample_mollified(mu, m, 1, 5);
  CHECK(one.size() == 1);
  CHECK(one.weight(0) == 1.0);

  // Second moment of the samples against the cubature value.
  const auto big = wslab::draw_mollified(mu, m, 200000, 3);
  double s = 0.0, s2 = 0.0;
  for (const Vec& y : big) {
    const double v = y[0] * y[0] + y[1] * y[1];
    s += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(big.size());
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  const double exact = wslab::mollified_expectation(
      mu, m, [](ConstSpan x) { return x[0] * x[0] + x[1] * x[1]; });
  CHECK(std::abs(mean - exact) <= 4.0 * se);
}

TEST_CASE("serialization round trips") {
  CounterRng rng(5);
  const auto mu = wslab::random_measure(3, 7, 2.0, rng);
  const auto back = wslab::measure_from_json(wslab::to_json(mu));
  CHECK(back.points() == mu.points());
  CHECK(same_weights(back, mu));
  const auto csv = wslab::measure_from_csv(wslab::to_csv(mu));
  CHECK(csv.points() == mu.points());
  CHECK(same_weights(csv, mu));

  const auto meta = wslab::random_meta_measure(2, 3, 4, 1.0, rng);
  const auto meta_back = wslab::meta_measure_from_json(wslab::to_json(meta));
  REQUIRE(meta_back.size() == meta.size());
  for (std::size_t i = 0; i < meta.size(); ++i) {
    CHECK(meta_back.atoms()[i].mass == meta.atoms()[i].mass);
    CHECK(meta_back.atoms()[i].measure.points() == meta.atoms()[i].measure.points());
  }
  CHECK(meta.total_mass() > 0.0);

  CHECK_THROWS_AS(wslab::measure_from_json(nlohmann::json::parse("{\"points\":1}")),
                  wslab::ParseError);
  CHECK_THROWS_AS(wslab::measure_from_csv("weight,x1\nabc,1\n"), wslab::ParseError);

  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    CHECK(std::stod(wslab::format_double(x)) == x);
  }
}
