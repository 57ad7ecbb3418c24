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
#include <vector>

#include "oracles/oracles.hpp"
#include "wslab/energy.hpp"
#include "wslab/random_instances.hpp"

using wslab::BoasParams;
using wslab::Cost;
using wslab::CounterRng;
using wslab::CylinderFunction;
using wslab::DiscreteMeasure;
using wslab::MetaMeasure;
using wslab::Norm;
using wslab::Vec;

namespace {

wslab::Functional<Vec> lp_functional(double a) {
  return [a](const Vec& x) { return oracle::lp(x, a); };
}

wslab::PairSampler<Vec> cube_pairs(int d) {
  return [d](CounterRng& rng) {
    return std::pair{wslab::random_vector(d, 1.0, rng), wslab::random_vector(d, 1.0, rng)};
  };
}

}  // namespace

TEST_CASE("pre-Cheeger energy of a linear function") {
  const CylinderFunction f(
      {wslab::SmoothScalarField::clamped_linear({1.0, 1.0}, 10.0)},
      wslab::OuterMap::identity_clamp(10.0));
  const DiscreteMeasure mu({{1.0, 0.0}, {0.0, 2.0}}, {0.5, 0.5});
  const MetaMeasure m({{2.0, mu}, {0.5, DiscreteMeasure::dirac({0.0, 0.0})}});
  const Cost cost{Norm::euclidean(2), 2.0};
  CHECK(wslab::pre_cheeger(f, m, cost, 2.0) == doctest::Approx(2.5 * 2.0));
  CHECK(wslab::pre_cheeger(f, m, cost, 3.0) ==
        doctest::Approx(2.5 * std::pow(2.0, 1.5)));

  const auto rep = wslab::sobolev_functional(f, m, cost, 2.0);
  CHECK(rep.pce_q == doctest::Approx(5.0));
  CHECK(rep.lq_norm_q == doctest::Approx(2.0 * 1.5 * 1.5));
  CHECK(rep.sobolev_norm == doctest::Approx(std::sqrt(5.0 + 4.5)));
  REQUIRE(rep.atom_pce.size() == 2);
}

TEST_CASE("sobolev functional is a seminorm") {
  CounterRng rng(12);
  const Cost cost{Norm::p_norm(2, 3.0), 2.5};
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = wslab::random_cylinder(2, 2, 1.0, rng);
    const auto g = wslab::random_cylinder(2, 2, 1.0, rng);
    const auto m = wslab::random_meta_measure(2, 5, 4, 1.0, rng);
    for (double q : {1.5, 2.0, 3.0}) {
      const auto rep = wslab::sobolev_functional(f, m, cost, q);
      double lq = 0.0, pce = 0.0;
      for (std::size_t i = 0; i < rep.atom_lq.size(); ++i) {
        lq += rep.atom_lq[i];
        pce += rep.atom_pce[i];
      }
      CHECK(rep.lq_norm_q == doctest::Approx(lq).epsilon(1e-12));
      CHECK(rep.pce_q == doctest::Approx(pce).epsilon(1e-12));
      CHECK(rep.pce_q == doctest::Approx(wslab::pre_cheeger(f, m, cost, q)).epsilon(1e-12));
      CHECK(std::pow(rep.sobolev_norm, q) ==
            doctest::Approx(rep.lq_norm_q + rep.pce_q).epsilon(1e-12));

      auto j = [&](const CylinderFunction& h) {
        return wslab::sobolev_functional(h, m, cost, q).sobolev_norm;
      };
      CHECK(j(wslab::scale(-2.0, f)) == doctest::Approx(2.0 * j(f)).epsilon(1e-12));
      CHECK(j(wslab::combine(1.0, f, 1.0, g)) <= j(f) + j(g) + 1e-12);
    }
  }
}

TEST_CASE("boas parameters") {
  const BoasParams p(3.0, 1.5);
  CHECK(p.r_conj() == doctest::Approx(1.5));
  CHECK(p.s_conj() == doctest::Approx(3.0));
  CHECK(p.admits(2.0));
  CHECK(p.admits(1.5));
  CHECK_FALSE(p.admits(3.5));
  CHECK_FALSE(BoasParams(3.0, 1.2).admits(2.0));
}

TEST_CASE("boas residual examples") {
  const BoasParams two(2.0, 2.0);
  // Hilbert norms satisfy the parallelogram law with equality.
  CHECK(wslab::boas_residual_values(1.0, 1.0, 2.0, 0.0, two) ==
        doctest::Approx(0.0).scale(1.0));
  CHECK(wslab::boas_residual_values(3.0, 1.0, 4.0, 2.0, two) ==
        doctest::Approx(0.0).scale(1.0));
  const auto l1 = lp_functional(1.0);
  CHECK(wslab::boas_residual<Vec>(l1, Vec{1.0, 0.0}, Vec{0.0, 1.0}, two) ==
        doctest::Approx(2.0 - std::sqrt(8.0)));
  const auto linf = lp_functional(std::numeric_limits<double>::infinity());
  CHECK(wslab::boas_residual<Vec>(linf, Vec{1.0, 0.0}, Vec{0.0, 1.0}, two) ==
        doctest::Approx(2.0 - std::sqrt(2.0)));
}

TEST_CASE("lq norms satisfy admissible boas inequalities") {
  CounterRng rng(400);
  const std::vector<std::pair<BoasParams, double>> cases{
      {BoasParams(2.0, 2.0), 2.0}, {BoasParams(3.0, 1.5), 2.0},
      {BoasParams(3.0, 1.5), 3.0}, {BoasParams(4.0, 4.0 / 3.0), 1.5}};
  for (const auto& [params, q] : cases) {
    REQUIRE(params.admits(q));
    const auto j = lp_functional(q);
    for (int t = 0; t < 500; ++t) {
      const Vec u = wslab::random_vector(4, 1.0, rng);
      const Vec v = wslab::random_vector(4, 1.0, rng);
      CHECK(wslab::boas_residual<Vec>(j, u, v, params) >= -1e-12);
    }
  }
}

TEST_CASE("q-sums preserve the inequality") {
  const BoasParams params(3.0, 1.5);
  const Vec w{0.5, 2.0, 1.0};
  const wslab::Functional<Vec> j1 = lp_functional(2.0);
  const wslab::Functional<Vec> j2 = [&](const Vec& x) { return oracle::weighted_lp(x, w, 2.0); };
  const auto rep = wslab::boas_qsum_preservation<Vec>(j1, j2, 2.0, params, 1000, 7,
                                                      cube_pairs(3));
  CHECK(rep.trials == 1000);
  CHECK(rep.residuals.size() == 1000);
  CHECK(rep.counterexamples == 0);
  CHECK(rep.min_residual_first >= -1e-12);
  CHECK(rep.min_residual_second >= -1e-12);
  CHECK(rep.min_residual_sum >= -1e-12);
  CHECK_THROWS_AS(wslab::boas_qsum_preservation<Vec>(j1, j2, 4.0, params, 1, 7,
                                                     cube_pairs(3)),
                  wslab::InvalidArgument);

  const auto again = wslab::boas_qsum_preservation<Vec>(j1, j2, 2.0, params, 1000, 7,
                                                        cube_pairs(3));
  CHECK(again.residuals == rep.residuals);
}

TEST_CASE("convexity modulus of the euclidean norm") {
  const std::vector<double> grid{0.05, 0.2, 0.8, 1.6};
  const auto rep = wslab::convexity_modulus_probe<Vec>(lp_functional(2.0), 2.0, 2000,
                                                       3, cube_pairs(2), grid);
  CHECK(rep.rows.size() == 2000);
  CHECK(rep.homogeneity_defect <= 1e-15);
  for (const auto& row : rep.rows) {
    CHECK(row.gap == doctest::Approx(row.delta * row.delta / 4.0).scale(1.0).epsilon(1e-12));
  }
  for (std::size_t e = 0; e < grid.size(); ++e) {
    CHECK(rep.envelope[e] >= grid[e] * grid[e] / 4.0 - 1e-12);
    CHECK(std::isfinite(rep.envelope[e]));
  }
}

TEST_CASE("convexity modulus of the max norm vanishes") {
  const std::vector<double> grid{0.05, 0.2, 0.8};
  const auto rep = wslab::convexity_modulus_probe<Vec>(
      lp_functional(std::numeric_limits<double>::infinity()), 2.0, 3000, 3,
      cube_pairs(2), grid);
  for (double env : rep.envelope) CHECK(env == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(wslab::convexity_modulus_probe<Vec>(lp_functional(2.0), 1.0, 1, 3,
                                                      cube_pairs(2), grid),
                  wslab::InvalidArgument);
}
