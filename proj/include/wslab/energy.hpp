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

#ifndef WSLAB_ENERGY_HPP_
#define WSLAB_ENERGY_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "wslab/cylinder.hpp"
#include "wslab/error.hpp"
#include "wslab/measures.hpp"
#include "wslab/norms.hpp"
#include "wslab/rng.hpp"
#include "wslab/vec.hpp"

namespace wslab {

// sum over atoms of mass * |DF[mu]|_{*,p',mu}^q.
double pre_cheeger(const CylinderFunction& f, const MetaMeasure& m,
                   const Cost& cost, double q);

struct EnergyReport {
  double q = 2.0;
  double pce_q = 0.0;
  double lq_norm_q = 0.0;
  // (lq_norm_q + pce_q)^(1/q); an upper surrogate for the Sobolev norm.
  double sobolev_norm = 0.0;
  std::vector<double> atom_pce;
  std::vector<double> atom_lq;
};

EnergyReport sobolev_functional(const CylinderFunction& f, const MetaMeasure& m,
                                const Cost& cost, double q);

struct BoasParams {
  double r = 2.0;
  double s = 2.0;

  BoasParams(double r_exp, double s_exp);
  double s_conj() const { return s / (s - 1.0); }
  double r_conj() const { return r / (r - 1.0); }
  // r' <= s <= q <= r
  bool admits(double q) const;
};

// Linear structure used by the generic checkers.
inline Vec lin_add(const Vec& a, const Vec& b) { return add(a, b); }
inline Vec lin_sub(const Vec& a, const Vec& b) { return sub(a, b); }
inline Vec lin_scale(double t, const Vec& a) { return scaled(t, a); }
inline CylinderFunction lin_add(const CylinderFunction& a, const CylinderFunction& b) {
  return combine(1.0, a, 1.0, b);
}
inline CylinderFunction lin_sub(const CylinderFunction& a, const CylinderFunction& b) {
  return combine(1.0, a, -1.0, b);
}
inline CylinderFunction lin_scale(double t, const CylinderFunction& a) {
  return scale(t, a);
}

template <class T>
using Functional = std::function<double(const T&)>;
template <class T>
using PairSampler = std::function<std::pair<T, T>(CounterRng&)>;

// 2^{1/s'} (J(u)^s + J(v)^s)^{1/s} - (J(u+v)^r + J(u-v)^r)^{1/r}; the
// (r, s) inequality holds at (u, v) iff this is >= 0.
double boas_residual_values(double ju, double jv, double jsum, double jdiff,
                            const BoasParams& params);

template <class T>
double boas_residual(const Functional<T>& j, const T& u, const T& v,
                     const BoasParams& params) {
  return boas_residual_values(j(u), j(v), j(lin_add(u, v)), j(lin_sub(u, v)),
                              params);
}

struct QSumReport {
  std::size_t trials = 0;
  double min_residual_first = std::numeric_limits<double>::infinity();
  double min_residual_second = std::numeric_limits<double>::infinity();
  double min_residual_sum = std::numeric_limits<double>::infinity();
  // Trials where the q-sum fails although both parts pass (tolerance 1e-9).
  std::size_t counterexamples = 0;
  std::vector<double> residuals;
};

// Checks that J = (J1^q + J2^q)^{1/q} inherits the (r, s) inequality from J1
// and J2 on sampled pairs. Requires s <= q <= r.
template <class T>
QSumReport boas_qsum_preservation(const Functional<T>& j1, const Functional<T>& j2,
                                  double q, const BoasParams& params,
                                  std::size_t trials, std::uint64_t seed,
                                  const PairSampler<T>& sampler) {
  if (!(params.s <= q && q <= params.r)) {
    throw InvalidArgument("q-sum preservation needs s <= q <= r");
  }
  constexpr double kTol = -1e-9;
  CounterRng rng(seed, CounterRng::stream_id("boas_qsum"));
  QSumReport rep;
  auto qsum = [q](double a, double b) {
    return std::pow(std::pow(a, q) + std::pow(b, q), 1.0 / q);
  };
  for (std::size_t t = 0; t < trials; ++t) {
    const auto [u, v] = sampler(rng);
    const T sum = lin_add(u, v);
    const T diff = lin_sub(u, v);
    const double a[4] = {j1(u), j1(v), j1(sum), j1(diff)};
    const double b[4] = {j2(u), j2(v), j2(sum), j2(diff)};
    const double r1 = boas_residual_values(a[0], a[1], a[2], a[3], params);
    const double r2 = boas_residual_values(b[0], b[1], b[2], b[3], params);
    const double r = boas_residual_values(qsum(a[0], b[0]), qsum(a[1], b[1]),
                                          qsum(a[2], b[2]), qsum(a[3], b[3]), params);
    rep.min_residual_first = std::min(rep.min_residual_first, r1);
    rep.min_residual_second = std::min(rep.min_residual_second, r2);
    rep.min_residual_sum = std::min(rep.min_residual_sum, r);
    rep.residuals.push_back(r);
    if (r1 >= kTol && r2 >= kTol && r < kTol) ++rep.counterexamples;
    ++rep.trials;
  }
  return rep;
}

struct ModulusRow {
  double delta = 0.0;  // J(u - v)
  double gap = 0.0;    // 1 - J((u + v) / 2)^t with J(u) = J(v) = 1
};

struct ModulusReport {
  std::vector<ModulusRow> rows;
  std::vector<double> eps_grid;
  // min gap over pairs with delta >= eps; +inf where no pair qualifies.
  std::vector<double> envelope;
  // max |J(2u) - 2 J(u)| / (2 J(u)) on the sampled u.
  double homogeneity_defect = 0.0;
};

// Samples pairs, normalizes them to J = 1 and records the midpoint gap
// against the pair distance. Pairs with J(u) == 0 or J(v) == 0 are skipped.
template <class T>
ModulusReport convexity_modulus_probe(const Functional<T>& j, double t,
                                      std::size_t trials, std::uint64_t seed,
                                      const PairSampler<T>& sampler,
                                      const std::vector<double>& eps_grid) {
  if (!(t > 1.0)) throw InvalidArgument("modulus exponent t must exceed 1");
  CounterRng rng(seed, CounterRng::stream_id("convexity_modulus"));
  ModulusReport rep;
  rep.eps_grid = eps_grid;
  for (std::size_t k = 0; k < trials; ++k) {
    const auto [u0, v0] = sampler(rng);
    const double ju = j(u0);
    const double jv = j(v0);
    if (!(ju > 0.0) || !(jv > 0.0)) continue;
    const double j2u = j(lin_scale(2.0, u0));
    rep.homogeneity_defect =
        std::max(rep.homogeneity_defect, std::abs(j2u - 2.0 * ju) / (2.0 * ju));
    const T u = lin_scale(1.0 / ju, u0);
    const T v = lin_scale(1.0 / jv, v0);
    const double delta = j(lin_sub(u, v));
    const double mid = j(lin_scale(0.5, lin_add(u, v)));
    rep.rows.push_back({delta, 1.0 - std::pow(mid, t)});
  }
  rep.envelope.assign(eps_grid.size(), std::numeric_limits<double>::infinity());
  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    for (const ModulusRow& row : rep.rows) {
      if (row.delta >= eps_grid[e]) rep.envelope[e] = std::min(rep.envelope[e], row.gap);
    }
  }
  return rep;
}

}  // namespace wslab

#endif  // WSLAB_ENERGY_HPP_
