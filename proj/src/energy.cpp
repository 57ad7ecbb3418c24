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

#include "wslab/energy.hpp"

#include <cmath>

namespace wslab {
namespace {

void check_q(double q) {
  if (!(q > 1.0) || !std::isfinite(q)) throw InvalidArgument("q must lie in (1, inf)");
}

}  // namespace

double pre_cheeger(const CylinderFunction& f, const MetaMeasure& m,
                   const Cost& cost, double q) {
  check_q(q);
  double s = 0.0;
  for (const MetaAtom& a : m.atoms()) {
    s += a.mass * std::pow(differential_norm(f, a.measure, cost), q);
  }
  return s;
}

EnergyReport sobolev_functional(const CylinderFunction& f, const MetaMeasure& m,
                                const Cost& cost, double q) {
  check_q(q);
  EnergyReport rep;
  rep.q = q;
  for (const MetaAtom& a : m.atoms()) {
    const double pce = a.mass * std::pow(differential_norm(f, a.measure, cost), q);
    const double lq = a.mass * std::pow(std::abs(eval_cylinder(f, a.measure)), q);
    rep.atom_pce.push_back(pce);
    rep.atom_lq.push_back(lq);
    rep.pce_q += pce;
    rep.lq_norm_q += lq;
  }
  rep.sobolev_norm = std::pow(rep.lq_norm_q + rep.pce_q, 1.0 / q);
  return rep;
}

BoasParams::BoasParams(double r_exp, double s_exp) : r(r_exp), s(s_exp) {
  if (!(r > 1.0) || !(s > 1.0) || !std::isfinite(r) || !std::isfinite(s)) {
    throw InvalidArgument("Boas exponents must lie in (1, inf)");
  }
}

bool BoasParams::admits(double q) const {
  return r_conj() <= s && s <= q && q <= r;
}

double boas_residual_values(double ju, double jv, double jsum, double jdiff,
                            const BoasParams& params) {
  const double left = std::pow(2.0, 1.0 / params.s_conj()) *
                      std::pow(std::pow(ju, params.s) + std::pow(jv, params.s),
                               1.0 / params.s);
  const double right =
      std::pow(std::pow(jsum, params.r) + std::pow(jdiff, params.r), 1.0 / params.r);
  return left - right;
}

}  // namespace wslab
