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

#include "wslab/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "parallel.hpp"
#include "wslab/error.hpp"
#include "wslab/rng.hpp"

namespace wslab {
namespace {

bool same_measure(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  return a.points() == b.points() && a.weights() == b.weights();
}

double sample_std(const Vec& v) {
  if (v.size() < 2) return 0.0;
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

PotentialDictionary::PotentialDictionary(DiscreteMeasure nu, double radius,
                                         double eps, Cost cost,
                                         std::size_t sample_n,
                                         std::vector<DictionaryEntry> entries)
    : nu_(std::move(nu)),
      radius_(radius),
      eps_(eps),
      cost_(std::move(cost)),
      sample_n_(sample_n),
      entries_(std::move(entries)) {
  for (const DictionaryEntry& e : entries_) {
    require_dim(e.phi.size(), nu_.size(), "dictionary potential");
  }
}

double PotentialDictionary::u(std::size_t h, ConstSpan y) const {
  if (h >= entries_.size()) throw InvalidArgument("dictionary index out of range");
  const DictionaryEntry& e = entries_[h];
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nu_.size(); ++i) {
    best = std::min(best, cost_(nu_.point(i), y) - e.phi[i]);
  }
  return best + e.offset;
}

nlohmann::json PotentialDictionary::to_json() const {
  nlohmann::json entries = nlohmann::json::array();
  for (const DictionaryEntry& e : entries_) {
    entries.push_back({{"grid_measure", wslab::to_json(e.grid_measure)},
                       {"seed", e.seed},
                       {"phi", e.phi},
                       {"offset", e.offset},
                       {"stderr_u", e.stderr_u}});
  }
  return {{"nu", wslab::to_json(nu_)},
          {"radius", radius_},
          {"eps", eps_},
          {"cost", wslab::to_json(cost_)},
          {"sample_n", sample_n_},
          {"entries", entries}};
}

PotentialDictionary PotentialDictionary::from_json(const nlohmann::json& j) {
  try {
    std::vector<DictionaryEntry> entries;
    for (const auto& e : j.at("entries")) {
      entries.push_back({measure_from_json(e.at("grid_measure")),
                         e.at("seed").get<std::uint64_t>(), e.at("phi").get<Vec>(),
                         e.at("offset").get<double>(), e.at("stderr_u").get<double>()});
    }
    return PotentialDictionary(measure_from_json(j.at("nu")), j.at("radius").get<double>(),
                               j.at("eps").get<double>(), cost_from_json(j.at("cost")),
                               j.at("sample_n").get<std::size_t>(), std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed dictionary: ") + e.what());
  }
}

std::uint64_t dictionary_seed(std::uint64_t seed, std::size_t h) {
  return CounterRng::mix64(seed + 0x9E3779B97F4A7C15ULL * (h + 1));
}

PotentialDictionary build_dictionary(const DiscreteMeasure& nu, double radius,
                                     const std::vector<DiscreteMeasure>& grid,
                                     const Mollifier& moll, const Cost& cost,
                                     std::size_t sample_n, std::uint64_t seed,
                                     std::size_t jobs) {
  if (nu.support_radius(cost.norm) > radius * (1.0 + 1e-12)) {
    throw InvalidArgument("reference measure is not supported in the ball");
  }
  std::vector<DictionaryEntry> entries(grid.size(),
                                       DictionaryEntry{grid.empty() ? nu : grid[0], 0, {}, 0.0, 0.0});
  const Vec origin(cost.dim(), 0.0);
  detail::parallel_for(grid.size(), jobs, [&](std::size_t h) {
    const std::uint64_t s = dictionary_seed(seed, h);
    const std::vector<Vec> draws = draw_mollified(grid[h], moll, sample_n, s);
    const DiscreteMeasure sample = DiscreteMeasure::uniform(draws);
    const TransportSolution sol = solve_ot(nu, sample, cost);
    const KantorovichPotentials pot = dual_potentials(nu, sample, cost, sol);

    DictionaryEntry e{grid[h], s, pot.phi, 0.0, 0.0};
    double at_origin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nu.size(); ++i) {
      at_origin = std::min(at_origin, cost(nu.point(i), origin) - e.phi[i]);
    }
    for (double& v : e.phi) v += at_origin;
    for (std::size_t i = 0; i < nu.size(); ++i) e.offset += nu.weight(i) * e.phi[i];

    Vec values(draws.size());
    for (std::size_t k = 0; k < draws.size(); ++k) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < nu.size(); ++i) {
        best = std::min(best, cost(nu.point(i), draws[k]) - e.phi[i]);
      }
      values[k] = best + e.offset;
    }
    e.stderr_u = sample_std(values) / std::sqrt(static_cast<double>(draws.size()));
    entries[h] = std::move(e);
  });
  return PotentialDictionary(nu, radius, moll.eps(), cost, sample_n, std::move(entries));
}

std::vector<double> potential_integrals(const PotentialDictionary& dict,
                                        const DiscreteMeasure& mu,
                                        const Mollifier& moll, double rel_tol) {
  std::vector<double> out(dict.size());
  for (std::size_t h = 0; h < dict.size(); ++h) {
    out[h] = mollified_expectation(
        mu, moll, [&dict, h](ConstSpan y) { return dict.u(h, y); }, rel_tol);
  }
  return out;
}

std::vector<GkValue> gk_sequence(const std::vector<double>& integrals) {
  std::vector<GkValue> out;
  out.reserve(integrals.size());
  GkValue cur{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t h = 0; h < integrals.size(); ++h) {
    if (integrals[h] > cur.value) cur = {integrals[h], h};
    out.push_back(cur);
  }
  return out;
}

GkValue G_k(const PotentialDictionary& dict, const DiscreteMeasure& mu,
            std::size_t k, const Mollifier& moll, double rel_tol) {
  if (k < 1 || k > dict.size()) throw InvalidArgument("k outside 1..dictionary size");
  std::vector<double> integrals(k);
  for (std::size_t h = 0; h < k; ++h) {
    integrals[h] = mollified_expectation(
        mu, moll, [&dict, h](ConstSpan y) { return dict.u(h, y); }, rel_tol);
  }
  return gk_sequence(integrals).back();
}

FEstimate F_nu_eps(const DiscreteMeasure& nu, const DiscreteMeasure& mu,
                   const Mollifier& moll, const Cost& cost, std::size_t sample_n,
                   std::uint64_t seed, std::size_t resamples) {
  const std::vector<Vec> draws = draw_mollified(mu, moll, sample_n, seed);
  FEstimate est;
  est.sample_n = sample_n;
  est.resamples = resamples;
  est.value = solve_ot(DiscreteMeasure::uniform(draws), nu, cost).primal_cost;
  CounterRng rng(seed, CounterRng::stream_id("bootstrap"));
  Vec boot;
  boot.reserve(resamples);
  for (std::size_t b = 0; b < resamples; ++b) {
    std::vector<Vec> points;
    points.reserve(draws.size());
    for (std::size_t k = 0; k < draws.size(); ++k) points.push_back(draws[rng.below(draws.size())]);
    boot.push_back(solve_ot(DiscreteMeasure::uniform(std::move(points)), nu, cost).primal_cost);
  }
  est.stderr = sample_std(boot);
  return est;
}

double gk_lipschitz_bound(double w, double radius, double p, double root_moment_a,
                          double root_moment_b, double kernel_moment) {
  const double c = std::pow(kernel_moment, 1.0 / p);
  return std::pow(2.0, p - 1.0) * w *
         (2.0 * std::pow(radius, p - 1.0) + std::pow(root_moment_a + c, p - 1.0) +
          std::pow(root_moment_b + c, p - 1.0));
}

ConvergenceReport convergence_report(const PotentialDictionary& dict,
                                     const std::vector<DiscreteMeasure>& battery,
                                     const Mollifier& moll, std::uint64_t f_seed,
                                     std::size_t resamples, double rel_tol,
                                     std::size_t jobs) {
  const Cost& cost = dict.cost();
  ConvergenceReport rep;
  rep.kernel_moment = kernel_moment(moll, cost);
  rep.measures.resize(battery.size());
  detail::parallel_for(battery.size(), jobs, [&](std::size_t b) {
    const DiscreteMeasure& mu = battery[b];
    MeasureConvergence mc;
    mc.integrals = potential_integrals(dict, mu, moll, rel_tol);
    mc.g = gk_sequence(mc.integrals);
    mc.f = F_nu_eps(dict.nu(), mu, moll, cost, dict.sample_n(), dictionary_seed(f_seed, b),
                    resamples);
    mc.worst_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < mc.g.size(); ++k) {
      const double se_u = dict.entries()[mc.g[k].argmax].stderr_u;
      const double se = std::sqrt(mc.f.stderr * mc.f.stderr + se_u * se_u);
      mc.combined_stderr.push_back(se);
      if (k > 0 && mc.g[k].value < mc.g[k - 1].value) mc.monotone = false;
      mc.worst_excess = std::max(mc.worst_excess, mc.g[k].value - mc.f.value - 3.0 * se);
    }
    for (std::size_t h = 0; h < dict.size(); ++h) {
      if (same_measure(dict.entries()[h].grid_measure, mu)) {
        mc.grid_index = h;
        break;
      }
    }
    mc.final_gap = mc.g.empty() ? 0.0 : mc.f.value - mc.g.back().value;
    rep.measures[b] = std::move(mc);
  });
  for (std::size_t a = 0; a < battery.size(); ++a) {
    for (std::size_t b = a + 1; b < battery.size(); ++b) {
      LipschitzCheck lc{a, b};
      lc.w = wasserstein(battery[a], battery[b], cost);
      for (std::size_t k = 0; k < dict.size(); ++k) {
        lc.lhs = std::max(lc.lhs, std::abs(rep.measures[a].g[k].value -
                                           rep.measures[b].g[k].value));
      }
      const double ra = std::pow(moment_p(battery[a], cost), 1.0 / cost.p);
      const double rb = std::pow(moment_p(battery[b], cost), 1.0 / cost.p);
      lc.rhs = gk_lipschitz_bound(lc.w, dict.radius(), cost.p, ra, rb, rep.kernel_moment);
      rep.lipschitz.push_back(lc);
    }
  }
  return rep;
}

DiscreteMeasure project_measure(const DiscreteMeasure& mu, int h) {
  if (h < 1 || h > mu.dim()) throw InvalidArgument("projection index outside 1..d");
  std::vector<Vec> points;
  points.reserve(mu.size());
  for (const Vec& x : mu.points()) points.emplace_back(x.begin(), x.begin() + h);
  return DiscreteMeasure(std::move(points), mu.weights());
}

}  // namespace wslab
