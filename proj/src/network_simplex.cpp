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

#include "network_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "wslab/error.hpp"

namespace wslab::detail {
namespace {

constexpr int kNone = -1;

class Solver {
 public:
  Solver(const Vec& supply, const Vec& demand, const Vec& cost)
      : m_(supply.size()),
        n_(demand.size()),
        real_(m_ * n_),
        root_(static_cast<int>(m_ + n_)),
        cost_(cost) {
    double max_cost = 0.0;
    for (double c : cost_) max_cost = std::max(max_cost, std::abs(c));
    art_ = (max_cost + 1.0) * static_cast<double>(m_ + n_ + 1);
    price_tol_ = 1e-12 * std::max(1.0, max_cost);

    const std::size_t nodes = m_ + n_ + 1;
    flow_.assign(real_ + m_ + n_, 0.0);
    in_tree_.assign(real_ + m_ + n_, 0);
    parent_.assign(nodes, kNone);
    pred_.assign(nodes, kNone);
    up_.assign(nodes, false);
    depth_.assign(nodes, 0);
    first_child_.assign(nodes, kNone);
    next_.assign(nodes, kNone);
    prev_.assign(nodes, kNone);
    pot_.assign(nodes, 0.0);

    for (std::size_t i = 0; i < m_; ++i) {
      const int u = static_cast<int>(i);
      const std::size_t a = real_ + i;
      flow_[a] = supply[i];
      pot_[u] = -art_;
      hang(u, root_, static_cast<long>(a));
      in_tree_[a] = 1;
    }
    for (std::size_t j = 0; j < n_; ++j) {
      const int u = static_cast<int>(m_ + j);
      const std::size_t a = real_ + m_ + j;
      flow_[a] = demand[j];
      pot_[u] = art_;
      hang(u, root_, static_cast<long>(a));
      in_tree_[a] = 1;
    }
    block_ = std::max<std::size_t>(
        10, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(real_)))));
  }

  std::size_t run(std::size_t max_iterations) {
    std::size_t iterations = 0;
    const std::size_t refresh = m_ + n_;
    while (true) {
      long in = entering();
      if (in < 0) {
        // Incremental updates drift; confirm optimality with exact prices.
        recompute_potentials();
        in = entering();
        if (in < 0) return iterations;
      }
      if (++iterations > max_iterations) {
        throw ConvergenceError("network simplex hit its iteration cap (" +
                               std::to_string(max_iterations) + ")");
      }
      pivot(static_cast<std::size_t>(in));
      if (iterations % refresh == 0) recompute_potentials();
    }
  }

  SimplexResult result() const {
    SimplexResult r;
    r.flow.assign(flow_.begin(), flow_.begin() + static_cast<long>(real_));
    r.phi.resize(m_);
    r.psi.resize(n_);
    for (std::size_t i = 0; i < m_; ++i) r.phi[i] = -pot_[i];
    for (std::size_t j = 0; j < n_; ++j) r.psi[j] = pot_[m_ + j];
    for (std::size_t a = real_; a < flow_.size(); ++a) r.artificial_flow += flow_[a];
    return r;
  }

 private:
  int source(std::size_t a) const {
    if (a < real_) return static_cast<int>(a / n_);
    if (a < real_ + m_) return static_cast<int>(a - real_);
    return root_;
  }

  int target(std::size_t a) const {
    if (a < real_) return static_cast<int>(m_ + a % n_);
    if (a < real_ + m_) return root_;
    return static_cast<int>(a - real_);  // m_ + j
  }

  double arc_cost(std::size_t a) const { return a < real_ ? cost_[a] : art_; }

  double reduced(std::size_t a) const {
    return arc_cost(a) + pot_[source(a)] - pot_[target(a)];
  }

  void hang(int u, int parent, long arc) {
    parent_[u] = parent;
    pred_[u] = arc;
    up_[u] = source(static_cast<std::size_t>(arc)) == u;
    prev_[u] = kNone;
    next_[u] = first_child_[parent];
    if (next_[u] != kNone) prev_[next_[u]] = u;
    first_child_[parent] = u;
    depth_[u] = depth_[parent] + 1;
  }

  void detach(int u) {
    const int p = parent_[u];
    if (prev_[u] != kNone) {
      next_[prev_[u]] = next_[u];
    } else {
      first_child_[p] = next_[u];
    }
    if (next_[u] != kNone) prev_[next_[u]] = prev_[u];
    prev_[u] = next_[u] = kNone;
  }

  // Potentials from the tree alone, with the root at 0.
  void recompute_potentials() {
    pot_[root_] = 0.0;
    stack_.clear();
    for (int c = first_child_[root_]; c != kNone; c = next_[c]) stack_.push_back(c);
    while (!stack_.empty()) {
      const int u = stack_.back();
      stack_.pop_back();
      const double c = arc_cost(static_cast<std::size_t>(pred_[u]));
      pot_[u] = up_[u] ? pot_[parent_[u]] - c : pot_[parent_[u]] + c;
      for (int w = first_child_[u]; w != kNone; w = next_[w]) stack_.push_back(w);
    }
  }

  // Block search over nontree real arcs; most negative reduced cost in the first
  // block that has one.
  long entering() {
    long best = -1;
    double best_rc = -price_tol_;
    std::size_t scanned = 0;
    std::size_t in_block = 0;
    while (scanned < real_) {
      const std::size_t a = next_arc_;
      next_arc_ = next_arc_ + 1 == real_ ? 0 : next_arc_ + 1;
      const double rc = in_tree_[a] ? 0.0 : reduced(a);
      if (rc < best_rc) {
        best_rc = rc;
        best = static_cast<long>(a);
      }
      ++scanned;
      if (++in_block == block_) {
        if (best >= 0) return best;
        in_block = 0;
      }
    }
    return best;
  }

  int join(int a, int b) const {
    while (depth_[a] > depth_[b]) a = parent_[a];
    while (depth_[b] > depth_[a]) b = parent_[b];
    while (a != b) {
      a = parent_[a];
      b = parent_[b];
    }
    return a;
  }

  void pivot(std::size_t in) {
    const int first = source(in);
    const int second = target(in);
    const int top = join(first, second);
    const double rc = reduced(in);

    // Strongly feasible leaving-arc rule: last blocking arc in the
    // orientation of the cycle.
    double delta = std::numeric_limits<double>::infinity();
    int out = kNone;
    int side = 0;
    for (int w = first; w != top; w = parent_[w]) {
      if (up_[w] && flow_[pred_[w]] < delta) {
        delta = flow_[pred_[w]];
        out = w;
        side = 1;
      }
    }
    for (int w = second; w != top; w = parent_[w]) {
      if (!up_[w] && flow_[pred_[w]] <= delta) {
        delta = flow_[pred_[w]];
        out = w;
        side = 2;
      }
    }
    if (side == 0) throw ConvergenceError("transport LP is unbounded");

    if (delta > 0.0) {
      flow_[in] += delta;
      for (int w = first; w != top; w = parent_[w]) {
        flow_[pred_[w]] += up_[w] ? -delta : delta;
      }
      for (int w = second; w != top; w = parent_[w]) {
        flow_[pred_[w]] += up_[w] ? delta : -delta;
      }
    }
    flow_[pred_[out]] = 0.0;
    in_tree_[static_cast<std::size_t>(pred_[out])] = 0;
    in_tree_[in] = 1;

    const int u_in = side == 1 ? first : second;
    const int v_in = side == 1 ? second : first;

    // Reverse the path u_in .. out and re-hang it below v_in.
    path_.clear();
    for (int w = u_in;; w = parent_[w]) {
      path_.push_back(w);
      if (w == out) break;
    }
    old_pred_.resize(path_.size());
    for (std::size_t t = 0; t < path_.size(); ++t) {
      old_pred_[t] = pred_[path_[t]];
      detach(path_[t]);
    }
    hang(path_[0], v_in, static_cast<long>(in));
    for (std::size_t t = 1; t < path_.size(); ++t) {
      hang(path_[t], path_[t - 1], old_pred_[t - 1]);
    }

    const double shift = u_in == first ? -rc : rc;
    stack_.clear();
    stack_.push_back(u_in);
    while (!stack_.empty()) {
      const int u = stack_.back();
      stack_.pop_back();
      pot_[u] += shift;
      depth_[u] = depth_[parent_[u]] + 1;
      for (int c = first_child_[u]; c != kNone; c = next_[c]) stack_.push_back(c);
    }
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t real_;
  int root_;
  const Vec& cost_;
  double art_ = 0.0;
  double price_tol_ = 0.0;
  std::size_t block_ = 10;
  std::size_t next_arc_ = 0;

  Vec flow_;
  std::vector<char> in_tree_;
  std::vector<int> parent_;
  std::vector<long> pred_;
  std::vector<bool> up_;
  std::vector<int> depth_;
  std::vector<int> first_child_;
  std::vector<int> next_;
  std::vector<int> prev_;
  Vec pot_;

  std::vector<int> path_;
  std::vector<long> old_pred_;
  std::vector<int> stack_;
};

}  // namespace

SimplexResult solve_transport_lp(const Vec& supply, const Vec& demand,
                                 const Vec& cost, std::size_t max_iterations) {
  if (supply.empty() || demand.empty()) {
    throw InvalidArgument("transport problem needs nonempty marginals");
  }
  require_dim(cost.size(), supply.size() * demand.size(), "transport cost matrix");
  Solver solver(supply, demand, cost);
  const std::size_t iterations = solver.run(max_iterations);
  SimplexResult r = solver.result();
  r.iterations = iterations;
  return r;
}

}  // namespace wslab::detail
