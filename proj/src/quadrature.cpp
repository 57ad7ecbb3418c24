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

#include "wslab/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "wslab/error.hpp"

namespace wslab {

void gauss_legendre(int n, Vec& nodes, Vec& weights) {
  if (n < 1) throw InvalidArgument("Gauss-Legendre order must be positive");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

namespace {

struct Rule {
  Vec nodes;
  Vec weights;
};

struct Estimate {
  double value = 0.0;
  double abs_value = 0.0;
};

class Integrator {
 public:
  Integrator(const ScalarField& f, int dim, int order) : f_(f), dim_(dim) {
    gauss_legendre(order, rule_.nodes, rule_.weights);
    point_.resize(dim);
    idx_.resize(dim);
  }

  Estimate cell(ConstSpan lo, ConstSpan hi) {
    const int n = static_cast<int>(rule_.nodes.size());
    double vol = 1.0;
    for (int k = 0; k < dim_; ++k) vol *= 0.5 * (hi[k] - lo[k]);
    std::fill(idx_.begin(), idx_.end(), 0);
    Estimate e;
    while (true) {
      double w = vol;
      for (int k = 0; k < dim_; ++k) {
        const double mid = 0.5 * (lo[k] + hi[k]);
        const double half = 0.5 * (hi[k] - lo[k]);
        point_[k] = mid + half * rule_.nodes[idx_[k]];
        w *= rule_.weights[idx_[k]];
      }
      const double v = f_(point_);
      e.value += w * v;
      e.abs_value += w * std::abs(v);
      int k = 0;
      while (k < dim_ && ++idx_[k] == n) idx_[k++] = 0;
      if (k == dim_) break;
    }
    return e;
  }

  int dim() const { return dim_; }

 private:
  const ScalarField& f_;
  int dim_;
  Rule rule_;
  Vec point_;
  std::vector<int> idx_;
};

struct Leaf {
  Vec lo;
  Vec hi;
  Estimate coarse;
  std::vector<Estimate> halves;
  Estimate fine;
  double error = 0.0;
};

Vec child_lo(const Leaf& leaf, int mask) {
  Vec lo = leaf.lo;
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (mask >> k & 1) lo[k] = 0.5 * (leaf.lo[k] + leaf.hi[k]);
  }
  return lo;
}

Vec child_hi(const Leaf& leaf, int mask) {
  Vec hi = leaf.hi;
  for (std::size_t k = 0; k < hi.size(); ++k) {
    if (!(mask >> k & 1)) hi[k] = 0.5 * (leaf.lo[k] + leaf.hi[k]);
  }
  return hi;
}

void refine(Integrator& in, Leaf& leaf) {
  const int children = 1 << in.dim();
  leaf.halves.resize(children);
  leaf.fine = {};
  for (int m = 0; m < children; ++m) {
    leaf.halves[m] = in.cell(child_lo(leaf, m), child_hi(leaf, m));
    leaf.fine.value += leaf.halves[m].value;
    leaf.fine.abs_value += leaf.halves[m].abs_value;
  }
  leaf.error = std::abs(leaf.fine.value - leaf.coarse.value);
}

}  // namespace

CubatureResult adaptive_cubature(const ScalarField& f, ConstSpan lo,
                                 ConstSpan hi, const CubatureOptions& opts) {
  require_dim(hi.size(), lo.size(), "adaptive_cubature");
  const int dim = static_cast<int>(lo.size());
  if (dim < 1 || dim > 6) {
    throw DimensionError("adaptive_cubature supports dimensions 1 to 6");
  }
  Integrator in(f, dim, opts.order);
  std::vector<Leaf> leaves;
  leaves.reserve(1024);
  Leaf root;
  root.lo.assign(lo.begin(), lo.end());
  root.hi.assign(hi.begin(), hi.end());
  root.coarse = in.cell(root.lo, root.hi);
  refine(in, root);
  leaves.push_back(std::move(root));

  auto worse = [&leaves](std::size_t a, std::size_t b) {
    if (leaves[a].error != leaves[b].error) {
      return leaves[a].error < leaves[b].error;
    }
    return a > b;
  };
  std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)>
      queue(worse);
  queue.push(0);

  double total = leaves[0].fine.value;
  double total_abs = leaves[0].fine.abs_value;
  double total_err = leaves[0].error;
  const int children = 1 << dim;

  while (total_err > std::max(opts.abs_tol, opts.rel_tol * total_abs)) {
    if (leaves.size() + children - 1 > opts.max_cells) {
      throw ConvergenceError(
          "adaptive cubature exceeded its cell budget (error estimate " +
          std::to_string(total_err) + ")");
    }
    const std::size_t worst = queue.top();
    queue.pop();
    Leaf parent = std::move(leaves[worst]);
    total -= parent.fine.value;
    total_abs -= parent.fine.abs_value;
    total_err -= parent.error;
    for (int m = 0; m < children; ++m) {
      Leaf child;
      child.lo = child_lo(parent, m);
      child.hi = child_hi(parent, m);
      child.coarse = parent.halves[m];
      refine(in, child);
      total += child.fine.value;
      total_abs += child.fine.abs_value;
      total_err += child.error;
      const std::size_t slot = m == 0 ? worst : leaves.size();
      if (m == 0) {
        leaves[worst] = std::move(child);
      } else {
        leaves.push_back(std::move(child));
      }
      queue.push(slot);
    }
    if (total_err < 0.0) total_err = 0.0;
  }

  CubatureResult out;
  for (const Leaf& leaf : leaves) {
    out.value += leaf.fine.value;
    out.error += leaf.error;
  }
  out.cells = leaves.size();
  return out;
}

}  // namespace wslab
