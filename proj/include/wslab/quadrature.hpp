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

#ifndef WSLAB_QUADRATURE_HPP_
#define WSLAB_QUADRATURE_HPP_

#include <cstddef>
#include <functional>

#include "wslab/vec.hpp"

namespace wslab {

using ScalarField = std::function<double(ConstSpan)>;

struct CubatureOptions {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int order = 8;
  std::size_t max_cells = 100000;
};

struct CubatureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t cells = 0;
};

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, Vec& nodes, Vec& weights);

// Global adaptive tensor Gauss-Legendre cubature on the box [lo, hi].
// A cell's error is the difference between its own rule and the sum over
// its 2^d halves; the worst cell is split until the total error is below
// max(abs_tol, rel_tol * integral of |f|). Throws ConvergenceError when the
// cell budget runs out first.
CubatureResult adaptive_cubature(const ScalarField& f, ConstSpan lo,
                                 ConstSpan hi,
                                 const CubatureOptions& opts = {});

}  // namespace wslab

#endif  // WSLAB_QUADRATURE_HPP_
