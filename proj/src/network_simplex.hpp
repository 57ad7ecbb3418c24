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

#ifndef WSLAB_SRC_NETWORK_SIMPLEX_HPP_
#define WSLAB_SRC_NETWORK_SIMPLEX_HPP_

#include <cstddef>

#include "wslab/vec.hpp"

namespace wslab::detail {

struct SimplexResult {
  Vec flow;  // row-major m x n
  Vec phi;   // row duals
  Vec psi;   // column duals, phi_i + psi_j <= cost_ij
  std::size_t iterations = 0;
  double artificial_flow = 0.0;
};

// Primal network simplex for the balanced transportation problem
//   min sum c_ij f_ij  s.t.  sum_j f_ij = supply_i, sum_i f_ij = demand_j,
// started from an all-artificial strongly feasible tree and priced by block
// search. Throws ConvergenceError after max_iterations pivots.
SimplexResult solve_transport_lp(const Vec& supply, const Vec& demand,
                                 const Vec& cost, std::size_t max_iterations);

}  // namespace wslab::detail

#endif  // WSLAB_SRC_NETWORK_SIMPLEX_HPP_
