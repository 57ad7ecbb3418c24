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

#ifndef WSLAB_SRC_SPHERE_SEARCH_HPP_
#define WSLAB_SRC_SPHERE_SEARCH_HPP_

#include <functional>

#include "wslab/vec.hpp"

namespace wslab::detail {

struct SphereMin {
  double value = 0.0;
  Vec arg;
};

// Global minimum of f over the Euclidean unit sphere of R^d, d in {1, 2, 3}:
// dense sampling followed by local refinement of the best candidates.
SphereMin minimize_on_sphere(int dim,
                             const std::function<double(ConstSpan)>& f);

}  // namespace wslab::detail

#endif  // WSLAB_SRC_SPHERE_SEARCH_HPP_
