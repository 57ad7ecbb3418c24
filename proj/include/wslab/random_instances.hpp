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

#ifndef WSLAB_RANDOM_INSTANCES_HPP_
#define WSLAB_RANDOM_INSTANCES_HPP_

#include <cstddef>

#include "wslab/cylinder.hpp"
#include "wslab/measures.hpp"
#include "wslab/norms.hpp"
#include "wslab/rng.hpp"

namespace wslab {

// Atoms uniform in [-half_width, half_width]^dim, weights uniform in
// [0.2, 1] before normalization.
DiscreteMeasure random_measure(int dim, std::size_t atoms, double half_width,
                               CounterRng& rng);

// Atoms in the closed ball {|x| <= radius} of the given norm.
DiscreteMeasure random_ball_measure(const Norm& norm, std::size_t atoms,
                                    double radius, CounterRng& rng);

// Covector uniform in [-scale, scale]^dim.
Vec random_vector(int dim, double scale, CounterRng& rng);

// Random cylinder function with `fields` inner fields whose clamp boxes and
// saturation levels strictly contain [-data_half_width, data_half_width]^dim
// and whose outer map is a quadratic polynomial unclamped on the feature range.
CylinderFunction random_cylinder(int dim, std::size_t fields,
                                 double data_half_width, CounterRng& rng);

// Random MetaMeasure with `atoms` measures of `measure_atoms` atoms each.
MetaMeasure random_meta_measure(int dim, std::size_t atoms,
                                std::size_t measure_atoms, double half_width,
                                CounterRng& rng);

}  // namespace wslab

#endif  // WSLAB_RANDOM_INSTANCES_HPP_
