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

#ifndef WSLAB_VEC_HPP_
#define WSLAB_VEC_HPP_

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wslab/error.hpp"

namespace wslab {

using Vec = std::vector<double>;
using ConstSpan = std::span<const double>;

inline double dot(ConstSpan a, ConstSpan b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double euclidean_length(ConstSpan a) { return std::sqrt(dot(a, a)); }

inline Vec add(ConstSpan a, ConstSpan b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline Vec sub(ConstSpan a, ConstSpan b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline Vec scaled(double t, ConstSpan a) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = t * a[i];
  return out;
}

// out = a + t * b
inline Vec axpy(ConstSpan a, double t, ConstSpan b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + t * b[i];
  return out;
}

inline void require_dim(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": expected dimension " +
                         std::to_string(want) + ", got " +
                         std::to_string(got));
  }
}

}  // namespace wslab

#endif  // WSLAB_VEC_HPP_
