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

#ifndef WSLAB_RNG_HPP_
#define WSLAB_RNG_HPP_

#include <cstdint>
#include <span>
#include <string_view>

namespace wslab {

// Counter-based generator. Draw number i of the stream (seed, stream) is
//
//   key   = mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019))
//   out_i = mix64(key + (i + 1) * 0x9E3779B97F4A7C15)
//
// where mix64 is the SplitMix64 finalizer (Stafford variant 13). Doubles are
// the top 53 bits of out_i scaled by 2^-53; normals use Box-Muller on two
// consecutive uniforms. Any port that follows these three rules reproduces
// every stream bit for bit, independently of the C++ standard library.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  static std::uint64_t mix64(std::uint64_t z);
  // Stable 64-bit id for a named stream (FNV-1a).
  static std::uint64_t stream_id(std::string_view name);

  std::uint64_t next_u64();
  // Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  double normal();
  // Uniform direction on the Euclidean unit sphere.
  void unit_vector(std::span<double> out);

  // Independent child stream; children of distinct indices never overlap.
  CounterRng child(std::uint64_t index) const;

  std::uint64_t counter() const { return counter_; }
  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace wslab

#endif  // WSLAB_RNG_HPP_
