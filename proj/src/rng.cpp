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

#include "wslab/rng.hpp"

#include <cmath>
#include <numbers>

namespace wslab {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kStreamSalt = 0x632BE59BD9B4E019ULL;
}  // namespace

std::uint64_t CounterRng::mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t CounterRng::stream_id(std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(mix64(seed ^ mix64(stream + kStreamSalt))) {}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

std::uint64_t CounterRng::below(std::uint64_t n) {
  // Multiply-shift; bias is below 2^-64 * n and irrelevant here.
  const unsigned __int128 prod =
      static_cast<unsigned __int128>(next_u64()) * n;
  return static_cast<std::uint64_t>(prod >> 64);
}

double CounterRng::normal() {
  double u1 = uniform();
  const double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

void CounterRng::unit_vector(std::span<double> out) {
  double len = 0.0;
  while (len < 1e-12) {
    len = 0.0;
    for (double& x : out) {
      x = normal();
      len += x * x;
    }
    len = std::sqrt(len);
  }
  for (double& x : out) x /= len;
}

CounterRng CounterRng::child(std::uint64_t index) const {
  CounterRng c(0);
  c.key_ = mix64(key_ ^ mix64(index * kGolden + kStreamSalt));
  c.counter_ = 0;
  return c;
}

}  // namespace wslab
