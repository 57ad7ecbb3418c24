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

#ifndef WSLAB_CONFIG_HPP_
#define WSLAB_CONFIG_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wslab/norms.hpp"

namespace wslab {

inline constexpr int kSchemaVersion = 1;

// Experiment definition read from TOML:
//
//   schema_version = 1
//   experiment = "duality_gap"
//   seed = 42
//   [cost]
//   p = 2.5
//   [cost.norm]
//   kind = "p_norm"
//   dim = 2
//   params = { exponent = 3.0 }
//   [params]       # experiment-specific, see default_params()
//   [tolerances]   # positive reals, see default_tolerances()
//   [output]
//   dir = "out"
struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  std::string experiment;
  std::uint64_t seed = 0;
  Cost cost{Norm::euclidean(2), 2.0};
  // Defaults merged with the file's [params] and [tolerances].
  nlohmann::json params;
  nlohmann::json tolerances;
  std::string output_dir = "out";
};

const std::vector<std::string>& experiment_kinds();
nlohmann::json default_params(std::string_view experiment);
nlohmann::json default_tolerances(std::string_view experiment);

// Both throw ParseError on malformed TOML and on schema violations.
ExperimentConfig parse_config(std::string_view text,
                              std::string_view source = "<config>");
ExperimentConfig load_config(const std::string& path);

}  // namespace wslab

#endif  // WSLAB_CONFIG_HPP_
