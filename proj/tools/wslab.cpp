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

// wslab: config-driven verification runner.
//
//   wslab run <config.toml> [--out DIR] [--jobs N]
//   wslab validate <config.toml>
//
// Exit status: 0 when every check passes, 1 on invariant violations,
// 2 on configuration or usage errors. WSLAB_LOG selects verbosity.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "wslab/config.hpp"
#include "wslab/error.hpp"
#include "wslab/experiments.hpp"
#include "wslab/log.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kViolations = 1;
constexpr int kConfigError = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wasserstein-space numerical verification suites"};
  app.require_subcommand(1);

  std::string run_config;
  std::string out_dir;
  std::size_t jobs = 1;
  CLI::App* run = app.add_subcommand("run", "Run the experiment described by a config");
  run->add_option("config", run_config, "Experiment config (TOML)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides [output] dir)");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::string validate_config;
  CLI::App* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", validate_config, "Experiment config (TOML)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*validate) {
      const wslab::ExperimentConfig cfg = wslab::load_config(validate_config);
      std::printf("%s: ok (%s)\n", validate_config.c_str(), cfg.experiment.c_str());
      return kOk;
    }
    const wslab::ExperimentConfig cfg = wslab::load_config(run_config);
    const std::string dir = out_dir.empty() ? cfg.output_dir : out_dir;
    const wslab::ExperimentReport report = wslab::run_experiment(cfg, jobs);
    wslab::write_report(report, dir);
    std::printf("%s: %s, %zu violation(s), report in %s\n", cfg.experiment.c_str(),
                report.violations == 0 ? "pass" : "fail", report.violations, dir.c_str());
    return report.violations == 0 ? kOk : kViolations;
  } catch (const wslab::ParseError& e) {
    std::fprintf(stderr, "wslab: %s\n", e.what());
    return kConfigError;
  } catch (const wslab::InvalidArgument& e) {
    std::fprintf(stderr, "wslab: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    // Solver failures and broken invariants count as violations.
    std::fprintf(stderr, "wslab: %s\n", e.what());
    return kViolations;
  }
}
