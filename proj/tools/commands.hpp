// Copyright 2026 The fairorder Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fairorder/noise_mechanisms.hpp"
#include "fairorder/scenario.hpp"

namespace fairorder::cli {

enum ExitCode : int {
  kPass = 0,
  kFail = 1,
  kConfig = 2,
  kInconclusive = 3,
  kLiveness = 4,
};

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::string grid;                  // sweep: "eps=0.5,1;n=0,1"
  std::filesystem::path trace;       // check
  std::filesystem::path views;       // quorum: check a serialized view instead
  std::string strategy = "constant"; // randomizer
  std::optional<std::uint64_t> instances;
};

// --seed, then FAIRORDER_SEED, then `fallback`.
std::uint64_t resolve_seed(const CommandOptions& opts, std::uint64_t fallback);

struct SweepGrid {
  std::vector<double> epsilons;
  std::vector<double> gaps;
};

// "eps=0.5,1,2;n=0,1,2,4". Either axis may be given as eps/epsilon and n/gap.
// Throws ConfigError on malformed input.
SweepGrid parse_grid(const std::string& text);

// Two requests with relevant scores 0 and n * lambda, issued together with
// no delay, under the fair policy with `kind` noise at `epsilon`.
ScenarioConfig pair_scenario(double n, double epsilon, double lambda = 1.0,
                             NoiseKind kind = NoiseKind::laplace);

// Each command writes its files under opts.out and diagnostics to `err`,
// returning one of ExitCode.
int cmd_run(const CommandOptions& opts, std::ostream& err);
int cmd_check(const CommandOptions& opts, std::ostream& err);
int cmd_certify(const CommandOptions& opts, std::ostream& err);
int cmd_sweep(const CommandOptions& opts, std::ostream& err);
int cmd_randomizer(const CommandOptions& opts, std::ostream& err);
int cmd_quorum(const CommandOptions& opts, std::ostream& err);

}  // namespace fairorder::cli
