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
#include <optional>
#include <set>
#include <string_view>
#include <vector>

#include "fairorder/noise_mechanisms.hpp"
#include "fairorder/rng.hpp"

namespace fairorder {

struct ReplicaSet {
  std::size_t n = 1;
  std::size_t f = 0;
  std::set<std::size_t> byzantine_ids;

  // Requires |byzantine| <= f, n >= 3f + 1 and ids < n.
  void validate() const;
  bool is_correct(std::size_t replica) const { return !byzantine_ids.contains(replica); }
};

enum class ByzantineStrategy { constant_output, copy_correct, extreme_value };

std::string_view to_string(ByzantineStrategy s);
ByzantineStrategy parse_byzantine_strategy(std::string_view name);

struct RandomizerOutcome {
  std::vector<std::optional<double>> per_replica;
  std::uint64_t instance_id = 0;

  friend bool operator==(const RandomizerOutcome&, const RandomizerOutcome&) = default;
};

// The value every correct replica outputs for an instance: one draw from
// `spec` on a stream derived from (seed, instance_id).
double common_sample(const NoiseSpec& spec, std::uint64_t instance_id, RngSeed seed);

// Simulated shared randomizer. Byzantine replicas draw from their own
// stream, so the strategy never feeds back into correct outputs.
RandomizerOutcome run_randomizer(const ReplicaSet& replicas, const NoiseSpec& spec,
                                 std::uint64_t instance_id, RngSeed seed,
                                 ByzantineStrategy strategy = ByzantineStrategy::constant_output);

// Agreement and termination over the correct replicas: every correct value
// is present and all are bitwise equal.
bool check_agreement(const RandomizerOutcome& outcome, const ReplicaSet& replicas);

struct RandomizerSweep {
  std::uint64_t instances = 0;
  std::uint64_t agreement_failures = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased, of the correct-value stream
};

// Runs instances 0 .. n_instances - 1. Outcomes are generated in parallel and
// reduced in instance order, so results do not depend on thread count.
RandomizerSweep sweep_randomizer(const ReplicaSet& replicas, const NoiseSpec& spec,
                                 std::uint64_t n_instances, RngSeed seed,
                                 ByzantineStrategy strategy);

}  // namespace fairorder
