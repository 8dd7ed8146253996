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

#include "fairorder/shared_randomizer.hpp"

#include <cstring>
#include <limits>
#include <string>

#include "fairorder/errors.hpp"

namespace fairorder {

void ReplicaSet::validate() const {
  if (n == 0) throw ConfigError("replica set: n must be positive");
  if (n < 3 * f + 1) throw ConfigError("replica set: requires n >= 3f + 1");
  if (byzantine_ids.size() > f) throw ConfigError("replica set: more Byzantine replicas than f");
  if (!byzantine_ids.empty() && *byzantine_ids.rbegin() >= n) {
    throw ConfigError("replica set: Byzantine id out of range");
  }
}

std::string_view to_string(ByzantineStrategy s) {
  switch (s) {
    case ByzantineStrategy::constant_output:
      return "constant";
    case ByzantineStrategy::copy_correct:
      return "copy_correct";
    case ByzantineStrategy::extreme_value:
      return "extreme";
  }
  return "unknown";
}

ByzantineStrategy parse_byzantine_strategy(std::string_view name) {
  if (name == "constant") return ByzantineStrategy::constant_output;
  if (name == "copy_correct") return ByzantineStrategy::copy_correct;
  if (name == "extreme") return ByzantineStrategy::extreme_value;
  throw ConfigError("unknown Byzantine strategy '" + std::string(name) + "'");
}

double common_sample(const NoiseSpec& spec, std::uint64_t instance_id, RngSeed seed) {
  RngStream rng(derive_seed(derive_seed(seed, "randomizer.common"), instance_id));
  return sample(spec, rng);
}

RandomizerOutcome run_randomizer(const ReplicaSet& replicas, const NoiseSpec& spec,
                                 std::uint64_t instance_id, RngSeed seed,
                                 ByzantineStrategy strategy) {
  replicas.validate();
  spec.validate();
  const double common = common_sample(spec, instance_id, seed);
  RngStream adversary(derive_seed(derive_seed(seed, "randomizer.adversary"), instance_id));

  RandomizerOutcome out;
  out.instance_id = instance_id;
  out.per_replica.resize(replicas.n);
  for (std::size_t i = 0; i < replicas.n; ++i) {
    if (replicas.is_correct(i)) {
      out.per_replica[i] = common;
      continue;
    }
    switch (strategy) {
      case ByzantineStrategy::constant_output:
        out.per_replica[i] = 0.0;
        break;
      case ByzantineStrategy::copy_correct:
        out.per_replica[i] = common;
        break;
      case ByzantineStrategy::extreme_value: {
        const double big = std::numeric_limits<double>::max();
        out.per_replica[i] = (adversary() & 1) ? big : -big;
        break;
      }
    }
  }
  return out;
}

bool check_agreement(const RandomizerOutcome& outcome, const ReplicaSet& replicas) {
  if (outcome.per_replica.size() != replicas.n) return false;
  std::optional<double> seen;
  for (std::size_t i = 0; i < replicas.n; ++i) {
    if (!replicas.is_correct(i)) continue;
    const auto& v = outcome.per_replica[i];
    if (!v) return false;
    if (!seen) {
      seen = v;
    } else if (std::memcmp(&*seen, &*v, sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

RandomizerSweep sweep_randomizer(const ReplicaSet& replicas, const NoiseSpec& spec,
                                 std::uint64_t n_instances, RngSeed seed,
                                 ByzantineStrategy strategy) {
  replicas.validate();
  spec.validate();
  std::size_t first_correct = 0;
  while (!replicas.is_correct(first_correct)) ++first_correct;

  std::vector<double> values(n_instances);
  std::vector<unsigned char> agreed(n_instances);
  const auto n = static_cast<std::int64_t>(n_instances);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    const auto outcome = run_randomizer(replicas, spec, idx, seed, strategy);
    agreed[idx] = check_agreement(outcome, replicas) ? 1 : 0;
    values[idx] = outcome.per_replica[first_correct].value_or(0.0);
  }

  RandomizerSweep sweep;
  sweep.instances = n_instances;
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 0; i < n_instances; ++i) {
    if (!agreed[i]) ++sweep.agreement_failures;
    const double delta = values[i] - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (values[i] - mean);
  }
  sweep.mean = mean;
  sweep.variance = n_instances > 1 ? m2 / static_cast<double>(n_instances - 1) : 0.0;
  return sweep;
}

}  // namespace fairorder
