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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "fairorder/adversary.hpp"
#include "fairorder/noise_mechanisms.hpp"
#include "fairorder/request_model.hpp"
#include "fairorder/rng.hpp"

namespace fairorder {

struct FcfsPolicy {
  friend bool operator==(const FcfsPolicy&, const FcfsPolicy&) = default;
};

struct TtlPolicy {
  std::size_t deadline_feature = 0;
  friend bool operator==(const TtlPolicy&, const TtlPolicy&) = default;
};

// Minimum adjusted score goes first; `descending` flips that for scenarios
// where a larger score is preferred (fees).
struct FairPolicy {
  NoiseSpec noise;
  FeaturePartition partition;
  bool descending = false;
};

using PolicyKind = std::variant<FcfsPolicy, TtlPolicy, FairPolicy>;

std::string_view policy_name(const PolicyKind& policy);

enum class ScenarioMode { generic, time, fee };

enum class CertifyMode { ordering_equality, k_ordering_equality, additive };

std::string_view to_string(CertifyMode mode);
CertifyMode parse_certify_mode(std::string_view name);

struct MultiServerConfig {
  std::size_t n = 1;
  std::size_t f = 0;
  std::vector<Tick> lags;
  std::vector<std::size_t> byzantine;
  std::size_t received_threshold = 0;  // 0 means f + 1
  std::size_t ordered_threshold = 0;   // 0 means n - f
};

struct TrialsConfig {
  std::uint64_t n_trials = 1;
  RngSeed base_seed{0};
  double confidence = 0.99;
  std::optional<std::pair<RequestId, RequestId>> pair;
  CertifyMode mode = CertifyMode::k_ordering_equality;
  std::optional<double> forced_k;
  std::optional<double> epsilon;  // defaults to the fair policy's epsilon
  double delta = 0.0;
  double widening = 3.0;
  double resolution = 0.05;
};

struct SweepConfig {
  std::vector<double> epsilons;
  std::vector<double> gaps;  // n values, in units of lambda
};

struct ScenarioConfig {
  std::size_t feature_count = 1;
  std::vector<std::size_t> relevant;
  std::vector<Request> requests;

  DelayModel delay;
  std::optional<std::size_t> delay_feature;
  // Irrelevant index that absorbs bribes and time misreports.
  std::optional<std::size_t> adversary_feature;
  // Relevant index filled with each request's true issue tick at load.
  std::optional<std::size_t> time_feature;
  std::vector<ByzantineClientSpec> adversaries;

  double lambda = 1.0;
  NoiseSpec noise;
  PolicyKind policy = FcfsPolicy{};
  ScenarioMode mode = ScenarioMode::generic;

  std::optional<Tick> drain_ticks;
  bool stability_gating = true;
  // No known delay bound: gated policies never see a request as stable.
  bool asynchronous = false;
  // Scenario promises adjacent eta gaps stay within lambda.
  bool assumption1 = false;
  double fee_gap_factor = 10.0;

  std::vector<std::pair<RequestId, RequestId>> predicate;
  // Checker names enabled for runs; empty means the four validity checks.
  std::vector<std::string> checkers;
  std::optional<MultiServerConfig> multi_server;
  std::optional<TrialsConfig> trials;
  std::optional<SweepConfig> sweep;
  std::optional<RngSeed> seed;

  FeaturePartition partition() const { return FeaturePartition(feature_count, relevant); }
  const ByzantineClientSpec* adversary_for(ClientId client) const;
  Tick drain() const;

  // Throws ConfigError on the first broken invariant.
  void validate() const;
};

struct ScenarioLint {
  bool assumption1_ok = true;
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
};

// Static checks: worst-case adjacent eta spread against lambda (delay
// spread, bribes, misreports included), bribe caps, and the fee-class
// separation warning.
ScenarioLint lint_scenario(const ScenarioConfig& scenario);

ScenarioConfig parse_scenario_json(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

// Builds a fair policy from the scenario's noise spec with sensitivity lambda.
FairPolicy make_fair_policy(const ScenarioConfig& scenario);

}  // namespace fairorder
