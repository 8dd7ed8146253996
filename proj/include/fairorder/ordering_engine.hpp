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

#include <map>
#include <span>
#include <vector>

#include "fairorder/request_model.hpp"
#include "fairorder/rng.hpp"
#include "fairorder/scenario.hpp"
#include "fairorder/trace.hpp"

namespace fairorder {

struct DeliveredRequest {
  Request request;
  Tick delivered_at = 0;
  // Pre-noise score plus the request's single cached noise sample. Only
  // meaningful under the fair policy.
  double adjusted_score = 0.0;
};

struct EngineState {
  Tick tick = 0;
  std::map<ClientId, std::vector<Request>> client_pending;  // CR_i
  std::map<RequestId, DeliveredRequest> server_received;    // CS
  std::vector<RequestId> pending;                           // PS, in delivery order
  std::vector<RequestId> output;                            // O_t
};

enum class EventKind { issue, deliver, policy_step };

struct Event {
  Tick at_tick = 0;
  EventKind kind = EventKind::policy_step;
  Request request;  // issue only
  RequestId id = 0;  // deliver only
  Tick delay = 0;    // deliver only; recorded into the scenario's delay feature

  static Event issue(Tick at, Request r) { return {at, EventKind::issue, std::move(r), 0, 0}; }
  static Event deliver(Tick at, RequestId id, Tick delay = 0) {
    return {at, EventKind::deliver, {}, id, delay};
  }
  static Event policy_step(Tick at) { return {at, EventKind::policy_step, {}, 0, 0}; }
};

// Single ordering server. Holds references to the scenario and policy, which
// must outlive it.
class Engine {
 public:
  Engine(const ScenarioConfig& scenario, const PolicyKind& policy, RngSeed seed);

  // Applies one transition. Throws ProtocolError for time going backwards,
  // duplicate issues, and unknown or repeated deliveries.
  void step(const Event& event);

  const EngineState& state() const { return state_; }
  const std::vector<TraceEvent>& log() const { return log_; }

  bool is_stable(RequestId id) const;

 private:
  void policy_step();
  void append(RequestId id);

  const ScenarioConfig& scenario_;
  const PolicyKind& policy_;
  FeaturePartition partition_;
  RngStream noise_rng_;
  RngStream pick_rng_;
  EngineState state_;
  std::vector<TraceEvent> log_;
};

// Stability test against the scenario's declared maximum delivery delay.
// FCFS ranks by arrival, so anything delivered is stable; gated TTL and fair
// policies wait until declared_issue_tick + max_delay.
bool is_stable(const Request& r, const EngineState& state, const ScenarioConfig& scenario,
               const PolicyKind& policy);

// Index of the extreme (min, or max when `descending`) adjusted score; ties
// are broken uniformly at random.
std::size_t pick_extreme(std::span<const double> adjusted, bool descending, RngStream& rng);

// One round of the fair policy over a pending set: each request gets a fresh
// noise sample on top of its score, then a uniform pick among the extreme.
RequestId fair_policy_step(std::span<const Request> pending, const FeaturePartition& part,
                           const NoiseSpec& spec, RngStream& rng, bool descending = false);

// Compiled scenario: adversary transforms applied once, reused across seeds.
class Simulator {
 public:
  Simulator(ScenarioConfig scenario, PolicyKind policy);

  // When `delivered` is given it receives every delivered request as the
  // server saw it (delay folded into eta), in id order.
  Trace run(RngSeed seed, std::vector<Request>* delivered = nullptr) const;

  const ScenarioConfig& scenario() const { return scenario_; }
  const PolicyKind& policy() const { return policy_; }
  // Requests as issued: misreports and bribes applied, delays not yet.
  const std::vector<Request>& issued() const { return issued_; }

 private:
  ScenarioConfig scenario_;
  PolicyKind policy_;
  std::vector<Request> issued_;
};

Trace run(const ScenarioConfig& scenario, const PolicyKind& policy, RngSeed seed);

}  // namespace fairorder
