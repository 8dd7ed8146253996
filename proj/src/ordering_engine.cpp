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

#include "fairorder/ordering_engine.hpp"

#include <algorithm>
#include <string>

#include "fairorder/adversary.hpp"
#include "fairorder/errors.hpp"

namespace fairorder {

namespace {

constexpr std::string_view kDelayStream = "engine.delay";
constexpr std::string_view kNoiseStream = "engine.noise";
constexpr std::string_view kPickStream = "engine.pick";

bool gated(const ScenarioConfig& scenario, const PolicyKind& policy) {
  return scenario.stability_gating && !std::holds_alternative<FcfsPolicy>(policy);
}

}  // namespace

bool is_stable(const Request& r, const EngineState& state, const ScenarioConfig& scenario,
               const PolicyKind& policy) {
  if (!state.server_received.contains(r.id)) return false;
  if (std::holds_alternative<FcfsPolicy>(policy)) return true;
  if (scenario.asynchronous) return false;
  return state.tick >= r.declared_issue_tick + scenario.delay.max_delay();
}

std::size_t pick_extreme(std::span<const double> adjusted, bool descending, RngStream& rng) {
  if (adjusted.empty()) throw InvalidInput("pick_extreme: empty candidate set");
  double best = adjusted[0];
  std::size_t ties = 1;
  for (std::size_t i = 1; i < adjusted.size(); ++i) {
    const double v = adjusted[i];
    if (descending ? v > best : v < best) {
      best = v;
      ties = 1;
    } else if (v == best) {
      ++ties;
    }
  }
  std::uint64_t chosen = ties == 1 ? 0 : rng.below(ties);
  for (std::size_t i = 0; i < adjusted.size(); ++i) {
    if (adjusted[i] == best && chosen-- == 0) return i;
  }
  return 0;
}

RequestId fair_policy_step(std::span<const Request> pending, const FeaturePartition& part,
                           const NoiseSpec& spec, RngStream& rng, bool descending) {
  if (pending.empty()) throw InvalidInput("fair_policy_step: pending set is empty");
  std::vector<double> adjusted;
  adjusted.reserve(pending.size());
  for (const auto& r : pending) adjusted.push_back(score(r, part).total + sample(spec, rng));
  return pending[pick_extreme(adjusted, descending, rng)].id;
}

Engine::Engine(const ScenarioConfig& scenario, const PolicyKind& policy, RngSeed seed)
    : scenario_(scenario),
      policy_(policy),
      partition_(scenario.partition()),
      noise_rng_(derive_seed(seed, kNoiseStream)),
      pick_rng_(derive_seed(seed, kPickStream)) {
  if (const auto* fair = std::get_if<FairPolicy>(&policy_)) {
    fair->noise.validate();
    partition_ = fair->partition;
  }
}

bool Engine::is_stable(RequestId id) const {
  const auto it = state_.server_received.find(id);
  if (it == state_.server_received.end()) return false;
  return fairorder::is_stable(it->second.request, state_, scenario_, policy_);
}

void Engine::step(const Event& event) {
  if (event.at_tick < state_.tick) {
    throw ProtocolError("event at tick " + std::to_string(event.at_tick) +
                        " precedes engine tick " + std::to_string(state_.tick));
  }
  state_.tick = event.at_tick;
  switch (event.kind) {
    case EventKind::issue: {
      const Request& r = event.request;
      if (state_.server_received.contains(r.id)) {
        throw ProtocolError("request " + std::to_string(r.id) + " issued twice");
      }
      for (const auto& [client, reqs] : state_.client_pending) {
        for (const auto& q : reqs) {
          if (q.id == r.id) throw ProtocolError("request " + std::to_string(r.id) + " issued twice");
        }
      }
      state_.client_pending[r.client_id].push_back(r);
      log_.push_back({event.at_tick, TraceEventKind::issue, r.id});
      return;
    }
    case EventKind::deliver: {
      if (state_.server_received.contains(event.id)) {
        throw ProtocolError("request " + std::to_string(event.id) + " delivered twice");
      }
      for (auto& [client, reqs] : state_.client_pending) {
        auto it = std::find_if(reqs.begin(), reqs.end(),
                               [&](const Request& q) { return q.id == event.id; });
        if (it == reqs.end()) continue;
        DeliveredRequest d{std::move(*it), event.at_tick, 0.0};
        reqs.erase(it);
        if (scenario_.delay_feature) {
          d.request.features[*scenario_.delay_feature] += static_cast<double>(event.delay);
        }
        if (const auto* fair = std::get_if<FairPolicy>(&policy_)) {
          d.adjusted_score = score(d.request, partition_).total + sample(fair->noise, noise_rng_);
        }
        state_.pending.push_back(event.id);
        state_.server_received.emplace(event.id, std::move(d));
        log_.push_back({event.at_tick, TraceEventKind::deliver, event.id});
        return;
      }
      throw ProtocolError("deliver of unknown request " + std::to_string(event.id));
    }
    case EventKind::policy_step:
      policy_step();
      return;
  }
}

void Engine::append(RequestId id) {
  state_.output.push_back(id);
  std::erase(state_.pending, id);
  log_.push_back({state_.tick, TraceEventKind::order, id});
}

void Engine::policy_step() {
  if (state_.pending.empty()) return;

  if (std::holds_alternative<FcfsPolicy>(policy_)) {
    // pending is already in (delivery tick, id) order.
    const std::vector<RequestId> batch = state_.pending;
    for (RequestId id : batch) append(id);
    return;
  }

  const bool wait = gated(scenario_, policy_);
  std::vector<RequestId> batch;
  for (RequestId id : state_.pending) {
    if (!wait || is_stable(id)) batch.push_back(id);
  }
  if (batch.empty()) return;

  if (const auto* ttl = std::get_if<TtlPolicy>(&policy_)) {
    std::sort(batch.begin(), batch.end(), [&](RequestId a, RequestId b) {
      const double da = state_.server_received.at(a).request.features[ttl->deadline_feature];
      const double db = state_.server_received.at(b).request.features[ttl->deadline_feature];
      return da != db ? da < db : a < b;
    });
    for (RequestId id : batch) append(id);
    return;
  }

  const auto& fair = std::get<FairPolicy>(policy_);
  std::vector<double> adjusted;
  while (!batch.empty()) {
    adjusted.clear();
    for (RequestId id : batch) adjusted.push_back(state_.server_received.at(id).adjusted_score);
    const std::size_t pick = pick_extreme(adjusted, fair.descending, pick_rng_);
    append(batch[pick]);
    batch.erase(batch.begin() + static_cast<std::ptrdiff_t>(pick));
  }
}

Simulator::Simulator(ScenarioConfig scenario, PolicyKind policy)
    : scenario_(std::move(scenario)), policy_(std::move(policy)) {
  scenario_.validate();
  if (const auto* fair = std::get_if<FairPolicy>(&policy_)) fair->noise.validate();
  issued_.reserve(scenario_.requests.size());
  for (const auto& r : scenario_.requests) {
    Request q = r;
    if (const auto* adv = scenario_.adversary_for(q.client_id)) {
      q = misreport_time(q, *adv, scenario_.adversary_feature);
      if (scenario_.adversary_feature) {
        q = apply_bribe(q, *adv, *scenario_.adversary_feature, std::nullopt).request;
      }
    }
    issued_.push_back(std::move(q));
  }
  std::sort(issued_.begin(), issued_.end(), [](const Request& a, const Request& b) {
    return a.issue_tick != b.issue_tick ? a.issue_tick < b.issue_tick : a.id < b.id;
  });
}

Trace Simulator::run(RngSeed seed, std::vector<Request>* delivered) const {
  struct Delivery {
    Tick at;
    RequestId id;
    Tick delay;
  };
  RngStream delay_rng(derive_seed(seed, kDelayStream));
  std::vector<Delivery> deliveries;
  deliveries.reserve(issued_.size());
  Tick last = 0;
  const bool wait = gated(scenario_, policy_) && !scenario_.asynchronous;
  const Tick max_delay = scenario_.delay.max_delay();
  for (const auto& r : issued_) {
    const Tick d = scenario_.delay.for_client(r.client_id).sample(delay_rng);
    deliveries.push_back({r.issue_tick + d, r.id, d});
    last = std::max(last, r.issue_tick + d);
    if (wait) last = std::max(last, r.declared_issue_tick + max_delay);
  }
  std::sort(deliveries.begin(), deliveries.end(), [](const Delivery& a, const Delivery& b) {
    return a.at != b.at ? a.at < b.at : a.id < b.id;
  });
  const Tick horizon = last + scenario_.drain();

  Engine engine(scenario_, policy_, seed);
  std::size_t next_issue = 0;
  std::size_t next_delivery = 0;
  for (Tick t = 0; t <= horizon; ++t) {
    for (; next_issue < issued_.size() && issued_[next_issue].issue_tick == t; ++next_issue) {
      engine.step(Event::issue(t, issued_[next_issue]));
    }
    for (; next_delivery < deliveries.size() && deliveries[next_delivery].at == t;
         ++next_delivery) {
      engine.step(Event::deliver(t, deliveries[next_delivery].id, deliveries[next_delivery].delay));
    }
    engine.step(Event::policy_step(t));
  }

  if (delivered) {
    delivered->clear();
    for (const auto& [id, d] : engine.state().server_received) delivered->push_back(d.request);
  }

  Trace trace;
  trace.events = engine.log();
  trace.final_order = engine.state().output;
  trace.seed = seed;
  trace.horizon = horizon;
  return trace;
}

Trace run(const ScenarioConfig& scenario, const PolicyKind& policy, RngSeed seed) {
  return Simulator(scenario, policy).run(seed);
}

}  // namespace fairorder
