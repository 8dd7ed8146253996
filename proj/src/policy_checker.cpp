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

#include "fairorder/policy_checker.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "fairorder/errors.hpp"
#include "fairorder/ordering_engine.hpp"

namespace fairorder {

std::string_view to_string(Property property) {
  switch (property) {
    case Property::order_determinism:
      return "order_determinism";
    case Property::non_blocking:
      return "non_blocking";
    case Property::consistency:
      return "consistency";
    case Property::monotonic_order:
      return "monotonic_order";
    case Property::policy_compliance:
      return "policy_compliance";
    case Property::strong_non_blocking:
      return "strong_non_blocking";
  }
  return "unknown";
}

std::string format_verdict(const Verdict& v) {
  std::string line(to_string(v.property));
  line += v.passed ? ",pass," : ",fail,";
  if (v.witness) {
    line += "t=" + std::to_string(v.witness->tick) + " ids=";
    for (std::size_t i = 0; i < v.witness->ids.size(); ++i) {
      if (i) line += ';';
      line += std::to_string(v.witness->ids[i]);
    }
    if (!v.witness->note.empty()) line += " " + v.witness->note;
  }
  return line;
}

PolicyPredicate::PolicyPredicate(std::vector<std::pair<RequestId, RequestId>> pairs)
    : pairs_(std::move(pairs)) {
  std::set<std::pair<RequestId, RequestId>> closure(pairs_.begin(), pairs_.end());
  std::set<RequestId> nodes;
  for (const auto& [a, b] : pairs_) {
    nodes.insert(a);
    nodes.insert(b);
  }
  // Warshall over the (small) explicit node set.
  for (RequestId k : nodes) {
    for (RequestId i : nodes) {
      if (!closure.contains({i, k})) continue;
      for (RequestId j : nodes) {
        if (closure.contains({k, j})) closure.insert({i, j});
      }
    }
  }
  for (RequestId n : nodes) {
    if (closure.contains({n, n})) {
      throw ConfigError("policy predicate is not a strict partial order: request " +
                        std::to_string(n) + " must precede itself");
    }
  }
  closure_.assign(closure.begin(), closure.end());
}

PolicyPredicate PolicyPredicate::from_relevance(std::span<const Request> requests,
                                                const FeaturePartition& part, bool descending) {
  std::vector<std::pair<RequestId, RequestId>> pairs;
  for (const auto& a : requests) {
    const double ra = score(a, part).relev;
    for (const auto& b : requests) {
      const double rb = score(b, part).relev;
      if (descending ? ra > rb : ra < rb) pairs.emplace_back(a.id, b.id);
    }
  }
  return PolicyPredicate(std::move(pairs));
}

bool PolicyPredicate::must_precede(RequestId a, RequestId b) const {
  return std::binary_search(closure_.begin(), closure_.end(), std::make_pair(a, b));
}

Verdict check_order_determinism(const Trace& trace) {
  std::map<RequestId, Tick> delivered;
  for (const auto& e : trace.events) {
    if (e.kind == TraceEventKind::deliver && !delivered.contains(e.id)) delivered[e.id] = e.tick;
  }
  for (const auto& e : trace.events) {
    if (e.kind != TraceEventKind::order) continue;
    const auto it = delivered.find(e.id);
    if (it == delivered.end()) {
      return Verdict::fail(Property::order_determinism,
                           {e.tick, {e.id}, "ordered but never delivered"});
    }
    if (e.tick < it->second) {
      return Verdict::fail(Property::order_determinism,
                           {e.tick, {e.id}, "ordered before delivery at t=" +
                                                std::to_string(it->second)});
    }
  }
  return Verdict::pass(Property::order_determinism);
}

Verdict check_non_blocking(const Trace& trace) {
  const std::set<RequestId> ordered(trace.final_order.begin(), trace.final_order.end());
  for (const auto& e : trace.events) {
    if (e.kind == TraceEventKind::deliver && !ordered.contains(e.id)) {
      return Verdict::fail(Property::non_blocking,
                           {trace.horizon, {e.id}, "delivered but never ordered"});
    }
  }
  return Verdict::pass(Property::non_blocking);
}

namespace {

// First id in `later` that is not an extension of `earlier`, for witnesses.
std::vector<RequestId> divergence(std::span<const RequestId> earlier,
                                  std::span<const RequestId> later) {
  const auto n = std::min(earlier.size(), later.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (earlier[i] != later[i]) return {earlier[i], later[i]};
  }
  return earlier.size() > later.size() ? std::vector<RequestId>{earlier[n]}
                                       : std::vector<RequestId>{};
}

}  // namespace

Verdict check_consistency(const Trace& trace) {
  const auto snaps = snapshots(trace);
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    const auto& prev = snaps[i - 1];
    const auto& cur = snaps[i];
    if (prev.received != cur.received) continue;
    if (!is_prefix(prev.ordered, cur.ordered)) {
      return Verdict::fail(Property::consistency,
                           {cur.tick, divergence(prev.ordered, cur.ordered),
                            "output changed with no new deliveries"});
    }
    for (std::size_t k = prev.ordered.size(); k < cur.ordered.size(); ++k) {
      if (!std::binary_search(prev.received.begin(), prev.received.end(), cur.ordered[k])) {
        return Verdict::fail(Property::consistency,
                             {cur.tick, {cur.ordered[k]}, "ordered an unreceived request"});
      }
    }
  }
  return Verdict::pass(Property::consistency);
}

Verdict check_monotonic_order(const Trace& trace) {
  const auto snaps = snapshots(trace);
  for (std::size_t i = 1; i < snaps.size(); ++i) {
    const auto& prev = snaps[i - 1];
    const auto& cur = snaps[i];
    if (prev.received == cur.received) continue;
    if (!is_prefix(prev.ordered, cur.ordered)) {
      return Verdict::fail(Property::monotonic_order,
                           {cur.tick, divergence(prev.ordered, cur.ordered),
                            "arrival rewrote the existing order"});
    }
  }
  return Verdict::pass(Property::monotonic_order);
}

Verdict check_strong_non_blocking(const Trace& trace) {
  const auto snaps = snapshots(trace);
  for (std::size_t i = 0; i + 1 < snaps.size(); ++i) {
    if (!snaps[i].pending.empty() && snaps[i + 1].ordered.size() <= snaps[i].ordered.size()) {
      return Verdict::fail(Property::strong_non_blocking,
                           {snaps[i].tick, snaps[i].pending, "pending set idle"});
    }
  }
  return Verdict::pass(Property::strong_non_blocking);
}

Verdict check_policy_compliance(const Trace& trace, const PolicyPredicate& pred) {
  std::set<RequestId> known;
  for (const auto& e : trace.events) known.insert(e.id);
  known.insert(trace.final_order.begin(), trace.final_order.end());
  for (const auto& [a, b] : pred.pairs()) {
    if (!known.contains(a) || !known.contains(b)) {
      throw ConfigError("policy predicate names a request absent from the trace");
    }
  }
  std::map<RequestId, std::size_t> position;
  for (std::size_t i = 0; i < trace.final_order.size(); ++i) {
    position.emplace(trace.final_order[i], i);
  }
  for (const auto& [a, b] : pred.closure()) {
    const auto pa = position.find(a);
    const auto pb = position.find(b);
    if (pa == position.end() || pb == position.end()) continue;
    if (pa->second > pb->second) {
      return Verdict::fail(Property::policy_compliance,
                           {trace.horizon, {a, b}, "must-precede pair ordered in reverse"});
    }
  }
  return Verdict::pass(Property::policy_compliance);
}

std::vector<Verdict> check_validity(const Trace& trace) {
  return {check_order_determinism(trace), check_non_blocking(trace), check_consistency(trace),
          check_monotonic_order(trace)};
}

namespace {

std::vector<TraceEvent> server_visible_until(const Trace& trace, Tick until) {
  std::vector<TraceEvent> out;
  for (const auto& e : trace.events) {
    if (e.kind != TraceEventKind::issue && e.tick <= until) out.push_back(e);
  }
  return out;
}

}  // namespace

ImpossibilityOutcome impossibility_harness(const PolicyKind& policy, const PolicyPredicate& pred,
                                           std::span<const Request> requests,
                                           std::size_t feature_count,
                                           std::vector<std::size_t> relevant,
                                           bool stability_gating) {
  if (pred.empty()) throw ConfigError("impossibility harness needs a comparable pair");
  auto find = [&](RequestId id) -> const Request& {
    for (const auto& r : requests) {
      if (r.id == id) return r;
    }
    throw ConfigError("predicate names request " + std::to_string(id) +
                      " with no request definition");
  };

  ImpossibilityOutcome out;
  const std::pair<RequestId, RequestId>* chosen = nullptr;
  for (const auto& p : pred.pairs()) {
    if (find(p.first).client_id != find(p.second).client_id) {
      chosen = &p;
      break;
    }
  }
  if (!chosen) return out;  // trivial predicate: every comparable pair shares a client
  out.applicable = true;
  out.r1 = chosen->first;
  out.r2 = chosen->second;

  Request r1 = find(out.r1);
  Request r2 = find(out.r2);
  r1.issue_tick = r1.declared_issue_tick = 0;
  r2.issue_tick = r2.declared_issue_tick = 0;

  ScenarioConfig base;
  base.feature_count = feature_count;
  base.relevant = std::move(relevant);
  base.delay.base = DelayDistribution::constant(1);
  base.asynchronous = true;
  base.stability_gating = stability_gating;
  base.drain_ticks = 1;

  ScenarioConfig only_r2 = base;
  only_r2.requests = {r2};
  out.sigma_r2 = run(only_r2, policy, RngSeed{0});
  for (const auto& e : out.sigma_r2.events) {
    if (e.kind == TraceEventKind::order && e.id == out.r2) out.r2_order_tick = e.tick;
  }

  // Adversarial delay: r1 shows up one tick after r2 was ordered (or after
  // the whole of sigma_r2 when r2 is never ordered).
  const Tick cutoff = out.r2_order_tick.value_or(out.sigma_r2.horizon);
  ScenarioConfig both = base;
  both.requests = {r1, r2};
  both.delay.overrides[r1.client_id] = DelayDistribution::constant(cutoff + 1);
  out.sigma_both = run(both, policy, RngSeed{0});

  out.prefix_agrees =
      server_visible_until(out.sigma_r2, cutoff) == server_visible_until(out.sigma_both, cutoff);

  const PolicyPredicate pair_pred({{out.r1, out.r2}});
  const Verdict compliance = check_policy_compliance(out.sigma_both, pair_pred);
  const Verdict liveness = check_non_blocking(out.sigma_both);
  if (!compliance.passed) {
    out.verdict = compliance;
  } else if (!liveness.passed) {
    out.verdict = liveness;
  } else {
    out.verdict = compliance;
  }
  return out;
}

}  // namespace fairorder
