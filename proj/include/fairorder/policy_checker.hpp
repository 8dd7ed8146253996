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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fairorder/request_model.hpp"
#include "fairorder/scenario.hpp"
#include "fairorder/trace.hpp"

namespace fairorder {

enum class Property {
  order_determinism,
  non_blocking,
  consistency,
  monotonic_order,
  policy_compliance,
  strong_non_blocking,
};

std::string_view to_string(Property property);

struct Witness {
  Tick tick = 0;
  std::vector<RequestId> ids;
  std::string note;
};

struct Verdict {
  Property property = Property::order_determinism;
  bool passed = true;
  std::optional<Witness> witness;

  static Verdict pass(Property p) { return {p, true, std::nullopt}; }
  static Verdict fail(Property p, Witness w) { return {p, false, std::move(w)}; }
};

// "property,pass|fail,witness" with the witness as "t=<tick> ids=<a;b> <note>".
std::string format_verdict(const Verdict& v);

// Explicit must-precede pairs. Construction computes the transitive closure
// and rejects anything that is not a strict partial order.
class PolicyPredicate {
 public:
  PolicyPredicate() = default;
  explicit PolicyPredicate(std::vector<std::pair<RequestId, RequestId>> pairs);

  // a must precede b whenever relev(a) < relev(b) (or > when descending).
  static PolicyPredicate from_relevance(std::span<const Request> requests,
                                        const FeaturePartition& part, bool descending = false);

  std::span<const std::pair<RequestId, RequestId>> pairs() const { return pairs_; }
  std::span<const std::pair<RequestId, RequestId>> closure() const { return closure_; }
  bool must_precede(RequestId a, RequestId b) const;
  bool empty() const { return pairs_.empty(); }

 private:
  std::vector<std::pair<RequestId, RequestId>> pairs_;
  std::vector<std::pair<RequestId, RequestId>> closure_;  // sorted
};

// Every order event happens at or after the request's delivery.
Verdict check_order_determinism(const Trace& trace);
// Every delivered request appears in final_order.
Verdict check_non_blocking(const Trace& trace);
// Among ticks where R_t does not change, O only grows by appending already
// received requests.
Verdict check_consistency(const Trace& trace);
// Across ticks where new requests arrive, the earlier O is a prefix of the
// later one.
Verdict check_monotonic_order(const Trace& trace);
// Optional stronger liveness: a non-empty pending set at t forces O to grow
// by t + 1.
Verdict check_strong_non_blocking(const Trace& trace);
// For every must-precede pair with both ids ordered, a comes before b.
// Throws ConfigError when the predicate names an id absent from the trace.
Verdict check_policy_compliance(const Trace& trace, const PolicyPredicate& pred);

// The four validity properties, in a fixed order.
std::vector<Verdict> check_validity(const Trace& trace);

struct ImpossibilityOutcome {
  bool applicable = false;
  RequestId r1 = 0;  // must precede r2
  RequestId r2 = 0;
  Trace sigma_r2;
  Trace sigma_both;
  // Failing property on sigma_both (policy_compliance or non_blocking).
  Verdict verdict;
  // Tick at which r2 is ordered in sigma_r2, if ever.
  std::optional<Tick> r2_order_tick;
  // Server-visible events (deliver, order) agree up to r2_order_tick.
  bool prefix_agrees = false;
};

// Two-execution construction for an asynchronous network: sigma_r2 delivers
// only r2; sigma_both additionally delivers r1 one tick after r2 is ordered.
// `requests` supplies client ids and features for the predicate's ids.
// Throws ConfigError when the predicate has no comparable pair; reports
// applicable = false when every comparable pair shares a client.
ImpossibilityOutcome impossibility_harness(const PolicyKind& policy, const PolicyPredicate& pred,
                                           std::span<const Request> requests,
                                           std::size_t feature_count,
                                           std::vector<std::size_t> relevant,
                                           bool stability_gating = false);

}  // namespace fairorder
