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

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fairorder/policy_checker.hpp"
#include "fairorder/request_model.hpp"
#include "fairorder/rng.hpp"
#include "fairorder/trace.hpp"

namespace fairorder {

struct ServerEvent {
  Tick tick = 0;
  RequestId id = 0;

  friend bool operator==(const ServerEvent&, const ServerEvent&) = default;
};

// One server's history: receive and order events, each sorted by tick.
struct ServerHistory {
  std::vector<ServerEvent> received;
  std::vector<ServerEvent> ordered;

  friend bool operator==(const ServerHistory&, const ServerHistory&) = default;
};

struct QuorumView {
  std::size_t n = 1;
  std::size_t f = 0;
  Tick horizon = 0;
  std::vector<ServerHistory> servers;  // size n
  std::set<std::size_t> correct;

  // n >= 1, |servers| == n, |correct| >= n - f, indices in range and each
  // history sorted by tick.
  void validate() const;

  // R_{i,t}, sorted.
  std::vector<RequestId> received_at(std::size_t server, Tick t) const;
  // O_{i,t}, in order.
  std::vector<RequestId> ordered_at(std::size_t server, Tick t) const;

  friend bool operator==(const QuorumView&, const QuorumView&) = default;
};

// Ids received by at least `threshold` servers by t (0 means f + 1). Sorted.
// Throws RangeError for t outside [0, horizon].
std::vector<RequestId> global_received(const QuorumView& view, Tick t, std::size_t threshold = 0);

// Ids ordered by at least `threshold` servers by t (0 means n - f). Sorted.
std::vector<RequestId> global_ordered(const QuorumView& view, Tick t, std::size_t threshold = 0);

// Passes iff for every pair of correct servers and every tick one ordered
// sequence is a prefix of the other. Reported under the consistency property.
Verdict check_prefix_consistency(const QuorumView& view);

// Builds n views from one single-server trace: server i sees every event
// lags[i] ticks late (missing lags count as 0). Byzantine servers get their
// order history shuffled from a stream derived from `seed`. The horizon is
// extended to cover the largest lag.
QuorumView replicate_views(const Trace& trace, std::size_t n, std::size_t f,
                           std::span<const Tick> lags, const std::set<std::size_t>& byzantine,
                           RngSeed seed);

// Line format:
//   n:<n>
//   f:<f>
//   horizon:<tick>
//   correct:<i>;<j>;...
//   <server>,<tick>,<receive|order>,<id>
std::string serialize_view(const QuorumView& view);
QuorumView parse_view(std::string_view text);

}  // namespace fairorder
