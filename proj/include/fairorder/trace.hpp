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

#include <string>
#include <string_view>
#include <vector>

#include "fairorder/request_model.hpp"
#include "fairorder/rng.hpp"

namespace fairorder {

enum class TraceEventKind { issue, deliver, order };

std::string_view to_string(TraceEventKind kind);

struct TraceEvent {
  Tick tick = 0;
  TraceEventKind kind = TraceEventKind::issue;
  RequestId id = 0;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

// Timed record of one run. An `order` event appends its id to the output;
// if the id is already present it is moved to the end, which is how forged
// reorderings are expressed. The engine never emits such repeats.
struct Trace {
  std::vector<TraceEvent> events;
  std::vector<RequestId> final_order;
  RngSeed seed{0};
  Tick horizon = 0;

  friend bool operator==(const Trace&, const Trace&) = default;
};

// State of the server at the end of tick t.
struct Snapshot {
  Tick tick = 0;
  std::vector<RequestId> received;  // R_t, sorted
  std::vector<RequestId> pending;   // P_t = R_t minus O_t, sorted
  std::vector<RequestId> ordered;   // O_t, in output order
};

// Snapshots for ticks 0..horizon.
std::vector<Snapshot> snapshots(const Trace& trace);

bool is_prefix(std::span<const RequestId> prefix, std::span<const RequestId> seq);

// Line format:
//   seed:<u64>
//   horizon:<tick>
//   <tick>,<issue|deliver|order>,<request id>   (one per event)
//   order:<id>,<id>,...
std::string serialize_trace(const Trace& trace);
Trace parse_trace(std::string_view text);

}  // namespace fairorder
