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
#include <optional>
#include <string_view>

#include "fairorder/request_model.hpp"
#include "fairorder/rng.hpp"

namespace fairorder {

enum class DelayKind { constant, uniform, capped_heavy_tail };

std::string_view to_string(DelayKind kind);
DelayKind parse_delay_kind(std::string_view name);

// One delay distribution, in ticks.
//   constant:          always `ticks`
//   uniform:           integer uniform on [lo, hi]
//   capped_heavy_tail: floor of Exp(mean = scale) truncated to [0, cap]
struct DelayDistribution {
  DelayKind kind = DelayKind::constant;
  Tick ticks = 0;
  Tick lo = 0;
  Tick hi = 0;
  double scale = 1.0;
  Tick cap = 0;

  static DelayDistribution constant(Tick d) { return {DelayKind::constant, d, 0, 0, 1.0, 0}; }
  static DelayDistribution uniform(Tick lo, Tick hi) {
    return {DelayKind::uniform, 0, lo, hi, 1.0, 0};
  }
  static DelayDistribution capped_heavy_tail(double scale, Tick cap) {
    return {DelayKind::capped_heavy_tail, 0, 0, 0, scale, cap};
  }

  void validate() const;
  Tick min_delay() const;
  Tick max_delay() const;
  Tick sample(RngStream& rng) const;

  friend bool operator==(const DelayDistribution&, const DelayDistribution&) = default;
};

struct DelayModel {
  DelayDistribution base;
  std::map<ClientId, DelayDistribution> overrides;

  const DelayDistribution& for_client(ClientId client) const;
  void validate() const;
  // Extremes over the base distribution and every override.
  Tick min_delay() const;
  Tick max_delay() const;

  friend bool operator==(const DelayModel&, const DelayModel&) = default;
};

struct ByzantineClientSpec {
  ClientId client_id = 0;
  Tick time_misreport = 0;
  double bribe = 0.0;

  friend bool operator==(const ByzantineClientSpec&, const ByzantineClientSpec&) = default;
};

struct DelayOutcome {
  Request request;
  Tick delivery_tick = 0;
  Tick delay = 0;
};

// Samples the client's delay; when `delay_feature` is set, the delay is added
// to that (irrelevant) feature so eta carries it.
DelayOutcome apply_delay(const Request& r, const DelayModel& model, RngStream& rng,
                         std::optional<std::size_t> delay_feature);

struct BribeOutcome {
  Request request;
  // Set when the scenario bounds bribes by lambda and this one exceeds it.
  bool violates_bound = false;
};

BribeOutcome apply_bribe(const Request& r, const ByzantineClientSpec& spec,
                         std::size_t bribe_feature, std::optional<double> lambda_bound);

// Shifts the declared issue tick. The true issue tick is kept; the shift is
// mirrored into `noise_feature` when given so the server-visible score moves
// by the same amount.
Request misreport_time(const Request& r, const ByzantineClientSpec& spec,
                       std::optional<std::size_t> noise_feature);

}  // namespace fairorder
