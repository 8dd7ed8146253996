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

#include "fairorder/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairorder/errors.hpp"

namespace fairorder {

std::string_view to_string(DelayKind kind) {
  switch (kind) {
    case DelayKind::constant:
      return "constant";
    case DelayKind::uniform:
      return "uniform";
    case DelayKind::capped_heavy_tail:
      return "capped_heavy_tail";
  }
  return "unknown";
}

DelayKind parse_delay_kind(std::string_view name) {
  if (name == "constant") return DelayKind::constant;
  if (name == "uniform") return DelayKind::uniform;
  if (name == "capped_heavy_tail") return DelayKind::capped_heavy_tail;
  throw ConfigError("unknown delay kind '" + std::string(name) + "'");
}

void DelayDistribution::validate() const {
  switch (kind) {
    case DelayKind::constant:
      if (ticks < 0) throw ConfigError("constant delay must be non-negative");
      return;
    case DelayKind::uniform:
      if (lo < 0 || hi < lo) throw ConfigError("uniform delay needs 0 <= lo <= hi");
      return;
    case DelayKind::capped_heavy_tail:
      if (!(scale > 0.0) || cap < 0) {
        throw ConfigError("capped_heavy_tail needs scale > 0 and cap >= 0");
      }
      return;
  }
}

Tick DelayDistribution::min_delay() const {
  switch (kind) {
    case DelayKind::constant:
      return ticks;
    case DelayKind::uniform:
      return lo;
    case DelayKind::capped_heavy_tail:
      return 0;
  }
  return 0;
}

Tick DelayDistribution::max_delay() const {
  switch (kind) {
    case DelayKind::constant:
      return ticks;
    case DelayKind::uniform:
      return hi;
    case DelayKind::capped_heavy_tail:
      return cap;
  }
  return 0;
}

Tick DelayDistribution::sample(RngStream& rng) const {
  switch (kind) {
    case DelayKind::constant:
      return ticks;
    case DelayKind::uniform:
      return lo + static_cast<Tick>(rng.below(static_cast<std::uint64_t>(hi - lo) + 1));
    case DelayKind::capped_heavy_tail: {
      // Inverse CDF of Exp(1/scale) conditioned on [0, cap + 1), then floored,
      // so the integer delay never exceeds cap.
      const double upper = static_cast<double>(cap) + 1.0;
      const double mass = -std::expm1(-upper / scale);
      const double x = -scale * std::log1p(-rng.uniform_open() * mass);
      return std::min(static_cast<Tick>(std::floor(x)), cap);
    }
  }
  return 0;
}

const DelayDistribution& DelayModel::for_client(ClientId client) const {
  const auto it = overrides.find(client);
  return it == overrides.end() ? base : it->second;
}

void DelayModel::validate() const {
  base.validate();
  for (const auto& [client, dist] : overrides) dist.validate();
}

Tick DelayModel::min_delay() const {
  Tick m = base.min_delay();
  for (const auto& [client, dist] : overrides) m = std::min(m, dist.min_delay());
  return m;
}

Tick DelayModel::max_delay() const {
  Tick m = base.max_delay();
  for (const auto& [client, dist] : overrides) m = std::max(m, dist.max_delay());
  return m;
}

namespace {

void require_feature(const Request& r, std::size_t index, const char* what) {
  if (index >= r.features.size()) {
    throw InvalidInput(std::string(what) + " feature index " + std::to_string(index) +
                       " out of range for request " + std::to_string(r.id));
  }
}

}  // namespace

DelayOutcome apply_delay(const Request& r, const DelayModel& model, RngStream& rng,
                         std::optional<std::size_t> delay_feature) {
  DelayOutcome out{r, 0, model.for_client(r.client_id).sample(rng)};
  out.delivery_tick = r.issue_tick + out.delay;
  if (delay_feature) {
    require_feature(r, *delay_feature, "delay");
    out.request.features[*delay_feature] += static_cast<double>(out.delay);
  }
  return out;
}

BribeOutcome apply_bribe(const Request& r, const ByzantineClientSpec& spec,
                         std::size_t bribe_feature, std::optional<double> lambda_bound) {
  if (spec.bribe < 0.0) throw InvalidParameter("bribe must be non-negative");
  require_feature(r, bribe_feature, "bribe");
  BribeOutcome out{r, lambda_bound && spec.bribe > *lambda_bound};
  out.request.features[bribe_feature] += spec.bribe;
  return out;
}

Request misreport_time(const Request& r, const ByzantineClientSpec& spec,
                       std::optional<std::size_t> noise_feature) {
  Request out = r;
  out.declared_issue_tick = r.declared_issue_tick + spec.time_misreport;
  if (noise_feature) {
    require_feature(r, *noise_feature, "misreport");
    out.features[*noise_feature] += static_cast<double>(spec.time_misreport);
  }
  return out;
}

}  // namespace fairorder
