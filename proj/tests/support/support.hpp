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

// Independent oracles and fixtures shared by the unit and acceptance tests.
// Nothing here calls the library's closed forms.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fairorder/rng.hpp"
#include "fairorder/scenario.hpp"
#include "fairorder/trace.hpp"

namespace fairorder::testing {

// Pr[X < Y] for X ~ Laplace(mu_x, b), Y ~ Laplace(mu_y, b), by nested
// adaptive Gauss-Kronrod over the joint density.
double quadrature_order_probability(double mu_x, double mu_y, double b);

// Same probability by direct simulation with std::mt19937_64 and
// std::exponential_distribution (Laplace = difference of two exponentials).
double monte_carlo_order_probability(double mu_x, double mu_y, double b, std::uint64_t n,
                                     std::uint64_t seed);

// Sample moments, two-pass.
struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};
Moments moments(const std::vector<double>& xs);

enum class PolicyChoice { fcfs, ttl, fair };
std::string to_string(PolicyChoice p);

// A random scenario with bounded delays and stability gating on:
//   feature 0 relevant priority, feature 1 irrelevant (receives the delay),
//   feature 2 relevant deadline (issue tick plus slack).
ScenarioConfig random_bounded_scenario(RngStream& rng, PolicyChoice policy);

// Final order implied by a trace's order events (a repeated id moves to the
// end).
std::vector<RequestId> replay_final_order(const std::vector<TraceEvent>& events);

// Targeted forgeries. Each returns nullopt when the trace has no suitable
// site, and otherwise is built to trip exactly one validity checker.
std::optional<Trace> forge_early_order(const Trace& trace);      // order determinism
std::optional<Trace> forge_dropped_order(const Trace& trace);    // non-blocking
std::optional<Trace> forge_quiet_reorder(const Trace& trace);    // consistency
std::optional<Trace> forge_arrival_reorder(const Trace& trace);  // monotonic order

}  // namespace fairorder::testing
