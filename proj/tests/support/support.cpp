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

#include "support.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

namespace fairorder::testing {

namespace {

using boost::math::quadrature::gauss_kronrod;

constexpr double kTol = 1e-12;
constexpr unsigned kDepth = 12;
// Laplace mass beyond 45 scales is below 1e-19; the tails are truncated there.
constexpr double kSpan = 45.0;

double laplace_density(double x, double mu, double b) {
  return std::exp(-std::fabs(x - mu) / b) / (2.0 * b);
}

template <typename F>
double integrate(F f, double a, double b) {
  if (a == b) return 0.0;
  return gauss_kronrod<double, 61>::integrate(f, a, b, kDepth, kTol);
}

}  // namespace

double quadrature_order_probability(double mu_x, double mu_y, double b) {
  // Inner: Pr[Y > x], integrated over y with a split at the kink mu_y.
  const double y_end = mu_y + kSpan * b;
  const auto tail = [&](double x) {
    const auto fy = [&](double y) { return laplace_density(y, mu_y, b); };
    if (x >= y_end) return 0.0;
    if (x < mu_y) return integrate(fy, x, mu_y) + integrate(fy, mu_y, y_end);
    return integrate(fy, x, y_end);
  };
  const auto outer = [&](double x) { return laplace_density(x, mu_x, b) * tail(x); };
  const double lo = std::min(mu_x, mu_y);
  const double hi = std::max(mu_x, mu_y);
  return integrate(outer, lo - kSpan * b, lo) + integrate(outer, lo, hi) +
         integrate(outer, hi, hi + kSpan * b);
}

double monte_carlo_order_probability(double mu_x, double mu_y, double b, std::uint64_t n,
                                     std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::exponential_distribution<double> expo(1.0 / b);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = mu_x + expo(gen) - expo(gen);
    const double y = mu_y + expo(gen) - expo(gen);
    hits += x < y ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(n);
}

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.variance = xs.size() > 1 ? ss / static_cast<double>(xs.size() - 1) : 0.0;
  return m;
}

std::string to_string(PolicyChoice p) {
  switch (p) {
    case PolicyChoice::fcfs:
      return "fcfs";
    case PolicyChoice::ttl:
      return "ttl";
    case PolicyChoice::fair:
      return "fair";
  }
  return "?";
}

ScenarioConfig random_bounded_scenario(RngStream& rng, PolicyChoice policy) {
  ScenarioConfig s;
  s.feature_count = 3;
  s.relevant = {0, 2};
  s.delay_feature = 1;
  const auto lambda = static_cast<Tick>(1 + rng.below(3));
  s.lambda = static_cast<double>(lambda);
  s.delay.base = DelayDistribution::uniform(0, lambda);
  s.assumption1 = true;

  const auto clients = 2 + rng.below(4);
  RequestId next_id = 1;
  for (ClientId c = 0; c < clients; ++c) {
    const auto count = 1 + rng.below(3);
    for (std::uint64_t k = 0; k < count; ++k) {
      Request r;
      r.id = next_id++;
      r.client_id = c;
      r.issue_tick = static_cast<Tick>(rng.below(12));
      r.declared_issue_tick = r.issue_tick;
      r.features = {static_cast<double>(rng.below(4)), 0.0,
                    static_cast<double>(r.issue_tick + static_cast<Tick>(rng.below(6)))};
      s.requests.push_back(r);
    }
  }

  switch (policy) {
    case PolicyChoice::fcfs:
      s.policy = FcfsPolicy{};
      break;
    case PolicyChoice::ttl:
      s.policy = TtlPolicy{2};
      break;
    case PolicyChoice::fair: {
      const double eps[] = {0.5, 1.0, 2.0};
      s.noise.epsilon = eps[rng.below(3)];
      s.noise.sensitivity = s.lambda;
      s.policy = make_fair_policy(s);
      break;
    }
  }
  s.validate();
  return s;
}

std::vector<RequestId> replay_final_order(const std::vector<TraceEvent>& events) {
  std::vector<RequestId> order;
  for (const auto& e : events) {
    if (e.kind != TraceEventKind::order) continue;
    std::erase(order, e.id);
    order.push_back(e.id);
  }
  return order;
}

namespace {

std::vector<RequestId> ordered_through(const Trace& trace, Tick t) {
  std::vector<TraceEvent> prefix;
  for (const auto& e : trace.events) {
    if (e.tick <= t) prefix.push_back(e);
  }
  return replay_final_order(prefix);
}

bool delivery_at(const Trace& trace, Tick t) {
  return std::any_of(trace.events.begin(), trace.events.end(), [&](const TraceEvent& e) {
    return e.kind == TraceEventKind::deliver && e.tick == t;
  });
}

std::optional<Tick> delivered_tick(const Trace& trace, RequestId id) {
  for (const auto& e : trace.events) {
    if (e.kind == TraceEventKind::deliver && e.id == id) return e.tick;
  }
  return std::nullopt;
}

// Inserts `e` after every event whose tick is <= e.tick.
Trace with_event(Trace trace, TraceEvent e) {
  auto pos = std::find_if(trace.events.begin(), trace.events.end(),
                          [&](const TraceEvent& x) { return x.tick > e.tick; });
  trace.events.insert(pos, e);
  trace.final_order = replay_final_order(trace.events);
  return trace;
}

// Moves the head of O_{t-1} to the end at tick t, for the first t that
// satisfies `want_delivery` and leaves a visible reorder.
std::optional<Trace> reorder_at(const Trace& trace, bool want_delivery) {
  for (Tick t = 1; t <= trace.horizon; ++t) {
    if (delivery_at(trace, t) != want_delivery) continue;
    const auto before = ordered_through(trace, t - 1);
    if (before.size() < 2) continue;
    return with_event(trace, {t, TraceEventKind::order, before.front()});
  }
  return std::nullopt;
}

}  // namespace

std::optional<Trace> forge_early_order(const Trace& trace) {
  Tick prev = 0;
  for (std::size_t k = 0; k < trace.events.size(); ++k) {
    const auto& e = trace.events[k];
    if (e.kind != TraceEventKind::order) continue;
    const auto d = delivered_tick(trace, e.id);
    if (d) {
      for (Tick t0 = prev; t0 < *d; ++t0) {
        if (!delivery_at(trace, t0)) continue;
        Trace forged = trace;
        forged.events.erase(forged.events.begin() + static_cast<std::ptrdiff_t>(k));
        return with_event(std::move(forged), {t0, TraceEventKind::order, e.id});
      }
    }
    prev = e.tick;
  }
  return std::nullopt;
}

std::optional<Trace> forge_dropped_order(const Trace& trace) {
  for (std::size_t k = trace.events.size(); k-- > 0;) {
    if (trace.events[k].kind != TraceEventKind::order) continue;
    Trace forged = trace;
    forged.events.erase(forged.events.begin() + static_cast<std::ptrdiff_t>(k));
    forged.final_order = replay_final_order(forged.events);
    return forged;
  }
  return std::nullopt;
}

std::optional<Trace> forge_quiet_reorder(const Trace& trace) { return reorder_at(trace, false); }

std::optional<Trace> forge_arrival_reorder(const Trace& trace) { return reorder_at(trace, true); }

}  // namespace fairorder::testing
