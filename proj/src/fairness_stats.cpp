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

#include "fairorder/fairness_stats.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>

#include "fairorder/errors.hpp"

namespace fairorder {

std::string_view to_string(StatVerdict v) {
  switch (v) {
    case StatVerdict::pass:
      return "pass";
    case StatVerdict::fail:
      return "fail";
    case StatVerdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

double hoeffding_radius(std::uint64_t n_trials, double confidence) {
  if (n_trials == 0) throw InvalidParameter("hoeffding_radius: n_trials must be positive");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidParameter("hoeffding_radius: confidence must lie in (0, 1)");
  }
  return std::sqrt(std::log(2.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(n_trials)));
}

FairnessReport make_report(OrderPair pair, std::uint64_t n_trials, std::uint64_t count_first,
                           double k, double confidence) {
  if (count_first > n_trials) throw InvalidParameter("count_first exceeds n_trials");
  FairnessReport r;
  r.pair = pair;
  r.n_trials = n_trials;
  r.count_first = count_first;
  r.p_hat = static_cast<double>(count_first) / static_cast<double>(n_trials);
  const double inf = std::numeric_limits<double>::infinity();
  r.ratio_hat = r.p_hat < 1.0 ? r.p_hat / (1.0 - r.p_hat) : inf;
  r.inverse_ratio_hat = r.p_hat > 0.0 ? (1.0 - r.p_hat) / r.p_hat : inf;
  r.k = k;
  r.confidence = confidence;
  r.confidence_radius = hoeffding_radius(n_trials, confidence);
  return r;
}

namespace {

struct TrialTally {
  std::uint64_t count_first = 0;
  double k = 0.0;
  double k_relev = 0.0;
  std::uint64_t first_missing = std::numeric_limits<std::uint64_t>::max();
};

// One trial; returns false if either id is absent from the final order.
bool run_trial(const Simulator& sim, OrderPair pair, RngSeed seed, const FeaturePartition& part,
               bool& first_won, double& k, double& k_relev) {
  std::vector<Request> delivered;
  const Trace trace = sim.run(seed, &delivered);
  const auto& order = trace.final_order;
  const auto a = std::find(order.begin(), order.end(), pair.first);
  const auto b = std::find(order.begin(), order.end(), pair.second);
  if (a == order.end() || b == order.end()) return false;
  first_won = a < b;
  const Request* ra = nullptr;
  const Request* rb = nullptr;
  for (const auto& r : delivered) {
    if (r.id == pair.first) ra = &r;
    if (r.id == pair.second) rb = &r;
  }
  const double lambda = sim.scenario().lambda;
  const Score sa = score(*ra, part);
  const Score sb = score(*rb, part);
  k = k_distance(sa, sb, lambda);
  k_relev = std::fabs(sa.relev - sb.relev) / lambda;
  return true;
}

double policy_epsilon(const PolicyKind& policy) {
  if (const auto* fair = std::get_if<FairPolicy>(&policy)) return fair->noise.epsilon;
  return 0.0;
}

FairnessReport finish(const Simulator& sim, OrderPair pair, std::uint64_t n_trials,
                      RngSeed base_seed, double confidence, const TrialTally& tally) {
  if (tally.first_missing != std::numeric_limits<std::uint64_t>::max()) {
    throw LivenessError("trial with seed " + std::to_string(base_seed.value + tally.first_missing) +
                        " never ordered request " + std::to_string(pair.first) + " or " +
                        std::to_string(pair.second));
  }
  FairnessReport r = make_report(pair, n_trials, tally.count_first, tally.k, confidence);
  r.k_relev = tally.k_relev;
  r.epsilon = policy_epsilon(sim.policy());
  return r;
}

void check_estimator_args(std::uint64_t n_trials, double confidence) {
  if (n_trials == 0) throw InvalidParameter("estimator: n_trials must be positive");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InvalidParameter("estimator: confidence must lie in (0, 1)");
  }
}

}  // namespace

FairnessReport estimate_order_probability_serial(const Simulator& sim, OrderPair pair,
                                                 std::uint64_t n_trials, RngSeed base_seed,
                                                 double confidence) {
  check_estimator_args(n_trials, confidence);
  const FeaturePartition part = sim.scenario().partition();
  TrialTally tally;
  for (std::uint64_t i = 0; i < n_trials; ++i) {
    bool won = false;
    double k = 0.0;
    double k_relev = 0.0;
    if (!run_trial(sim, pair, RngSeed{base_seed.value + i}, part, won, k, k_relev)) {
      tally.first_missing = std::min(tally.first_missing, i);
      continue;
    }
    tally.count_first += won ? 1 : 0;
    tally.k = std::max(tally.k, k);
    tally.k_relev = std::max(tally.k_relev, k_relev);
  }
  return finish(sim, pair, n_trials, base_seed, confidence, tally);
}

FairnessReport estimate_order_probability(const Simulator& sim, OrderPair pair,
                                          std::uint64_t n_trials, RngSeed base_seed,
                                          double confidence) {
  check_estimator_args(n_trials, confidence);
  const FeaturePartition part = sim.scenario().partition();
  std::uint64_t count = 0;
  double k_max = 0.0;
  double k_relev_max = 0.0;
  std::uint64_t first_missing = std::numeric_limits<std::uint64_t>::max();
  bool failed = false;
  std::string failure;
  const auto n = static_cast<std::int64_t>(n_trials);

#pragma omp parallel for schedule(static) reduction(+ : count) reduction(max : k_max, k_relev_max) \
    reduction(min : first_missing)
  for (std::int64_t i = 0; i < n; ++i) {
    bool won = false;
    double k = 0.0;
    double k_relev = 0.0;
    try {
      const auto idx = static_cast<std::uint64_t>(i);
      if (!run_trial(sim, pair, RngSeed{base_seed.value + idx}, part, won, k, k_relev)) {
        first_missing = std::min(first_missing, idx);
        continue;
      }
    } catch (const std::exception& e) {
#pragma omp critical(fairorder_estimator_error)
      {
        if (!failed) {
          failed = true;
          failure = e.what();
        }
      }
      continue;
    }
    count += won ? 1 : 0;
    k_max = std::max(k_max, k);
    k_relev_max = std::max(k_relev_max, k_relev);
  }

  if (failed) throw Error("estimator trial failed: " + failure);
  return finish(sim, pair, n_trials, base_seed, confidence,
                TrialTally{count, k_max, k_relev_max, first_missing});
}

FairnessReport estimate_order_probability(const ScenarioConfig& scenario,
                                          const PolicyKind& policy, OrderPair pair,
                                          std::uint64_t n_trials, RngSeed base_seed,
                                          double confidence) {
  return estimate_order_probability(Simulator(scenario, policy), pair, n_trials, base_seed,
                                    confidence);
}

namespace {

// Tests `larger <= multiplier * (1 - larger) + delta` on the widened estimate
// of the larger of the two ordering probabilities.
StatVerdict decide(const FairnessReport& r, double multiplier, double delta,
                   const CertifyOptions& options) {
  const auto holds = [&](double p) { return p <= multiplier * (1.0 - p) + delta; };
  const double larger = std::max(r.p_hat, 1.0 - r.p_hat);
  const double w = options.widening * r.confidence_radius;
  const double lo = std::clamp(larger - w, 0.0, 1.0);
  const double hi = std::clamp(larger + w, 0.0, 1.0);
  if (!holds(lo)) return StatVerdict::fail;
  if (holds(hi)) return StatVerdict::pass;
  return w <= options.resolution ? StatVerdict::pass : StatVerdict::inconclusive;
}

void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InvalidParameter("certifier: epsilon must be non-negative and finite");
  }
}

}  // namespace

FairnessReport certify_ordering_equality(FairnessReport report, double epsilon,
                                         CertifyOptions options) {
  check_epsilon(epsilon);
  if (report.k > 1.0) {
    throw MisuseError("pair has k = " + std::to_string(report.k) +
                      " > 1; use certify_k_ordering_equality");
  }
  report.epsilon = epsilon;
  report.bound = std::exp(epsilon);
  report.additive_delta.reset();
  report.verdict = decide(report, report.bound, 0.0, options);
  return report;
}

FairnessReport certify_k_ordering_equality(FairnessReport report, double epsilon, double k,
                                           CertifyOptions options) {
  check_epsilon(epsilon);
  if (!(k >= 0.0)) throw InvalidParameter("certifier: k must be non-negative");
  report.epsilon = epsilon;
  report.k = k;
  report.bound = std::exp(k * epsilon);
  report.additive_delta.reset();
  report.verdict = decide(report, report.bound, 0.0, options);
  return report;
}

FairnessReport certify_additive(FairnessReport report, double epsilon, double delta,
                                CertifyOptions options) {
  check_epsilon(epsilon);
  if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidParameter("certifier: delta must lie in [0, 1]");
  report.epsilon = epsilon;
  report.bound = std::exp(epsilon);
  report.additive_delta = delta;
  report.verdict = decide(report, report.bound, delta, options);
  return report;
}

std::string report_csv_header() {
  return "pair_a,pair_b,n_trials,count_first,p_hat,k,epsilon,bound,radius,verdict";
}

std::string report_csv_row(const FairnessReport& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%" PRIu64 ",%.10g,%.10g,%.10g,%.10g,%.10g,%s",
                r.pair.first, r.pair.second, r.n_trials, r.count_first, r.p_hat, r.k, r.epsilon,
                r.bound, r.confidence_radius,
                r.verdict ? std::string(to_string(*r.verdict)).c_str() : "unset");
  return buf;
}

}  // namespace fairorder
