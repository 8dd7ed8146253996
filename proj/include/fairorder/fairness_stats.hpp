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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "fairorder/ordering_engine.hpp"
#include "fairorder/request_model.hpp"
#include "fairorder/rng.hpp"
#include "fairorder/scenario.hpp"

namespace fairorder {

enum class StatVerdict { pass, fail, inconclusive };

std::string_view to_string(StatVerdict v);

struct OrderPair {
  RequestId first = 0;
  RequestId second = 0;
};

struct FairnessReport {
  OrderPair pair;
  std::uint64_t n_trials = 0;
  std::uint64_t count_first = 0;  // trials where pair.first preceded pair.second
  double p_hat = 0.0;
  double ratio_hat = 0.0;          // p_hat / (1 - p_hat)
  double inverse_ratio_hat = 0.0;  // (1 - p_hat) / p_hat
  // Largest |score gap| / lambda over trials, from pre-noise scores.
  double k = 0.0;
  // Same gap from relevant features only. Diagnostic.
  double k_relev = 0.0;
  double epsilon = 0.0;
  double bound = 0.0;
  std::optional<double> additive_delta;
  double confidence = 0.99;
  double confidence_radius = 0.0;
  std::optional<StatVerdict> verdict;
};

// Decision knobs shared by the certifiers. The estimate is widened by
// `widening * confidence_radius`. A widened interval that straddles the bound
// is reported inconclusive only when the widened radius exceeds
// `resolution`; below that the data are precise enough to call it a pass.
struct CertifyOptions {
  double widening = 1.0;
  double resolution = 0.05;
};

inline constexpr double kDefaultConfidence = 0.99;

// sqrt(ln(2 / (1 - confidence)) / (2 n)).
double hoeffding_radius(std::uint64_t n_trials, double confidence);

// Runs the engine with seeds base_seed .. base_seed + n_trials - 1 and counts
// how often pair.first precedes pair.second. Trials run in parallel under
// OpenMP; counts are sums and the k statistics are maxima, so the report is
// independent of thread count. Throws LivenessError if either request is
// missing from some trial's final order.
FairnessReport estimate_order_probability(const Simulator& sim, OrderPair pair,
                                          std::uint64_t n_trials, RngSeed base_seed,
                                          double confidence = kDefaultConfidence);

// Single-threaded reference for the estimator above; same report.
FairnessReport estimate_order_probability_serial(const Simulator& sim, OrderPair pair,
                                                 std::uint64_t n_trials, RngSeed base_seed,
                                                 double confidence = kDefaultConfidence);

FairnessReport estimate_order_probability(const ScenarioConfig& scenario,
                                          const PolicyKind& policy, OrderPair pair,
                                          std::uint64_t n_trials, RngSeed base_seed,
                                          double confidence = kDefaultConfidence);

// Builds a report from raw counts, as if from an estimator run.
FairnessReport make_report(OrderPair pair, std::uint64_t n_trials, std::uint64_t count_first,
                           double k, double confidence = kDefaultConfidence);

// Plain OE: larger probability <= e^eps * smaller. Throws MisuseError if the
// report's k exceeds 1 (the pair is not adjacent).
FairnessReport certify_ordering_equality(FairnessReport report, double epsilon,
                                         CertifyOptions options = {});

// k-scaled OE: larger probability <= e^{k eps} * smaller.
FairnessReport certify_k_ordering_equality(FairnessReport report, double epsilon, double k,
                                           CertifyOptions options = {});

// Additive form: larger probability <= e^eps * smaller + delta.
FairnessReport certify_additive(FairnessReport report, double epsilon, double delta,
                                CertifyOptions options = {});

std::string report_csv_header();
std::string report_csv_row(const FairnessReport& report);

}  // namespace fairorder
