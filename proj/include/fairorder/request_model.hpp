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
#include <span>
#include <vector>

namespace fairorder {

using RequestId = std::uint64_t;
using ClientId = std::uint64_t;
using Tick = std::int64_t;

// A client request. `issue_tick` is ground truth; `declared_issue_tick` is
// what the client claims and what the server can see.
struct Request {
  RequestId id = 0;
  ClientId client_id = 0;
  std::vector<double> features;
  Tick issue_tick = 0;
  Tick declared_issue_tick = 0;

  friend bool operator==(const Request&, const Request&) = default;
};

// Split of feature indices into relevant and irrelevant sets. The
// constructor enforces disjointness and full coverage of [0, feature_count).
class FeaturePartition {
 public:
  FeaturePartition() = default;
  FeaturePartition(std::size_t feature_count, std::vector<std::size_t> relevant);

  std::size_t feature_count() const { return feature_count_; }
  std::span<const std::size_t> relevant() const { return relevant_; }
  std::span<const std::size_t> irrelevant() const { return irrelevant_; }
  bool is_relevant(std::size_t index) const;

 private:
  std::size_t feature_count_ = 0;
  std::vector<std::size_t> relevant_;
  std::vector<std::size_t> irrelevant_;
};

// Additive score. `total` is computed once as relev + eta so the identity
// holds bit-for-bit.
struct Score {
  double relev = 0.0;
  double eta = 0.0;
  double total = 0.0;

  friend bool operator==(const Score&, const Score&) = default;
};

Score make_score(double relev, double eta);

bool adjacent(const Request& r1, const Request& r2, const FeaturePartition& part);

Score score(const Request& r, const FeaturePartition& part);

// |s1.total - s2.total| / lambda.
double k_distance(const Score& s1, const Score& s2, double lambda);

// Assumption-1 validator: every adjacent pair has |eta - eta'| <= lambda.
// Non-adjacent pairs are not constrained.
bool check_noise_bound(std::span<const Request> requests, const FeaturePartition& part,
                       double lambda);

// Largest |eta - eta'| over all pairs, adjacent or not. Diagnostic only.
double max_eta_gap(std::span<const Request> requests, const FeaturePartition& part);

}  // namespace fairorder
