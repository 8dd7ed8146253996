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

#include "fairorder/request_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairorder/errors.hpp"

namespace fairorder {

FeaturePartition::FeaturePartition(std::size_t feature_count,
                                   std::vector<std::size_t> relevant)
    : feature_count_(feature_count), relevant_(std::move(relevant)) {
  std::sort(relevant_.begin(), relevant_.end());
  if (std::adjacent_find(relevant_.begin(), relevant_.end()) != relevant_.end()) {
    throw ConfigError("feature partition: duplicate relevant index");
  }
  for (std::size_t idx : relevant_) {
    if (idx >= feature_count_) {
      throw ConfigError("feature partition: relevant index " + std::to_string(idx) +
                        " out of range for " + std::to_string(feature_count_) +
                        " features");
    }
  }
  for (std::size_t i = 0; i < feature_count_; ++i) {
    if (!std::binary_search(relevant_.begin(), relevant_.end(), i)) {
      irrelevant_.push_back(i);
    }
  }
}

bool FeaturePartition::is_relevant(std::size_t index) const {
  return std::binary_search(relevant_.begin(), relevant_.end(), index);
}

Score make_score(double relev, double eta) { return Score{relev, eta, relev + eta}; }

namespace {

void require_dims(const Request& r, const FeaturePartition& part) {
  if (r.features.size() != part.feature_count()) {
    throw InvalidInput("request " + std::to_string(r.id) + " has " +
                       std::to_string(r.features.size()) + " features, partition expects " +
                       std::to_string(part.feature_count()));
  }
}

}  // namespace

bool adjacent(const Request& r1, const Request& r2, const FeaturePartition& part) {
  require_dims(r1, part);
  require_dims(r2, part);
  return std::all_of(part.relevant().begin(), part.relevant().end(),
                     [&](std::size_t i) { return r1.features[i] == r2.features[i]; });
}

Score score(const Request& r, const FeaturePartition& part) {
  require_dims(r, part);
  double relev = 0.0;
  for (std::size_t i : part.relevant()) relev += r.features[i];
  double eta = 0.0;
  for (std::size_t i : part.irrelevant()) eta += r.features[i];
  return make_score(relev, eta);
}

double k_distance(const Score& s1, const Score& s2, double lambda) {
  if (!(lambda > 0.0)) throw InvalidParameter("k_distance: lambda must be positive");
  return std::fabs(s1.total - s2.total) / lambda;
}

bool check_noise_bound(std::span<const Request> requests, const FeaturePartition& part,
                       double lambda) {
  if (!(lambda > 0.0)) throw InvalidParameter("check_noise_bound: lambda must be positive");
  std::vector<Score> scores;
  scores.reserve(requests.size());
  for (const auto& r : requests) scores.push_back(score(r, part));
  for (std::size_t i = 0; i < requests.size(); ++i) {
    for (std::size_t j = i + 1; j < requests.size(); ++j) {
      if (!adjacent(requests[i], requests[j], part)) continue;
      if (std::fabs(scores[i].eta - scores[j].eta) > lambda) return false;
    }
  }
  return true;
}

double max_eta_gap(std::span<const Request> requests, const FeaturePartition& part) {
  if (requests.empty()) return 0.0;
  double lo = score(requests.front(), part).eta;
  double hi = lo;
  for (const auto& r : requests) {
    const double eta = score(r, part).eta;
    lo = std::min(lo, eta);
    hi = std::max(hi, eta);
  }
  return hi - lo;
}

}  // namespace fairorder
