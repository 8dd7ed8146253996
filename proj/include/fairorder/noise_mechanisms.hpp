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

#include <optional>
#include <string>
#include <string_view>

#include "fairorder/rng.hpp"

namespace fairorder {

enum class NoiseKind { laplace, bounded_laplace, uniform };

std::string_view to_string(NoiseKind kind);
NoiseKind parse_noise_kind(std::string_view name);

inline constexpr double kDefaultEpsilon = 2.0;

// Configured additive-noise mechanism. For laplace kinds the scale is
// sensitivity / epsilon; `bound` is the truncation half-width. For uniform
// noise `bound` is the half-width of the support.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::laplace;
  double epsilon = kDefaultEpsilon;
  double sensitivity = 1.0;
  std::optional<double> bound;
  std::optional<double> delta;

  // Throws ConfigError when an invariant is broken.
  void validate() const;
  double laplace_scale() const { return sensitivity / epsilon; }

  friend bool operator==(const NoiseSpec&, const NoiseSpec&) = default;
};

// One draw from the mechanism. Laplace uses a single-uniform inverse CDF.
// bounded_laplace draws from Laplace(0, b) conditioned on |y| <= bound, which
// is the distribution rejection sampling would produce, also from one uniform.
double sample(const NoiseSpec& spec, RngStream& rng);

double laplace_cdf(double x, double mu, double b);
double laplace_quantile(double u, double b);

// Pr[X < Y] for independent X ~ Laplace(mu_x, b), Y ~ Laplace(mu_y, b).
double laplace_order_probability(double mu_x, double mu_y, double b);

struct OrderProbabilities {
  double p_low_first = 0.5;
  double p_high_first = 0.5;
};

// Ordering probabilities for a pair whose pre-noise scores differ by
// n * lambda under Laplace(lambda / epsilon) noise. Independent of lambda.
OrderProbabilities order_probability_at_gap(double n, double epsilon);

// p_low_first / p_high_first = 4 e^{n eps} / (2 + n eps) - 1. Evaluated as
// e^{n eps} minus a non-negative slack so the result never exceeds
// exp(n * epsilon) in floating point either.
double dp_ratio_bound(double n, double epsilon);

// delta = delta_net / delta_noise, clamped to [0, 1].
double uniform_delta(double delta_net, double delta_noise);

// Pr[X < Y] for X ~ U(-w, w), Y ~ gap + U(-w, w).
double uniform_order_probability(double gap, double half_width);

}  // namespace fairorder
