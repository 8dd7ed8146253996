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

#include "fairorder/noise_mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fairorder/errors.hpp"

namespace fairorder {

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::laplace:
      return "laplace";
    case NoiseKind::bounded_laplace:
      return "bounded_laplace";
    case NoiseKind::uniform:
      return "uniform";
  }
  return "unknown";
}

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "laplace") return NoiseKind::laplace;
  if (name == "bounded_laplace") return NoiseKind::bounded_laplace;
  if (name == "uniform") return NoiseKind::uniform;
  throw ConfigError("unknown noise kind '" + std::string(name) + "'");
}

void NoiseSpec::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ConfigError("noise spec: epsilon must be positive");
  }
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    throw ConfigError("noise spec: sensitivity must be positive");
  }
  if (kind != NoiseKind::laplace && !(bound && *bound > 0.0)) {
    throw ConfigError("noise spec: " + std::string(to_string(kind)) +
                      " requires a positive bound");
  }
  if (delta && !(*delta >= 0.0 && *delta <= 1.0)) {
    throw ConfigError("noise spec: delta must lie in [0, 1]");
  }
}

double laplace_cdf(double x, double mu, double b) {
  const double z = (x - mu) / b;
  return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

double laplace_quantile(double u, double b) {
  return u < 0.5 ? b * std::log(2.0 * u) : -b * std::log(2.0 * (1.0 - u));
}

double sample(const NoiseSpec& spec, RngStream& rng) {
  spec.validate();
  switch (spec.kind) {
    case NoiseKind::laplace:
      return laplace_quantile(rng.uniform_open(), spec.laplace_scale());
    case NoiseKind::bounded_laplace: {
      const double b = spec.laplace_scale();
      const double tail = laplace_cdf(-*spec.bound, 0.0, b);
      const double u = tail + rng.uniform_open() * (1.0 - 2.0 * tail);
      return std::clamp(laplace_quantile(u, b), -*spec.bound, *spec.bound);
    }
    case NoiseKind::uniform:
      return rng.uniform(-*spec.bound, *spec.bound);
  }
  throw ConfigError("noise spec: unhandled kind");
}

double laplace_order_probability(double mu_x, double mu_y, double b) {
  if (!(b > 0.0)) throw InvalidParameter("laplace_order_probability: b must be positive");
  if (mu_x > mu_y) return 1.0 - laplace_order_probability(mu_y, mu_x, b);
  const double gap = mu_y - mu_x;
  return 1.0 - (2.0 * b + gap) / (4.0 * b) * std::exp(-gap / b);
}

OrderProbabilities order_probability_at_gap(double n, double epsilon) {
  if (!(n >= 0.0) || !std::isfinite(n)) {
    throw InvalidParameter("order_probability_at_gap: n must be non-negative");
  }
  if (!(epsilon > 0.0)) throw InvalidParameter("order_probability_at_gap: epsilon must be positive");
  const double x = n * epsilon;
  const double high_first = (2.0 + x) / 4.0 * std::exp(-x);
  return {1.0 - high_first, high_first};
}

double dp_ratio_bound(double n, double epsilon) {
  if (!(n >= 0.0) || !std::isfinite(n)) {
    throw InvalidParameter("dp_ratio_bound: n must be non-negative");
  }
  if (!(epsilon > 0.0)) throw InvalidParameter("dp_ratio_bound: epsilon must be positive");
  const double x = n * epsilon;
  const double ex = std::exp(x);
  // slack = e^x - ratio = 1 - e^x (2 - x) / (2 + x) = -expm1(x + log((2-x)/(2+x))).
  // The log form keeps precision for small x where the slack is ~x^3/12.
  double slack;
  if (x < 2.0) {
    slack = -std::expm1(x + std::log1p(-x / 2.0) - std::log1p(x / 2.0));
  } else {
    slack = 1.0 + ex * (x - 2.0) / (x + 2.0);
  }
  return ex - std::max(slack, 0.0);
}

double uniform_delta(double delta_net, double delta_noise) {
  if (!(delta_noise > 0.0)) throw InvalidParameter("uniform_delta: delta_noise must be positive");
  if (!(delta_net >= 0.0)) throw InvalidParameter("uniform_delta: delta_net must be non-negative");
  return std::clamp(delta_net / delta_noise, 0.0, 1.0);
}

double uniform_order_probability(double gap, double half_width) {
  if (!(half_width > 0.0)) {
    throw InvalidParameter("uniform_order_probability: half_width must be positive");
  }
  if (gap < 0.0) return 1.0 - uniform_order_probability(-gap, half_width);
  const double width = 2.0 * half_width;
  if (gap >= width) return 1.0;
  const double rest = width - gap;
  return 1.0 - rest * rest / (2.0 * width * width);
}

}  // namespace fairorder
