// Copyright 2026 The Zenosim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "zenosim/ideal.hpp"

#include <cmath>

namespace zenosim {

namespace {

void require_non_negative(int n, double dt) {
  if (n < 0) throw std::invalid_argument("measurement count must be >= 0");
  if (!(dt >= 0.0)) throw std::invalid_argument("dt must be >= 0");
}

}  // namespace

double ideal_survival(Level /*start*/, int n, double dt, double omega2) {
  require_non_negative(n, dt);
  const double c = std::cos(0.5 * omega2 * dt);
  return std::pow(c * c, n);
}

double flip_probability(double dt, double omega2) {
  if (!(dt >= 0.0)) throw std::invalid_argument("dt must be >= 0");
  const double s = std::sin(0.5 * omega2 * dt);
  return s * s;
}

double cook_population(int n, double dt, double omega2) {
  if (n < 1) throw std::invalid_argument("cook_population needs n >= 1");
  require_non_negative(n, dt);
  // Two-state chain with flip probability f: P2 = (1 - (1 - 2f)^n) / 2,
  // and 1 - 2f = cos(omega2 dt).
  return 0.5 * (1.0 - std::pow(std::cos(omega2 * dt), n));
}

PeriodStats ideal_period_stats(double dt, double omega2) {
  const double half = 0.5 * omega2 * dt;
  const double s = std::sin(half);
  if (!(dt > 0.0) || std::abs(s) < 1e-9) {
    throw DivergentPeriod("period length diverges: sin(omega2 dt / 2) = 0");
  }
  const double s2 = s * s;
  return {dt / s2, dt * std::abs(std::cos(half)) / s2};
}

IdealPath sample_ideal_path(Level start, int n, double dt, double omega2, Rng& rng,
                            int samples_per_step) {
  if (n < 1) throw std::invalid_argument("sample_ideal_path needs n >= 1");
  if (!(dt >= 0.0)) throw std::invalid_argument("dt must be >= 0");
  if (samples_per_step < 1) throw std::invalid_argument("samples_per_step must be >= 1");

  IdealPath path;
  path.dt = dt;
  path.outcomes.reserve(static_cast<std::size_t>(n));
  const double flip = flip_probability(dt, omega2);

  Level level = start;
  path.population_trace.push_back({0.0, level == Level::kTwo ? 1.0 : 0.0});
  for (int k = 0; k < n; ++k) {
    const double t0 = k * dt;
    for (int j = 1; j <= samples_per_step; ++j) {
      const double tau = dt * j / samples_per_step;
      const double s = std::sin(0.5 * omega2 * tau);
      const double moved = s * s;
      const double p2 = level == Level::kTwo ? 1.0 - moved : moved;
      path.population_trace.push_back({t0 + tau, p2});
    }
    if (rng.bernoulli(flip)) level = level == Level::kOne ? Level::kTwo : Level::kOne;
    path.outcomes.push_back(level);
    path.population_trace.push_back({t0 + dt, level == Level::kTwo ? 1.0 : 0.0});
  }
  return path;
}

std::vector<IdealRun> ideal_runs(const std::vector<Level>& outcomes) {
  std::vector<IdealRun> runs;
  for (Level l : outcomes) {
    if (!runs.empty() && runs.back().level == l) {
      ++runs.back().steps;
    } else {
      runs.push_back({l, 1});
    }
  }
  return runs;
}

}  // namespace zenosim
