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

#pragma once

#include <stdexcept>
#include <vector>

#include "zenosim/rng.hpp"

// Ideal (instantaneous, projective) level measurements on the driven 1-2
// transition.
namespace zenosim {

class DivergentPeriod : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Level { kOne, kTwo };

/// Probability that n measurements spaced dt apart all return the initial level.
double ideal_survival(Level start, int n, double dt, double omega2);

/// sin^2(omega2 dt / 2), the same for 1 -> 2 and 2 -> 1.
double flip_probability(double dt, double omega2);

/// Population of |2> after n measurements dt apart, starting in |1>.
double cook_population(int n, double dt, double omega2);

struct PeriodStats {
  double mean = 0.0;
  double std = 0.0;
};

/// Mean and standard deviation of light (= dark) periods, counted in whole steps.
PeriodStats ideal_period_stats(double dt, double omega2);

struct PopulationSample {
  double time = 0.0;
  double p2 = 0.0;
};

struct IdealPath {
  std::vector<Level> outcomes;  ///< result at times k*dt, k = 1..n
  double dt = 0.0;
  std::vector<PopulationSample> population_trace;
};

/**
 * Samples one measurement record. Between measurements P2(t) follows the free
 * Rabi law restarted from the last projected level; the trace holds
 * `samples_per_step` points per interval plus the projected value at each
 * measurement.
 */
IdealPath sample_ideal_path(Level start, int n, double dt, double omega2, Rng& rng,
                            int samples_per_step = 8);

/// Lengths, in steps, of maximal runs of equal outcomes.
struct IdealRun {
  Level level;
  int steps;
};
std::vector<IdealRun> ideal_runs(const std::vector<Level>& outcomes);

}  // namespace zenosim
