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

#include "zenosim/model.hpp"

namespace zenosim {

class StepTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class PositivityLoss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest admissible integration step: 0.1 / max(omega2, omega3, a3).
double max_master_step(const AtomParams& p);

/// Default step: 0.02 / max(omega2, omega3, a3).
double default_master_step(const AtomParams& p);

struct MasterSample {
  double time = 0.0;
  DensityMatrix rho;
};

struct MasterResult {
  DensityMatrix rho;
  std::vector<MasterSample> samples;  ///< at t = 0 and every segment boundary
  double max_trace_drift = 0.0;       ///< max |tr rho - tr rho0| over the run
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;        ///< smallest eigenvalue seen at segment ends
};

/**
 * Classic fourth-order Runge-Kutta over the schedule's constant-drive
 * segments. Each segment of length L takes ceil(L / step) equal steps, so
 * segment boundaries are hit exactly. Throws StepTooLarge when step exceeds
 * max_master_step and PositivityLoss when an eigenvalue drops below -1e-6.
 */
MasterResult integrate_master(const DensityMatrix& rho0, const AtomParams& p, const PulseSchedule& s,
                              double step, bool record_samples = false);

/// Integrates for a fixed duration with fixed drives.
MasterResult integrate_master_constant(const DensityMatrix& rho0, const AtomParams& p, bool strong_on,
                                       bool weak_on, double duration, double step);

/// Final rho22 after the Itano schedule, starting from |1><1|.
double itano_bloch_population(int n, const AtomParams& p, double t_pi, double tau_p, double step,
                              PulsePlacement placement = PulsePlacement::kPulseLast);

}  // namespace zenosim
