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

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "zenosim/qcore.hpp"

/**
 * @brief The driven V system: |1> ground, |2> metastable, |3> fast decaying.
 *
 * Basis order is (|1>, |2>, |3>), index 0..2. All rates are angular
 * frequencies in a user-chosen time unit with hbar = 1; the drives are
 * resonant and real.
 */
namespace zenosim {

/// A parameter combination outside the perturbative regime.
class RegimeViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid physical parameters or schedule layout.
class InvalidParameters : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct AtomParams {
  double omega2 = 0.0;  ///< weak 1-2 Rabi frequency
  double omega3 = 0.0;  ///< strong 1-3 Rabi frequency
  double a3 = 0.0;      ///< Einstein coefficient of level 3

  void validate() const;
  double max_rate() const;
};

struct Epsilons {
  double eps_a = 0.0;  ///< omega2 / a3
  double eps_r = 0.0;  ///< omega2 / omega3
  double eps_p = 0.0;  ///< omega2 a3 / omega3^2
  double eps_max = 0.0;
};

Epsilons epsilons(const AtomParams& p);

/// Where the strong pulse sits inside each measurement interval.
enum class PulsePlacement {
  kPulseFirst,  ///< pulse, then the gap (single-atom layout)
  kPulseLast,   ///< gap, then the pulse flush with the interval end
};

struct PulseSchedule {
  double tau_p = 0.0;   ///< strong pulse duration
  double dt = 0.0;      ///< weak-only gap between pulses
  int n_pulses = 1;
  double tau_tr = 0.0;  ///< transient after each pulse, counted into the gap
  bool weak_on_during_pulse = true;
  /// Total pi-pulse length. When set, n_pulses * (dt + tau_p) must equal it.
  std::optional<double> pi_pulse_total;
  PulsePlacement placement = PulsePlacement::kPulseFirst;

  void validate() const;
  double cycle() const { return tau_p + dt; }
  double total_time() const { return n_pulses * cycle(); }
};

/// Default transient: 40 decay times of level 3.
double default_transient(const AtomParams& p);

/**
 * @brief Itano layout: weak drive on for t_pi, n pulses each ending at k*t_pi/n.
 *
 * `placement` selects end-flush (default) or start-flush pulses.
 */
PulseSchedule itano_schedule(int n, double t_pi, double tau_p,
                             PulsePlacement placement = PulsePlacement::kPulseLast);

/// Single-atom layout with the weak drive continuously on.
PulseSchedule single_atom_schedule(const AtomParams& p, double tau_p, double dt, int n_pulses,
                                   std::optional<double> tau_tr = std::nullopt);

/// A constant-drive piece of a schedule.
struct Segment {
  double duration = 0.0;
  bool strong_on = false;
  bool weak_on = false;
  /// Pulse whose fluorescence flag collects photons emitted here, or -1.
  int pulse_index = -1;
  bool is_pulse = false;
};

/**
 * @brief Flattens a schedule into constant-drive segments.
 *
 * kPulseFirst emits, per pulse: the pulse, the transient min(tau_tr, dt), and
 * the remainder of the gap. Photons in the pulse and its transient belong to
 * that pulse. kPulseLast emits the gap first and the pulse flush at the
 * interval end; gap photons there belong to the previous pulse. Zero-length
 * segments are dropped.
 */
std::vector<Segment> schedule_segments(const PulseSchedule& s);

/// Conditional (no-photon) Hamiltonian; dim 3.
CMatrix build_h_cond(const AtomParams& p, bool strong_on, bool weak_on);

/// Hermitian part of the conditional Hamiltonian.
CMatrix build_h_hermitian(const AtomParams& p, bool strong_on, bool weak_on);

/// Free resonant 1-2 propagator, acting as identity on |3>.
CMatrix free_propagator(const AtomParams& p, double t);

/**
 * @brief Lindblad generator with reset operator sqrt(a3)|1><3|.
 *
 * rho' = -i(H rho - rho H^dag) + a3 rho33 |1><1| with H the conditional
 * Hamiltonian of the active drives.
 */
class LindbladGenerator {
 public:
  LindbladGenerator(const AtomParams& p, bool strong_on, bool weak_on);

  DensityMatrix operator()(const DensityMatrix& rho) const;

  const CMatrix& h_cond() const { return h_cond_; }

 private:
  CMatrix h_cond_;
  CMatrix h_cond_adj_;
  double a3_;
};

DensityMatrix lindblad_rhs(const AtomParams& p, bool strong_on, bool weak_on,
                           const DensityMatrix& rho);

inline constexpr double kDefaultRegimeMargin = 10.0;

struct RegimeGate {
  std::string name;
  double value = 0.0;     ///< the dimensionless quantity tested
  double required = 0.0;  ///< the threshold it must reach
  bool ok() const { return value >= required; }
};

struct RegimeReport {
  Epsilons eps;
  double margin = kDefaultRegimeMargin;
  RegimeGate pulse_length;     ///< tau_p * min(a3, omega3^2 / a3) >= margin
  RegimeGate transient;        ///< tau_tr * a3 >= margin
  RegimeGate gap_decay;        ///< dt * a3 >= margin
  RegimeGate gap_rotation;     ///< (omega2 dt)^2 >= margin * eps_max

  bool pulse_ok() const { return pulse_length.ok(); }
  bool transient_ok() const { return transient.ok(); }
  bool spacing_ok() const { return gap_decay.ok() && gap_rotation.ok(); }
  bool all_ok() const { return pulse_ok() && transient_ok() && spacing_ok(); }

  /// Names of the failed gates; empty when everything passes.
  std::vector<std::string> violations() const;
};

RegimeReport compute_epsilons(const AtomParams& p, const PulseSchedule& s,
                              double margin = kDefaultRegimeMargin);

}  // namespace zenosim
