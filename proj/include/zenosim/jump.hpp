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

#include <cstdint>
#include <optional>
#include <vector>

#include "zenosim/model.hpp"
#include "zenosim/parallel.hpp"
#include "zenosim/qcore.hpp"
#include "zenosim/rng.hpp"

/**
 * @brief Quantum-jump engine and first-order corrections for pulse measurements.
 *
 * Between photon emissions the atom evolves with exp(-i H_cond t); the
 * waiting time of the next emission is drawn by inverting the no-photon
 * probability, and every emission resets the atom to |1>.
 */
namespace zenosim {

/**
 * @brief Cached no-photon propagator for one constant-drive segment.
 *
 * Holds the spectral decomposition of H_cond when it is non-degenerate and
 * falls back to mat_exp otherwise.
 */
class ConditionalPropagator {
 public:
  ConditionalPropagator(const AtomParams& p, bool strong_on, bool weak_on);

  CMatrix at(double t) const;
  CVector apply(const CVector& psi, double t) const;
  /// ||U(t) psi||^2
  double survival(const CVector& psi, double t) const;

  bool spectral() const { return !eig_.is_degenerate; }
  const EigSystem& eig() const { return eig_; }
  const CMatrix& h_cond() const { return h_; }

 private:
  CMatrix h_;
  EigSystem eig_;
};

/// exp(-i H_cond t).
CMatrix cond_propagator(const AtomParams& p, bool strong_on, bool weak_on, double t);

enum class P0Mode { kExact, kPerturbative };

/**
 * No-photon probability after tau with both drives on. The perturbative mode
 * evaluates the first-order expansion and throws RegimeViolation when the
 * pulse-length condition fails.
 */
double no_photon_probability(const CVector& psi, const AtomParams& p, double tau, P0Mode mode,
                             double margin = kDefaultRegimeMargin);

struct PerturbativeEigen {
  /// Decay rate of the slow mode: amplitudes shrink as exp(-lambda2 t).
  double lambda2 = 0.0;
  CVector v2;  ///< |λ_2> normalized so that <2|λ_2> = 1
  CVector w2;  ///< |λ^2> with the same convention
};

/// First-order slow eigentriple. Throws RegimeViolation if eps_max >= 0.2.
PerturbativeEigen perturbative_eigensystem(const AtomParams& p);

struct JumpResult {
  std::optional<double> time;  ///< emission time, empty if none within the horizon
  CVector state;               ///< |1> after an emission, else the normalized no-photon state
};

/// Emission time solving ||U(t) psi||^2 = r on (0, horizon]: Newton steps guarded by bisection.
JumpResult sample_jump_time(const CVector& psi, const AtomParams& p, bool strong_on, bool weak_on,
                            double horizon, double r);

JumpResult sample_jump_time(const ConditionalPropagator& u, const CVector& psi, double horizon,
                            double r);

struct Trajectory {
  std::vector<double> photon_times;
  std::vector<bool> pulse_flags;
  CVector final_state;
  std::uint64_t seed = 0;
};

/// Runs trajectories for a fixed (params, schedule), reusing segment propagators.
class TrajectorySimulator {
 public:
  TrajectorySimulator(const AtomParams& p, const PulseSchedule& s);

  Trajectory run(const CVector& psi0, std::uint64_t seed) const;

  const PulseSchedule& schedule() const { return schedule_; }
  const std::vector<Segment>& segments() const { return segments_; }

 private:
  AtomParams params_;
  PulseSchedule schedule_;
  std::vector<Segment> segments_;
  ConditionalPropagator pulse_;       // strong on, weak per schedule
  ConditionalPropagator weak_only_;
};

Trajectory simulate_schedule(const CVector& psi0, const AtomParams& p, const PulseSchedule& s,
                             std::uint64_t seed);

struct EnsembleOptions {
  int trajectories = 1000;
  std::uint64_t master_seed = 1;
  int threads = 1;
  bool keep_trajectories = false;
};

struct EnsembleResult {
  DensityMatrix mean_rho;     ///< average of the normalized final |psi><psi|
  double mean_p2 = 0.0;
  double stderr_p2 = 0.0;
  std::vector<DensityMatrix> final_states;  ///< per trajectory, in index order
  std::vector<Trajectory> trajectories;     ///< only with keep_trajectories
};

/**
 * Runs trajectories k = 0..N-1 with seeds stream_seed(master, k) over a
 * thread pool and reduces them in index order, so the result does not depend
 * on the thread count.
 */
EnsembleResult run_ensemble(const CVector& psi0, const AtomParams& p, const PulseSchedule& s,
                            const EnsembleOptions& opt);

struct CorrectionStates {
  DensityMatrix rho0_p;      ///< 2x2, no-emission state after the transient
  /// 2x2 printed first-order form; trace one but not positive (eigenvalue -eps_p^2).
  DensityMatrix rho0_p_first_order;
  DensityMatrix rhoGt_p;     ///< 2x2, emission state after the transient
  DensityMatrix rho0_end;    ///< 3x3, no-emission state at pulse end
  DensityMatrix rhoGt_end;   ///< 3x3, emission state at pulse end
  bool exceptional_case = false;
};

/**
 * First-order post-pulse states. The no-emission states are built from the
 * first-order slow eigenvector; the emission states are the printed
 * first-order matrices. All four are Hermitized and renormalized. When
 * `initial` is given and its emission probability 1 - |α2|^2 is itself of
 * order eps, `exceptional_case` is set: the emission formula does not apply.
 */
CorrectionStates post_pulse_states(const AtomParams& p, double tau_p,
                                   const std::optional<CVector>& initial = std::nullopt,
                                   double margin = kDefaultRegimeMargin);

struct TransitionProbs {
  double p = 0.0;  ///< emission -> no emission
  double q = 0.0;  ///< no emission -> no emission
};

/// First-order pulse-to-pulse transition probabilities. Throws RegimeViolation
/// if the pulse-length or spacing gates fail.
TransitionProbs transition_probs_pq(const AtomParams& p, double dt, double tau_p,
                                    double margin = kDefaultRegimeMargin);

/// Same formulas without regime checks.
TransitionProbs transition_probs_pq_unchecked(const AtomParams& p, double dt, double tau_p);

enum class PeriodMode { kAnalytic, kLimit };

struct MeanPeriods {
  double mean_light = 0.0;
  double mean_dark = 0.0;
};

MeanPeriods period_statistics(const AtomParams& p, double dt, double tau_p, PeriodMode mode,
                              double margin = kDefaultRegimeMargin);

enum class PeriodKind { kLight, kDark };

struct PeriodRecord {
  PeriodKind kind = PeriodKind::kLight;
  int pulse_count = 0;
  double duration = 0.0;
  bool truncated = false;  ///< touches the first or last pulse
};

/// Maximal runs of equal pulse flags. Truncated runs are included only when
/// `include_truncated` is set.
std::vector<PeriodRecord> extract_periods(const Trajectory& t, const PulseSchedule& s,
                                          bool include_truncated = false);

}  // namespace zenosim
