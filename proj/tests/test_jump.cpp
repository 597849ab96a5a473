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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "zenosim/bloch.hpp"
#include "zenosim/jump.hpp"

using namespace zenosim;
using zenosim::testing::kPi;

namespace {

const AtomParams kPreset{1.0, 50.0, 20.0};

}  // namespace

TEST_CASE("conditional propagator: trivial limits") {
  const ConditionalPropagator both(kPreset, true, true);
  CHECK(max_abs_diff(both.at(0.0), CMatrix::identity(3)) < 1e-14);

  const ConditionalPropagator strong(kPreset, true, false);
  for (double t : {0.1, 1.0, 7.0}) {
    CHECK((strong.apply(CVector::basis(3, 1), t) - CVector::basis(3, 1)).norm() < 1e-12);
  }
  const ConditionalPropagator off(kPreset, false, false);
  for (double t : {0.01, 0.1, 0.5}) {
    CHECK(off.survival(CVector::basis(3, 2), t) == doctest::Approx(std::exp(-20.0 * t)).epsilon(1e-12));
  }
  // Spectral path against scaling and squaring.
  CHECK(max_abs_diff(both.at(1.3), mat_exp(build_h_cond(kPreset, true, true), 1.3)) < 1e-11);
}

TEST_CASE("no-photon probability: dark and bright limits") {
  const ConditionalPropagator strong(kPreset, true, false);
  CHECK(strong.survival(CVector::basis(3, 1), 2.0) == doctest::Approx(1.0));
  CHECK(strong.survival(CVector::basis(3, 0), 2.0) <= 1e-3);
}

TEST_CASE("no-photon probability: first-order expansion within 10 eps^2") {
  const double eps_max = epsilons(kPreset).eps_max;
  const CVector psi = CVector{1.0, 1.0, 0.0}.normalized();
  const double exact = no_photon_probability(psi, kPreset, 2.0, P0Mode::kExact);
  const double pert = no_photon_probability(psi, kPreset, 2.0, P0Mode::kPerturbative);
  CHECK(std::abs(exact - pert) <= 10.0 * eps_max * eps_max);
  CHECK_THROWS_AS(no_photon_probability(psi, kPreset, 0.1, P0Mode::kPerturbative), RegimeViolation);
}

TEST_CASE("perturbative eigensystem against the numeric spectrum") {
  const PerturbativeEigen pe = perturbative_eigensystem(kPreset);
  CHECK(pe.lambda2 == doctest::Approx(0.004));
  const EigSystem es = eig_with_reciprocal(build_h_cond(kPreset, true, true));
  const double eps_max = epsilons(kPreset).eps_max;
  CHECK(std::abs(pe.lambda2 + es.eigenvalues[0].imag()) <= 10.0 * eps_max * eps_max * kPreset.omega2);
  // Slow right vector, scaled so that its |2> component is 1.
  const CVector v = (1.0 / es.right_vectors[0][1]) * es.right_vectors[0];
  CHECK((v - pe.v2).norm() <= 10.0 * eps_max * eps_max);

  const PerturbativeEigen tiny = perturbative_eigensystem(AtomParams{1e-9, 50.0, 20.0});
  CHECK(tiny.lambda2 < 1e-11);
  CHECK((tiny.v2 - CVector::basis(3, 1)).norm() < 1e-9);
  CHECK_THROWS_AS(perturbative_eigensystem(AtomParams{1.0, 2.0, 2.0}), RegimeViolation);
}

TEST_CASE("sample_jump_time: no emission from the dark state, exponential from |3>") {
  const ConditionalPropagator strong(kPreset, true, false);
  const JumpResult dark = sample_jump_time(strong, CVector::basis(3, 1), 100.0, 0.5);
  CHECK_FALSE(dark.time.has_value());
  CHECK((dark.state - CVector::basis(3, 1)).norm() < 1e-12);

  const ConditionalPropagator off(kPreset, false, false);
  for (double r : {0.9, 0.5, 0.01}) {
    const JumpResult j = sample_jump_time(off, CVector::basis(3, 2), 10.0, r);
    REQUIRE(j.time.has_value());
    CHECK(*j.time == doctest::Approx(-std::log(r) / 20.0).epsilon(1e-9));
    CHECK((j.state - CVector::basis(3, 0)).norm() == 0.0);
  }
  CHECK_THROWS_AS(sample_jump_time(off, CVector::basis(3, 2), 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_jump_time(off, CVector::basis(3, 2), 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("sample_jump_time: empirical survival inside the Kolmogorov-Smirnov band") {
  const ConditionalPropagator u(kPreset, true, true);
  const CVector psi = CVector::basis(3, 0);
  const double horizon = 1.0;
  const int n = 100000;
  Rng rng(17);
  std::vector<double> times;
  times.reserve(n);
  for (int k = 0; k < n; ++k) {
    const JumpResult j = sample_jump_time(u, psi, horizon, rng.uniform_open());
    times.push_back(j.time ? *j.time : horizon * 2);
  }
  std::sort(times.begin(), times.end());
  double dmax = 0.0;
  for (int k = 0; k < n && times[k] <= horizon; ++k) {
    const double cdf = 1.0 - u.survival(psi, times[k]);
    dmax = std::max({dmax, std::abs(cdf - double(k) / n), std::abs(cdf - double(k + 1) / n)});
  }
  // 1.95 / sqrt(n) is the 0.1% critical value.
  CHECK(dmax < 1.95 / std::sqrt(double(n)));
}

TEST_CASE("trajectories: dark state without weak drive never emits") {
  const AtomParams p{0.0, 50.0, 20.0};
  const PulseSchedule s = single_atom_schedule(p, 2.0, 1.0, 20);
  const Trajectory t = simulate_schedule(CVector::basis(3, 1), p, s, 4);
  CHECK(t.photon_times.empty());
  CHECK((t.final_state - CVector::basis(3, 1)).norm() < 1e-12);
  CHECK(std::none_of(t.pulse_flags.begin(), t.pulse_flags.end(), [](bool b) { return b; }));
}

TEST_CASE("trajectories: photon times are ordered and flags follow the segment ownership") {
  const PulseSchedule s = single_atom_schedule(kPreset, 2.0, 1.0, 30);
  const Trajectory t = simulate_schedule(CVector::basis(3, 0), kPreset, s, 21);
  CHECK(std::is_sorted(t.photon_times.begin(), t.photon_times.end()));
  CHECK(!t.photon_times.empty());
  const double cycle = s.cycle();
  for (double ph : t.photon_times) {
    const auto k = static_cast<std::size_t>(ph / cycle);
    if (k < t.pulse_flags.size()) CHECK(t.pulse_flags[k]);
  }
  CHECK(std::abs(t.final_state.norm() - 1.0) < 1e-12);
}

TEST_CASE("ensemble: results do not depend on the thread count") {
  const PulseSchedule s = itano_schedule(2, 256.0, 2.0);
  const AtomParams p{kPi / 256, 50.0, 20.0};
  EnsembleOptions o;
  o.trajectories = 300;
  o.master_seed = 77;
  o.threads = 1;
  const EnsembleResult a = run_ensemble(CVector::basis(3, 0), p, s, o);
  o.threads = 3;
  const EnsembleResult b = run_ensemble(CVector::basis(3, 0), p, s, o);
  CHECK(a.mean_p2 == b.mean_p2);
  CHECK(max_abs_diff(a.mean_rho, b.mean_rho) == 0.0);
  CHECK(a.mean_rho.trace().real() == doctest::Approx(1.0));
}

TEST_CASE("ensemble: jump average agrees with the master equation") {
  const AtomParams p{kPi / 256, 50.0, 20.0};
  for (int n : {1, 2}) {
    const PulseSchedule s = itano_schedule(n, 256.0, 2.0);
    EnsembleOptions o;
    o.trajectories = 20000;
    o.master_seed = 3;
    o.threads = 0;
    const EnsembleResult e = run_ensemble(CVector::basis(3, 0), p, s, o);
    const double bloch = itano_bloch_population(n, p, 256.0, 2.0, default_master_step(p));
    CHECK(std::abs(e.mean_p2 - bloch) <= std::max(3.0 * e.stderr_p2, 1e-3));
  }
}

TEST_CASE("single pulse: no-emission fraction follows |alpha2|^2") {
  const CVector psi{0.6, 0.8, 0.0};
  const PulseSchedule s = single_atom_schedule(kPreset, 2.0, 0.0, 1);
  const TrajectorySimulator sim(kPreset, s);
  const int n = 20000;
  int quiet = 0;
  for (int k = 0; k < n; ++k) quiet += sim.run(psi, stream_seed(8, k)).photon_times.empty();
  const double frac = double(quiet) / n;
  const double sigma = std::sqrt(frac * (1 - frac) / n);
  const double eps_max = epsilons(kPreset).eps_max;
  CHECK(std::abs(frac - 0.64) <= eps_max + 3 * sigma);
  CHECK(std::abs(frac - no_photon_probability(psi, kPreset, 2.0, P0Mode::kExact)) <= 3.5 * sigma);
}

TEST_CASE("post-pulse states: vanishing eps and first-order entries") {
  const CorrectionStates tiny = post_pulse_states(AtomParams{1e-8, 50.0, 20.0}, 2.0);
  CHECK(max_abs_diff(tiny.rho0_p, pure_state(CVector{0.0, 1.0})) < 1e-8);
  CHECK(max_abs_diff(tiny.rhoGt_p, pure_state(CVector{1.0, 0.0})) < 1e-8);

  const CorrectionStates cs = post_pulse_states(kPreset, 2.0);
  CHECK(std::abs(cs.rho0_p_first_order(0, 1) - cplx(0.0, -0.008)) < 1e-15);
  CHECK(std::abs(cs.rho0_p_first_order(1, 0) - cplx(0.0, 0.008)) < 1e-15);
  CHECK(std::abs(cs.rho0_p(0, 1) - cplx(0.0, -0.008)) < 1e-6);
  for (const DensityMatrix* r : {&cs.rho0_p, &cs.rhoGt_p, &cs.rho0_end, &cs.rhoGt_end}) {
    CHECK(r->trace().real() == doctest::Approx(1.0));
    CHECK(hermiticity_error(*r) < 1e-14);
    CHECK(min_eigenvalue(*r) > -1e-12);
  }
  CHECK(post_pulse_states(kPreset, 2.0, CVector{0.0, 1.0, 0.0}).exceptional_case);
  CHECK_FALSE(post_pulse_states(kPreset, 2.0, CVector{1.0, 0.0, 0.0}).exceptional_case);
}

TEST_CASE("post-pulse states: emission state against conditional trajectory states") {
  // Single pulse from |1>: every trajectory emits; average the state at pulse end.
  const PulseSchedule s = single_atom_schedule(kPreset, 2.0, 0.0, 1);
  const TrajectorySimulator sim(kPreset, s);
  const int n = 20000;
  CMatrix mean(3), mean2(3);
  int used = 0;
  for (int k = 0; k < n; ++k) {
    const Trajectory t = sim.run(CVector::basis(3, 0), stream_seed(12, k));
    if (t.photon_times.empty()) continue;
    const DensityMatrix r = pure_state(t.final_state);
    mean += r;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) mean2(i, j) += std::norm(r(i, j));
    }
    ++used;
  }
  mean *= 1.0 / used;
  const double eps_max = epsilons(kPreset).eps_max;
  const CorrectionStates cs = post_pulse_states(kPreset, 2.0);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double var = std::max(0.0, mean2(i, j).real() / used - std::norm(mean(i, j)));
      const double tol = std::max(10.0 * eps_max * eps_max, 3.0 * std::sqrt(var / used));
      CHECK(std::abs(mean(i, j) - cs.rhoGt_end(i, j)) <= tol);
    }
  }
}

TEST_CASE("transition probabilities: ideal limit and the printed asymmetry") {
  const double dt = 1.0;
  const TransitionProbs ideal = transition_probs_pq_unchecked(AtomParams{1.0, 1e12, 1e9}, dt, 0.0);
  CHECK(ideal.p == doctest::Approx(std::pow(std::sin(0.5 * dt), 2)).epsilon(1e-9));
  CHECK(ideal.q == doctest::Approx(std::pow(std::cos(0.5 * dt), 2)).epsilon(1e-9));

  // Asymmetry transcribed term by term: 1 - q - p.
  const double o2 = 2500.0, a2 = 400.0, d = a2 + 2 * o2, tau = 2.0;
  const double ep = 0.008, ea = 0.05, sn = std::sin(dt), cs = std::cos(dt);
  const double expect = ep * (2 * sn + 0.5 * tau * (1 + cs)) -
                        ep * (2 * sn * (a2 + o2) / d + 0.5 * tau * cs * (3 * a2 + 2 * o2) / d - 0.5 * tau) +
                        0.5 * ea * sn * o2 / d;
  const TransitionProbs pq = transition_probs_pq(kPreset, dt, tau);
  CHECK(1.0 - pq.q - pq.p == doctest::Approx(expect).epsilon(1e-12));
  CHECK(expect != 0.0);
  CHECK_THROWS_AS(transition_probs_pq(kPreset, 0.2, tau), RegimeViolation);
}

TEST_CASE("transition probabilities against trajectory conditionals") {
  const double dt = 1.0, tau = 2.0;
  const PulseSchedule s = single_atom_schedule(kPreset, tau, dt, 500);
  const TrajectorySimulator sim(kPreset, s);
  long long from_light = 0, light_to_dark = 0, from_dark = 0, dark_to_dark = 0;
  for (int k = 0; k < 40; ++k) {
    const Trajectory t = sim.run(CVector::basis(3, 0), stream_seed(31, k));
    for (std::size_t i = 1; i < t.pulse_flags.size(); ++i) {
      if (t.pulse_flags[i - 1]) {
        ++from_light;
        light_to_dark += !t.pulse_flags[i];
      } else {
        ++from_dark;
        dark_to_dark += !t.pulse_flags[i];
      }
    }
  }
  const TransitionProbs pq = transition_probs_pq(kPreset, dt, tau);
  const double eps_max = epsilons(kPreset).eps_max;
  const double p_mc = double(light_to_dark) / from_light;
  const double q_mc = double(dark_to_dark) / from_dark;
  CHECK(std::abs(p_mc - pq.p) <= std::max(10 * eps_max * eps_max, 3 * std::sqrt(p_mc * (1 - p_mc) / from_light)));
  CHECK(std::abs(q_mc - pq.q) <= std::max(10 * eps_max * eps_max, 3 * std::sqrt(q_mc * (1 - q_mc) / from_dark)));
}

TEST_CASE("period statistics: geometric mean and limit mode") {
  const MeanPeriods lim = period_statistics(kPreset, 0.0, 2.0, PeriodMode::kLimit);
  CHECK(lim.mean_dark == doctest::Approx(125.0));
  CHECK(lim.mean_light == doctest::Approx(1687.5));
  const double dt = 2.0, tau = 2.0;
  const TransitionProbs pq = transition_probs_pq(kPreset, dt, tau);
  const MeanPeriods an = period_statistics(kPreset, dt, tau, PeriodMode::kAnalytic);
  CHECK(an.mean_light == doctest::Approx((tau + dt) / pq.p));
  CHECK(an.mean_dark == doctest::Approx((tau + dt) / (1 - pq.q)));
}

TEST_CASE("extract_periods: run lengths and truncation") {
  PulseSchedule s;
  s.tau_p = 1.0;
  s.dt = 1.0;
  s.n_pulses = 6;
  Trajectory t;
  t.pulse_flags = {true, true, false, false, false, true};
  const auto interior = extract_periods(t, s);
  REQUIRE(interior.size() == 1);
  CHECK(interior[0].kind == PeriodKind::kDark);
  CHECK(interior[0].pulse_count == 3);
  CHECK(interior[0].duration == doctest::Approx(6.0));

  t.pulse_flags.assign(6, true);
  CHECK(extract_periods(t, s).empty());

  std::mt19937_64 gen(6);
  for (int rep = 0; rep < 20; ++rep) {
    t.pulse_flags.clear();
    for (int i = 0; i < 100; ++i) t.pulse_flags.push_back(gen() & 1);
    int total = 0;
    for (const auto& r : extract_periods(t, s, true)) total += r.pulse_count;
    CHECK(total == 100);
  }
}
