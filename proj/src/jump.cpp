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

#include "zenosim/jump.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "zenosim/ideal.hpp"

namespace zenosim {

// ------------------------------------------------- conditional propagator

ConditionalPropagator::ConditionalPropagator(const AtomParams& p, bool strong_on, bool weak_on)
    : h_(build_h_cond(p, strong_on, weak_on)), eig_(eig_with_reciprocal(h_)) {}

CMatrix ConditionalPropagator::at(double t) const {
  if (!(t >= 0.0)) throw std::invalid_argument("propagation time must be >= 0");
  return spectral() ? spectral_exp(eig_, t) : mat_exp(h_, t);
}

CVector ConditionalPropagator::apply(const CVector& psi, double t) const {
  if (!spectral()) return mat_exp(h_, t) * psi;
  CVector out(psi.dim());
  for (int i = 0; i < eig_.dim(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const cplx c = inner(eig_.reciprocal_vectors[k], psi) * std::exp(-kI * eig_.eigenvalues[k] * t);
    out += c * eig_.right_vectors[k];
  }
  return out;
}

double ConditionalPropagator::survival(const CVector& psi, double t) const {
  return apply(psi, t).norm2();
}

CMatrix cond_propagator(const AtomParams& p, bool strong_on, bool weak_on, double t) {
  return ConditionalPropagator(p, strong_on, weak_on).at(t);
}

// ------------------------------------------------------- perturbative

namespace {

double pulse_gate_value(const AtomParams& p, double tau) {
  return tau / std::max(1.0 / p.a3, p.a3 / (p.omega3 * p.omega3));
}

void require_pulse_gate(const AtomParams& p, double tau, double margin) {
  const double v = pulse_gate_value(p, tau);
  if (v < margin) {
    throw RegimeViolation("pulse too short for the perturbative formulas: tau_p / max(1/a3, a3/omega3^2) = " +
                          std::to_string(v) + " < " + std::to_string(margin));
  }
}

void require_small_eps(const Epsilons& e) {
  if (!(e.eps_max < 0.2)) {
    throw RegimeViolation("eps_max = " + std::to_string(e.eps_max) + " is not small (< 0.2)");
  }
}

}  // namespace

double no_photon_probability(const CVector& psi, const AtomParams& p, double tau, P0Mode mode,
                             double margin) {
  if (mode == P0Mode::kExact) {
    return ConditionalPropagator(p, true, true).survival(psi, tau);
  }
  require_pulse_gate(p, tau, margin);
  const Epsilons e = epsilons(p);
  const cplx a1 = psi[0], a2 = psi[1], a3 = psi[2];
  return (1.0 - e.eps_p * p.omega2 * tau) * std::norm(a2) +
         2.0 * e.eps_p * std::imag(a1 * std::conj(a2)) - 2.0 * e.eps_r * std::real(a2 * std::conj(a3));
}

PerturbativeEigen perturbative_eigensystem(const AtomParams& p) {
  const Epsilons e = epsilons(p);
  require_small_eps(e);
  PerturbativeEigen out;
  out.lambda2 = 0.5 * p.omega2 * e.eps_p;
  out.v2 = CVector{cplx(0.0, -e.eps_p), 1.0, -e.eps_r};
  out.w2 = CVector{cplx(0.0, e.eps_p), 1.0, -e.eps_r};
  return out;
}

// ---------------------------------------------------------- jump times

JumpResult sample_jump_time(const ConditionalPropagator& u, const CVector& psi, double horizon,
                            double r) {
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be >= 0");
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("r must lie in (0, 1)");
  const CVector start = psi.normalized();

  // Coefficients of the start state in the eigenbasis, reused by every probe.
  const EigSystem& eig = u.eig();
  const bool spectral = u.spectral();
  std::array<cplx, 3> coeff{};
  if (spectral) {
    for (int i = 0; i < eig.dim(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      coeff[k] = inner(eig.reciprocal_vectors[k], start);
    }
  }
  auto evolve = [&](double t) {
    if (!spectral) return u.apply(start, t);
    CVector out(start.dim());
    for (int i = 0; i < eig.dim(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      const cplx z = -kI * eig.eigenvalues[k] * t;
      const cplx w = coeff[k] * std::polar(std::exp(z.real()), z.imag());
      const CVector& v = eig.right_vectors[k];
      for (int j = 0; j < start.dim(); ++j) out[j] += w * v[j];
    }
    return out;
  };

  const CVector end = evolve(horizon);
  if (end.norm2() > r) return {std::nullopt, end.normalized()};

  // d/dt ||psi||^2 = <psi| -i(H - H^dag) |psi>, used for Newton steps kept
  // inside the bisection bracket.
  const CMatrix& h = u.h_cond();
  const CMatrix loss = -kI * (h - h.adjoint());
  double lo = 0.0, hi = horizon;
  double t = 0.5 * horizon;
  const double tol = 1e-10 * horizon;
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const CVector v = evolve(t);
    const double f = v.norm2() - r;
    if (f > 0.0) {
      lo = t;
    } else {
      hi = t;
    }
    const double df = inner(v, loss * v).real();
    double next = df < 0.0 ? t - f / df : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= tol) {
      t = next;
      break;
    }
    t = next;
  }
  return {t, CVector::basis(start.dim(), 0)};
}

JumpResult sample_jump_time(const CVector& psi, const AtomParams& p, bool strong_on, bool weak_on,
                            double horizon, double r) {
  return sample_jump_time(ConditionalPropagator(p, strong_on, weak_on), psi, horizon, r);
}

// ----------------------------------------------------------- schedules

TrajectorySimulator::TrajectorySimulator(const AtomParams& p, const PulseSchedule& s)
    : params_(p),
      schedule_(s),
      segments_(schedule_segments(s)),
      pulse_(p, true, s.weak_on_during_pulse),
      weak_only_(p, false, true) {}

Trajectory TrajectorySimulator::run(const CVector& psi0, std::uint64_t seed) const {
  Rng rng(seed);
  Trajectory tr;
  tr.seed = seed;
  tr.pulse_flags.assign(static_cast<std::size_t>(schedule_.n_pulses), false);
  CVector psi = psi0.normalized();
  double t0 = 0.0;
  for (const Segment& seg : segments_) {
    const ConditionalPropagator& u = seg.strong_on ? pulse_ : weak_only_;
    double elapsed = 0.0;
    for (;;) {
      const double remaining = seg.duration - elapsed;
      const JumpResult res = sample_jump_time(u, psi, remaining, rng.uniform_open());
      psi = res.state;
      if (!res.time) break;
      elapsed += *res.time;
      tr.photon_times.push_back(t0 + elapsed);
      if (seg.pulse_index >= 0) tr.pulse_flags[static_cast<std::size_t>(seg.pulse_index)] = true;
      if (elapsed >= seg.duration) break;
    }
    t0 += seg.duration;
  }
  tr.final_state = psi;
  return tr;
}

Trajectory simulate_schedule(const CVector& psi0, const AtomParams& p, const PulseSchedule& s,
                             std::uint64_t seed) {
  return TrajectorySimulator(p, s).run(psi0, seed);
}

EnsembleResult run_ensemble(const CVector& psi0, const AtomParams& p, const PulseSchedule& s,
                            const EnsembleOptions& opt) {
  if (opt.trajectories < 1) throw std::invalid_argument("need at least one trajectory");
  const TrajectorySimulator sim(p, s);
  const auto n = static_cast<std::size_t>(opt.trajectories);
  EnsembleResult out;
  out.final_states.resize(n);
  if (opt.keep_trajectories) out.trajectories.resize(n);

  parallel_for(opt.trajectories, opt.threads, [&](int i) {
    const auto k = static_cast<std::size_t>(i);
    Trajectory tr = sim.run(psi0, stream_seed(opt.master_seed, k));
    out.final_states[k] = pure_state(tr.final_state);
    if (opt.keep_trajectories) out.trajectories[k] = std::move(tr);
  });

  out.mean_rho = CMatrix(psi0.dim());
  double sum = 0.0, sum2 = 0.0;
  for (const DensityMatrix& rho : out.final_states) {
    out.mean_rho += rho;
    const double p2 = rho(1, 1).real();
    sum += p2;
    sum2 += p2 * p2;
  }
  const double nd = static_cast<double>(n);
  out.mean_rho *= 1.0 / nd;
  out.mean_p2 = sum / nd;
  const double var = n > 1 ? std::max(0.0, (sum2 - nd * out.mean_p2 * out.mean_p2) / (nd - 1.0)) : 0.0;
  out.stderr_p2 = std::sqrt(var / nd);
  return out;
}

// ------------------------------------------------- post-pulse states

CorrectionStates post_pulse_states(const AtomParams& p, double tau_p,
                                   const std::optional<CVector>& initial, double margin) {
  const Epsilons e = epsilons(p);
  require_small_eps(e);
  require_pulse_gate(p, tau_p, margin);

  CorrectionStates out;
  const double a2 = p.a3 * p.a3;
  const double o2 = p.omega3 * p.omega3;
  const double denom = a2 + 2.0 * o2 + e.eps_p * p.omega2 * tau_p * a2;

  // No emission: the slow eigenvector, first order.
  const CVector slow{cplx(0.0, -e.eps_p), 1.0, -e.eps_r};
  out.rho0_end = normalize_density(CMatrix::outer(slow, slow));
  const CVector slow12{cplx(0.0, -e.eps_p), 1.0};
  out.rho0_p = normalize_density(CMatrix::outer(slow12, slow12));
  out.rho0_p_first_order = CMatrix(2, {0.0, -kI * e.eps_p, kI * e.eps_p, 1.0});

  CMatrix gt(3, {a2 + o2, kI * e.eps_p * a2, kI * p.a3 * p.omega3,
                 -kI * e.eps_p * a2, e.eps_p * p.omega2 * tau_p * a2, e.eps_r * (a2 + o2),
                 -kI * p.a3 * p.omega3, e.eps_r * (a2 + o2), o2});
  out.rhoGt_end = normalize_density((1.0 / denom) * gt);

  const cplx off = kI * e.eps_p * a2 - 0.5 * kI * e.eps_a * o2;
  CMatrix gt_p(2, {a2 + 2.0 * o2, off, std::conj(off), e.eps_p * p.omega2 * tau_p * a2});
  out.rhoGt_p = normalize_density((1.0 / denom) * gt_p);

  if (initial) {
    const CVector psi = initial->normalized();
    out.exceptional_case = 1.0 - std::norm(psi[1]) < margin * e.eps_max;
  }
  return out;
}

// ------------------------------------------------------ p, q, periods

TransitionProbs transition_probs_pq_unchecked(const AtomParams& p, double dt, double tau_p) {
  const Epsilons e = epsilons(p);
  const double a2 = p.a3 * p.a3;
  const double o2 = p.omega3 * p.omega3;
  const double d = a2 + 2.0 * o2;
  const double s = std::sin(p.omega2 * dt);
  const double c = std::cos(p.omega2 * dt);
  const double half = 0.5 * p.omega2 * tau_p;
  const double sh = std::sin(0.5 * p.omega2 * dt);
  const double ch = std::cos(0.5 * p.omega2 * dt);

  TransitionProbs out;
  out.p = sh * sh + e.eps_p * (2.0 * s * (a2 + o2) / d + half * c * (3.0 * a2 + 2.0 * o2) / d - half) -
          0.5 * e.eps_a * s * o2 / d;
  out.q = ch * ch - e.eps_p * (2.0 * s + half * (1.0 + c));
  return out;
}

TransitionProbs transition_probs_pq(const AtomParams& p, double dt, double tau_p, double margin) {
  require_pulse_gate(p, tau_p, margin);
  const Epsilons e = epsilons(p);
  if (dt * p.a3 < margin) {
    throw RegimeViolation("gap too short for the level-3 decay: dt * a3 = " + std::to_string(dt * p.a3));
  }
  const double rot = p.omega2 * dt;
  if (rot * rot < margin * e.eps_max) {
    throw RegimeViolation("gap too short for the weak drive: (omega2 dt)^2 = " + std::to_string(rot * rot) +
                          " < " + std::to_string(margin * e.eps_max));
  }
  return transition_probs_pq_unchecked(p, dt, tau_p);
}

MeanPeriods period_statistics(const AtomParams& p, double dt, double tau_p, PeriodMode mode,
                              double margin) {
  if (mode == PeriodMode::kLimit) {
    const double o2 = p.omega3 * p.omega3;
    const double base = o2 / (p.omega2 * p.omega2 * p.a3);
    return {base * (p.a3 * p.a3 + 2.0 * o2) / (p.a3 * p.a3), base};
  }
  const TransitionProbs pq = transition_probs_pq(p, dt, tau_p, margin);
  if (!(pq.p > 0.0) || !(1.0 - pq.q > 0.0)) {
    throw DivergentPeriod("transition probability vanishes; mean period diverges");
  }
  const double cycle = tau_p + dt;
  return {cycle / pq.p, cycle / (1.0 - pq.q)};
}

std::vector<PeriodRecord> extract_periods(const Trajectory& t, const PulseSchedule& s,
                                          bool include_truncated) {
  std::vector<PeriodRecord> all;
  const auto& flags = t.pulse_flags;
  for (std::size_t i = 0; i < flags.size();) {
    std::size_t j = i;
    while (j < flags.size() && flags[j] == flags[i]) ++j;
    PeriodRecord rec;
    rec.kind = flags[i] ? PeriodKind::kLight : PeriodKind::kDark;
    rec.pulse_count = static_cast<int>(j - i);
    rec.duration = rec.pulse_count * s.cycle();
    rec.truncated = (i == 0) || (j == flags.size());
    all.push_back(rec);
    i = j;
  }
  if (include_truncated) return all;
  std::vector<PeriodRecord> interior;
  for (const auto& r : all)
    if (!r.truncated) interior.push_back(r);
  return interior;
}

}  // namespace zenosim
