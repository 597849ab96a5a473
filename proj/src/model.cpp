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

#include "zenosim/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace zenosim {

void AtomParams::validate() const {
  if (!(omega2 >= 0.0) || !std::isfinite(omega2)) throw InvalidParameters("omega2 must be >= 0");
  if (!(omega3 > 0.0) || !std::isfinite(omega3)) throw InvalidParameters("omega3 must be > 0");
  if (!(a3 > 0.0) || !std::isfinite(a3)) throw InvalidParameters("a3 must be > 0");
}

double AtomParams::max_rate() const { return std::max({omega2, omega3, a3}); }

Epsilons epsilons(const AtomParams& p) {
  Epsilons e;
  e.eps_a = p.omega2 / p.a3;
  e.eps_r = p.omega2 / p.omega3;
  e.eps_p = p.omega2 * p.a3 / (p.omega3 * p.omega3);
  e.eps_max = std::max({e.eps_a, e.eps_r, e.eps_p});
  return e;
}

void PulseSchedule::validate() const {
  if (!(tau_p >= 0.0)) throw InvalidParameters("tau_p must be >= 0");
  if (!(dt >= 0.0)) throw InvalidParameters("dt must be >= 0");
  if (!(tau_tr >= 0.0)) throw InvalidParameters("tau_tr must be >= 0");
  if (n_pulses < 1) throw InvalidParameters("n_pulses must be >= 1");
  if (pi_pulse_total) {
    const double total = n_pulses * (dt + tau_p);
    if (std::abs(total - *pi_pulse_total) > 1e-12 * std::max(1.0, *pi_pulse_total)) {
      throw InvalidParameters("n_pulses * (dt + tau_p) must equal the pi-pulse length");
    }
  }
}

double default_transient(const AtomParams& p) { return 40.0 / p.a3; }

PulseSchedule itano_schedule(int n, double t_pi, double tau_p, PulsePlacement placement) {
  if (n < 1) throw InvalidParameters("n_pulses must be >= 1");
  if (!(t_pi > 0.0)) throw InvalidParameters("t_pi must be > 0");
  PulseSchedule s;
  s.tau_p = tau_p;
  s.dt = t_pi / n - tau_p;
  if (s.dt < 0.0) throw InvalidParameters("n * tau_p exceeds the pi-pulse length");
  s.n_pulses = n;
  s.tau_tr = 0.0;
  s.weak_on_during_pulse = true;
  s.pi_pulse_total = t_pi;
  s.placement = placement;
  s.validate();
  return s;
}

PulseSchedule single_atom_schedule(const AtomParams& p, double tau_p, double dt, int n_pulses,
                                   std::optional<double> tau_tr) {
  PulseSchedule s;
  s.tau_p = tau_p;
  s.dt = dt;
  s.n_pulses = n_pulses;
  s.tau_tr = tau_tr.value_or(default_transient(p));
  s.weak_on_during_pulse = true;
  s.placement = PulsePlacement::kPulseFirst;
  s.validate();
  return s;
}

std::vector<Segment> schedule_segments(const PulseSchedule& s) {
  s.validate();
  std::vector<Segment> out;
  auto push = [&out](Segment seg) {
    if (seg.duration > 0.0) out.push_back(seg);
  };
  for (int k = 0; k < s.n_pulses; ++k) {
    const Segment pulse{s.tau_p, true, s.weak_on_during_pulse, k, true};
    if (s.placement == PulsePlacement::kPulseFirst) {
      const double tr = std::min(s.tau_tr, s.dt);
      push(pulse);
      push(Segment{tr, false, true, k, false});
      push(Segment{s.dt - tr, false, true, -1, false});
    } else {
      push(Segment{s.dt, false, true, k - 1, false});
      push(pulse);
    }
  }
  return out;
}

CMatrix build_h_hermitian(const AtomParams& p, bool strong_on, bool weak_on) {
  CMatrix h(3);
  if (weak_on) {
    h(0, 1) = h(1, 0) = 0.5 * p.omega2;
  }
  if (strong_on) {
    h(0, 2) = h(2, 0) = 0.5 * p.omega3;
  }
  return h;
}

CMatrix build_h_cond(const AtomParams& p, bool strong_on, bool weak_on) {
  CMatrix h = build_h_hermitian(p, strong_on, weak_on);
  h(2, 2) = cplx(0.0, -0.5 * p.a3);
  return h;
}

CMatrix free_propagator(const AtomParams& p, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("free_propagator requires t >= 0");
  const double c = std::cos(0.5 * p.omega2 * t);
  const double s = std::sin(0.5 * p.omega2 * t);
  CMatrix u = CMatrix::identity(3);
  u(0, 0) = u(1, 1) = c;
  u(0, 1) = u(1, 0) = cplx(0.0, -s);
  return u;
}

LindbladGenerator::LindbladGenerator(const AtomParams& p, bool strong_on, bool weak_on)
    : h_cond_(build_h_cond(p, strong_on, weak_on)), h_cond_adj_(h_cond_.adjoint()), a3_(p.a3) {}

DensityMatrix LindbladGenerator::operator()(const DensityMatrix& rho) const {
  DensityMatrix out = (-kI) * (h_cond_ * rho - rho * h_cond_adj_);
  out(0, 0) += a3_ * rho(2, 2);
  return out;
}

DensityMatrix lindblad_rhs(const AtomParams& p, bool strong_on, bool weak_on,
                           const DensityMatrix& rho) {
  return LindbladGenerator(p, strong_on, weak_on)(rho);
}

std::vector<std::string> RegimeReport::violations() const {
  std::vector<std::string> out;
  for (const RegimeGate* g : {&pulse_length, &transient, &gap_decay, &gap_rotation}) {
    if (!g->ok()) out.push_back(g->name);
  }
  return out;
}

RegimeReport compute_epsilons(const AtomParams& p, const PulseSchedule& s, double margin) {
  RegimeReport r;
  r.eps = epsilons(p);
  r.margin = margin;
  // tau_p >> max{1/a3, a3/omega3^2}
  const double slowest = std::max(1.0 / p.a3, p.a3 / (p.omega3 * p.omega3));
  r.pulse_length = {"pulse_length", s.tau_p / slowest, margin};
  r.transient = {"transient", std::min(s.tau_tr, s.dt) * p.a3, margin};
  r.gap_decay = {"gap_decay", s.dt * p.a3, margin};
  const double rot = p.omega2 * s.dt;
  r.gap_rotation = {"gap_rotation", rot * rot, margin * r.eps.eps_max};
  return r;
}

}  // namespace zenosim
