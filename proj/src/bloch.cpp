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

#include "zenosim/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace zenosim {

double max_master_step(const AtomParams& p) { return 0.1 / p.max_rate(); }

double default_master_step(const AtomParams& p) { return 0.02 / p.max_rate(); }

namespace {

DensityMatrix rk4_step(const LindbladGenerator& f, const DensityMatrix& rho, double h) {
  const DensityMatrix k1 = f(rho);
  const DensityMatrix k2 = f(rho + (0.5 * h) * k1);
  const DensityMatrix k3 = f(rho + (0.5 * h) * k2);
  const DensityMatrix k4 = f(rho + h * k3);
  return rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

class Integrator {
 public:
  Integrator(const DensityMatrix& rho0, double step, bool record)
      : step_(step), record_(record), trace0_(rho0.trace().real()) {
    result_.rho = rho0;
    result_.min_eigenvalue = min_eigenvalue(rho0);
    if (record_) result_.samples.push_back({0.0, rho0});
  }

  void advance(const LindbladGenerator& f, double duration) {
    if (duration <= 0.0) return;
    const auto steps = static_cast<long>(std::ceil(duration / step_ - 1e-9));
    const double h = duration / static_cast<double>(std::max(1L, steps));
    DensityMatrix rho = result_.rho;
    for (long i = 0; i < std::max(1L, steps); ++i) {
      rho = rk4_step(f, rho, h);
      result_.max_trace_drift = std::max(result_.max_trace_drift, std::abs(rho.trace().real() - trace0_));
    }
    time_ += duration;
    result_.rho = rho;
    result_.max_hermiticity_error = std::max(result_.max_hermiticity_error, hermiticity_error(rho));
    const double lo = min_eigenvalue(rho);
    result_.min_eigenvalue = std::min(result_.min_eigenvalue, lo);
    if (lo < -1e-6) {
      throw PositivityLoss("density matrix lost positivity: eigenvalue " + std::to_string(lo) +
                           " at t = " + std::to_string(time_));
    }
    if (record_) result_.samples.push_back({time_, rho});
  }

  MasterResult finish() && { return std::move(result_); }

 private:
  double step_;
  bool record_;
  double trace0_;
  double time_ = 0.0;
  MasterResult result_;
};

void check_step(const AtomParams& p, double step) {
  if (!(step > 0.0) || step > max_master_step(p) * (1.0 + 1e-12)) {
    throw StepTooLarge("integration step " + std::to_string(step) + " exceeds 0.1 / max rate = " +
                       std::to_string(max_master_step(p)));
  }
}

}  // namespace

MasterResult integrate_master(const DensityMatrix& rho0, const AtomParams& p, const PulseSchedule& s,
                              double step, bool record_samples) {
  check_step(p, step);
  const LindbladGenerator pulse(p, true, s.weak_on_during_pulse);
  const LindbladGenerator weak(p, false, true);
  Integrator integ(rho0, step, record_samples);
  for (const Segment& seg : schedule_segments(s)) {
    integ.advance(seg.strong_on ? pulse : weak, seg.duration);
  }
  return std::move(integ).finish();
}

MasterResult integrate_master_constant(const DensityMatrix& rho0, const AtomParams& p, bool strong_on,
                                       bool weak_on, double duration, double step) {
  check_step(p, step);
  Integrator integ(rho0, step, false);
  integ.advance(LindbladGenerator(p, strong_on, weak_on), duration);
  return std::move(integ).finish();
}

double itano_bloch_population(int n, const AtomParams& p, double t_pi, double tau_p, double step,
                              PulsePlacement placement) {
  if (!(n * tau_p < t_pi)) throw InvalidParameters("n * tau_p must be shorter than the pi pulse");
  const PulseSchedule s = itano_schedule(n, t_pi, tau_p, placement);
  const DensityMatrix rho0 = pure_state(CVector::basis(3, 0));
  return integrate_master(rho0, p, s, step).rho(1, 1).real();
}

}  // namespace zenosim
