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

#include "zenosim/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <ostream>
#include <sstream>

#include "zenosim/bloch.hpp"
#include "zenosim/harness.hpp"
#include "zenosim/ideal.hpp"
#include "zenosim/jump.hpp"
#include "zenosim/parallel.hpp"
#include "zenosim/rng.hpp"

namespace zenosim {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// Collects detail lines for one criterion.
struct Report {
  std::vector<std::string> lines;
  bool pass = true;

  void note(std::string s) { lines.push_back(std::move(s)); }
  void check(bool ok, std::string s) {
    lines.push_back(std::string(ok ? "ok    " : "FAIL  ") + s);
    pass = pass && ok;
  }
};

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Two-state chain of ideal measurements, iterated step by step.
double markov_p2(int n, double dt, double omega2) {
  const double f = std::pow(std::sin(0.5 * omega2 * dt), 2);
  double p1 = 1.0, p2 = 0.0;
  for (int k = 0; k < n; ++k) {
    const double n1 = p1 * (1.0 - f) + p2 * f;
    const double n2 = p2 * (1.0 - f) + p1 * f;
    p1 = n1;
    p2 = n2;
  }
  return p2;
}

struct Moments {
  long long n = 0;
  double mean = 0.0;
  double std = 0.0;
  double stderr_mean = 0.0;
  double stderr_std = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  m.n = static_cast<long long>(v.size());
  if (v.size() < 2) return m;
  double s = 0.0;
  for (double x : v) s += x;
  m.mean = s / static_cast<double>(v.size());
  double m2 = 0.0, m4 = 0.0;
  for (double x : v) {
    const double d = (x - m.mean) * (x - m.mean);
    m2 += d;
    m4 += d * d;
  }
  const double nn = static_cast<double>(v.size());
  m2 /= nn;
  m4 /= nn;
  m.std = std::sqrt(m2 * nn / (nn - 1.0));
  m.stderr_mean = m.std / std::sqrt(nn);
  // Delta method: var(s) ~ (mu4 - sigma^4) / (4 sigma^2 n).
  m.stderr_std = std::sqrt(std::max(0.0, m4 - m2 * m2) / (4.0 * m2 * nn));
  return m;
}

// --------------------------------------------------------------- criterion 1

const double kColumn1[] = {1.00000, 0.50000, 0.37500, 0.23460, 0.13343, 0.07156};
const double kColumn2[] = {0.99978, 0.49957, 0.35985, 0.20857, 0.10029, 0.03642, 0.00613};
const int kNs[] = {1, 2, 4, 8, 16, 32, 64};

void criterion1(Report& r) {
  const double omega2 = 1.0;
  const double t_pi = kPi / omega2;
  for (int i = 0; i < 6; ++i) {
    const int n = kNs[i];
    const double got = cook_population(n, t_pi / n, omega2);
    const double oracle = markov_p2(n, t_pi / n, omega2);
    r.check(std::abs(got - kColumn1[i]) <= 5e-6 && std::abs(got - oracle) <= 1e-12,
            fmt("n=%-2d  P2=%.7f  table=%.5f  chain=%.7f", n, got, kColumn1[i], oracle));
  }
  const double got64 = cook_population(64, t_pi / 64, omega2);
  const double chain64 = markov_p2(64, t_pi / 64, omega2);
  r.check(std::abs(got64 - chain64) <= 1e-12, fmt("n=64  P2=%.7f  chain=%.7f", got64, chain64));
  r.note(fmt("note: the printed n=64 entry 0.00371 disagrees with the formula value %.5f "
             "(a dropped digit); the formula value is reported",
             got64));
}

// --------------------------------------------------------------- criterion 2

void criterion2(Report& r) {
  const double omega2 = 1.0;
  const double t_pi = kPi / omega2;
  const double ratio = 2.4 / 256.0;
  const double tau_p = ratio * t_pi;
  for (int i = 0; i < 7; ++i) {
    const int n = kNs[i];
    const double got = cook_population(n, t_pi / n - tau_p, omega2);
    const double oracle = markov_p2(n, t_pi / n - tau_p, omega2);
    r.check(std::abs(got - kColumn2[i]) <= 5e-6 && std::abs(got - oracle) <= 1e-12,
            fmt("n=%-2d  P2=%.7f  table=%.5f  chain=%.7f", n, got, kColumn2[i], oracle));
  }
  // Least-squares fit of the ratio to the whole column, by golden-section search.
  auto sse = [&](double x) {
    double acc = 0.0;
    for (int i = 0; i < 7; ++i) {
      const double d = cook_population(kNs[i], t_pi / kNs[i] - x * t_pi, omega2) - kColumn2[i];
      acc += d * d;
    }
    return acc;
  };
  double a = 0.0, b = 0.012;  // keeps T_pi/64 - tau_p positive
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (sse(c) < sse(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  const double fitted = 0.5 * (a + b);
  r.check(std::abs(fitted - ratio) <= 0.01 * ratio,
          fmt("least-squares tau_p/T_pi = %.6f, 2.4/256 = %.6f (%.2f%% apart, bar 1%%)", fitted, ratio,
              100.0 * std::abs(fitted - ratio) / ratio));
  // n = 1 alone pins the ratio: cos^2(omega2 tau / 2) = 0.99978, printed to 5 digits.
  const double lo = 2.0 * std::acos(std::sqrt(0.999785)) / kPi;
  const double hi = 2.0 * std::acos(std::sqrt(0.999775)) / kPi;
  r.check(ratio >= lo && ratio <= hi,
          fmt("n=1 entry brackets tau_p/T_pi in [%.6f, %.6f]; using 2.4/256 = %.6f", lo, hi, ratio));
}

// --------------------------------------------------------------- criterion 3

// Itano preset: strong pulse of 2 time units inside a pi pulse of 256 units.
struct ItanoPreset {
  AtomParams params{kPi / 256.0, 50.0, 20.0};
  double t_pi = 256.0;
  double tau_p = 2.0;
};

void criterion3(Report& r, const AcceptanceOptions& opt) {
  const ItanoPreset pre;
  const int trajectories = 100000;
  const double step = default_master_step(pre.params);
  r.note(fmt("omega2=pi/256 omega3=50 a3=20 tau_p=2 T_pi=256, %d trajectories", trajectories));
  for (int n : {1, 2, 4, 8}) {
    const PulseSchedule s = itano_schedule(n, pre.t_pi, pre.tau_p);
    EnsembleOptions eo;
    eo.trajectories = trajectories;
    eo.master_seed = stream_seed(opt.seed, static_cast<std::uint64_t>(n));
    eo.threads = opt.threads;
    const EnsembleResult ens = run_ensemble(CVector::basis(3, 0), pre.params, s, eo);
    const double bloch = itano_bloch_population(n, pre.params, pre.t_pi, pre.tau_p, step);
    const double tol = std::max(3.0 * ens.stderr_p2, 1e-3);
    const double gap = std::abs(ens.mean_p2 - bloch);
    r.check(gap <= tol, fmt("n=%d  mc=%.6f +- %.6f  bloch=%.6f  |gap|=%.2e  tol=%.2e", n, ens.mean_p2,
                            ens.stderr_p2, bloch, gap, tol));
  }
}

// --------------------------------------------------------------- criterion 4

void criterion4(Report& r) {
  const double scales[] = {25.0, 5.0, 1.0};
  const double tau_p = 2.0;
  const CVector psi = CVector{1.0, kI, 0.3}.normalized();

  std::vector<double> eps, err_l_abs, err_l_rel, err_rho, err_rho_pos, err_p0;
  for (double s : scales) {
    const AtomParams p{1.0, 50.0 * s, 20.0 * s};
    const Epsilons e = epsilons(p);
    eps.push_back(e.eps_max);

    // Slow decay rate against the numeric spectrum of H_cond.
    const EigSystem es = eig_with_reciprocal(build_h_cond(p, true, true));
    const double lam_num = -es.eigenvalues[0].imag();
    const PerturbativeEigen pe = perturbative_eigensystem(p);
    err_l_abs.push_back(std::abs(pe.lambda2 - lam_num));
    err_l_rel.push_back(std::abs(pe.lambda2 - lam_num) / lam_num);

    // No-emission state: exact conditional evolution through the pulse and the
    // transient, against the first-order state carried by the free Rabi motion.
    const double tau_tr = default_transient(p);
    const CVector after_pulse = cond_propagator(p, true, true, tau_p) * psi;
    const CVector after_tr = cond_propagator(p, false, true, tau_tr) * after_pulse;
    const CVector exact12 = CVector{after_tr[0], after_tr[1]}.normalized();
    const CorrectionStates cs = post_pulse_states(p, tau_p);
    const CMatrix u = cond_propagator(p, false, true, tau_tr).block(2);
    const DensityMatrix pred = u * cs.rho0_p * u.adjoint();
    const DensityMatrix pred_fo = u * cs.rho0_p_first_order * u.adjoint();
    err_rho.push_back((pure_state(exact12) - pred_fo).frobenius_norm());
    err_rho_pos.push_back((pure_state(exact12) - pred).frobenius_norm());

    const double p0_exact = no_photon_probability(psi, p, tau_p, P0Mode::kExact);
    const double p0_pert = no_photon_probability(psi, p, tau_p, P0Mode::kPerturbative);
    err_p0.push_back(std::abs(p0_exact - p0_pert));

    r.note(fmt("eps_max=%.3f  |dlambda2|=%.3e (rel %.3e)  |drho0_P|=%.3e (positive form %.3e)  |dP0|=%.3e",
               e.eps_max, err_l_abs.back(), err_l_rel.back(), err_rho.back(), err_rho_pos.back(),
               err_p0.back()));
  }

  auto gate = [&](const char* name, const std::vector<double>& err, const std::vector<double>& bound_err) {
    const double slope = loglog_slope(eps, err);
    bool within = true;
    for (std::size_t i = 0; i < eps.size(); ++i) within = within && bound_err[i] <= 10.0 * eps[i] * eps[i];
    r.check(std::abs(slope - 2.0) <= 0.3 && within,
            fmt("%-8s slope=%.3f (2 +- 0.3), all <= 10 eps^2: %s", name, slope, within ? "yes" : "no"));
  };
  // lambda2 is itself O(eps), so its dimensionless error is the relative one;
  // the absolute error shrinks one order faster and is shown for reference.
  gate("lambda2", err_l_rel, err_l_abs);
  r.note(fmt("lambda2 absolute-error slope %.3f", loglog_slope(eps, err_l_abs)));
  gate("rho0_P", err_rho, err_rho);
  // The positive form used for sampling keeps the eps_p^2 population term the
  // printed matrix drops, so it must do at least as well.
  bool pos_ok = true;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    pos_ok = pos_ok && err_rho_pos[i] <= err_rho[i] && err_rho_pos[i] <= 10.0 * eps[i] * eps[i];
  }
  r.check(pos_ok, fmt("rho0_P positive form no worse than the printed one (slope %.3f)",
                      loglog_slope(eps, err_rho_pos)));
  gate("P0", err_p0, err_p0);
}

// --------------------------------------------------------------- criterion 5

void criterion5(Report& r, const AcceptanceOptions& opt) {
  const AtomParams p{1.0, 50.0, 20.0};
  const double tau_p = 2.0;
  const double dt = 2.0;
  const int pulses = 1000;
  const int trajectories = 200;
  const PulseSchedule s = single_atom_schedule(p, tau_p, dt, pulses, std::min(default_transient(p), dt));
  const RegimeReport gates = compute_epsilons(p, s);
  r.check(gates.all_ok(), fmt("schedule in regime (tau_p=%.1f dt=%.1f eps_max=%.3f)", tau_p, dt, gates.eps.eps_max));

  const TrajectorySimulator sim(p, s);
  std::vector<std::vector<PeriodRecord>> per(trajectories);
  parallel_for(trajectories, opt.threads, [&](int k) {
    const Trajectory t = sim.run(CVector::basis(3, 0), stream_seed(opt.seed ^ 0x5eed, static_cast<std::uint64_t>(k)));
    per[static_cast<std::size_t>(k)] = extract_periods(t, s);
  });
  std::vector<double> light, dark;
  for (const auto& v : per) {
    for (const PeriodRecord& rec : v) (rec.kind == PeriodKind::kLight ? light : dark).push_back(rec.duration);
  }
  const Moments ml = moments(light);
  const Moments md = moments(dark);
  const MeanPeriods an = period_statistics(p, dt, tau_p, PeriodMode::kAnalytic);
  r.check(ml.n >= 10000 && md.n >= 10000, fmt("interior periods: light %lld, dark %lld", ml.n, md.n));
  r.check(std::abs(ml.mean - an.mean_light) <= 3.0 * ml.stderr_mean,
          fmt("light mean %.4f +- %.4f vs analytic %.4f", ml.mean, ml.stderr_mean, an.mean_light));
  r.check(std::abs(md.mean - an.mean_dark) <= 3.0 * md.stderr_mean,
          fmt("dark  mean %.4f +- %.4f vs analytic %.4f", md.mean, md.stderr_mean, an.mean_dark));

  const TransitionProbs pq = transition_probs_pq(p, dt, tau_p);
  const double analytic_sign = (1.0 - pq.q) - pq.p;
  const double empirical_sign = ml.mean - md.mean;  // T_L > T_D exactly when 1 - q > p
  const double z = empirical_sign / std::hypot(ml.stderr_mean, md.stderr_mean);
  r.check(analytic_sign != 0.0 && (analytic_sign > 0) == (empirical_sign > 0),
          fmt("asymmetry: 1-q-p = %.4f, T_L - T_D = %.4f (z = %.1f)", analytic_sign, empirical_sign, z));

  // Ideal measurements; a period lasts its whole number of steps times dt.
  const double ideal_dt = kPi / 3.0;
  const PeriodStats ps = ideal_period_stats(ideal_dt, 1.0);
  const int chunks = 16;
  const int steps = 250000;
  std::vector<std::vector<double>> runs(chunks);
  parallel_for(chunks, opt.threads, [&](int k) {
    Rng rng = Rng::for_stream(opt.seed ^ 0x1dea1, static_cast<std::uint64_t>(k));
    const IdealPath path = sample_ideal_path(Level::kOne, steps, ideal_dt, 1.0, rng, 1);
    const auto rs = ideal_runs(path.outcomes);
    // Drop the first and last run, which the record truncates.
    for (std::size_t i = 1; i + 1 < rs.size(); ++i) runs[static_cast<std::size_t>(k)].push_back(rs[i].steps * ideal_dt);
  });
  std::vector<double> all;
  for (const auto& v : runs) all.insert(all.end(), v.begin(), v.end());
  const Moments mi = moments(all);
  r.check(std::abs(mi.mean - ps.mean) <= 3.0 * mi.stderr_mean,
          fmt("ideal mean %.4f +- %.4f vs %.4f (%lld runs)", mi.mean, mi.stderr_mean, ps.mean, mi.n));
  r.check(std::abs(mi.std - ps.std) <= 3.0 * mi.stderr_std,
          fmt("ideal std  %.4f +- %.4f vs %.4f", mi.std, mi.stderr_std, ps.std));
}

// --------------------------------------------------------------- criterion 6

void criterion6(Report& r) {
  const AtomParams p{1.0, 50.0, 20.0};
  const double tau_p = 2.0;
  const Epsilons e = epsilons(p);
  const double t_d = p.omega3 * p.omega3 / (p.omega2 * p.omega2 * p.a3);
  const double t_l = p.omega3 * p.omega3 * (p.a3 * p.a3 + 2.0 * p.omega3 * p.omega3) /
                     (p.omega2 * p.omega2 * p.a3 * p.a3 * p.a3);
  const MeanPeriods lim = period_statistics(p, 0.0, tau_p, PeriodMode::kLimit);
  r.check(std::abs(lim.mean_dark - t_d) <= 1e-9 * t_d && std::abs(lim.mean_light - t_l) <= 1e-9 * t_l,
          fmt("limit mode: T_D=%.4f (%.1f)  T_L=%.4f (%.1f)", lim.mean_dark, t_d, lim.mean_light, t_l));

  const double margin = kDefaultRegimeMargin;
  const double dt_min = std::max(margin / p.a3, std::sqrt(margin * e.eps_max) / p.omega2) * (1.0 + 1e-12);
  const double dt_max = 0.5 * kPi / p.omega2;
  const int points = 16;
  bool monotone = true;
  double prev_d = 0.0, prev_l = 0.0;
  MeanPeriods last;
  for (int i = 0; i < points; ++i) {
    const double dt = dt_max + (dt_min - dt_max) * i / (points - 1);
    last = period_statistics(p, dt, tau_p, PeriodMode::kAnalytic);
    if (i > 0) {
      monotone = monotone && std::abs(last.mean_dark - t_d) < std::abs(prev_d - t_d) &&
                 std::abs(last.mean_light - t_l) < std::abs(prev_l - t_l);
    }
    prev_d = last.mean_dark;
    prev_l = last.mean_light;
  }
  r.check(monotone, fmt("T_D, T_L approach the limits monotonically for dt from %.4f down to %.4f", dt_max, dt_min));
  const double rel_d = std::abs(last.mean_dark - t_d) / t_d;
  const double rel_l = std::abs(last.mean_light - t_l) / t_l;
  r.check(rel_d <= 0.2 && rel_l <= 0.2,
          fmt("at dt=%.4f: T_D=%.3f (%.0f%% off), T_L=%.3f (%.0f%% off); bar 20%%", dt_min, last.mean_dark,
              100 * rel_d, last.mean_light, 100 * rel_l));
  if (!(rel_d <= 0.2 && rel_l <= 0.2)) {
    r.note("note: the limits are reached only as dt -> 0, far below the gap gates dt*a3 >= 10 and "
           "(omega2 dt)^2 >= 10 eps_max; the 20% bar cannot hold inside the admissible range");
  }
}

// --------------------------------------------------------------- criterion 7

void criterion7(Report& r) {
  const ItanoPreset pre;
  const DensityMatrix rho0 = pure_state(CVector::basis(3, 0));
  for (int n : {1, 64}) {
    const PulseSchedule s = itano_schedule(n, pre.t_pi, pre.tau_p);
    const MasterResult m = integrate_master(rho0, pre.params, s, default_master_step(pre.params));
    r.check(m.max_trace_drift <= 1e-10, fmt("Itano n=%d: max trace drift %.2e", n, m.max_trace_drift));
  }

  const PulseSchedule s4 = itano_schedule(4, pre.t_pi, pre.tau_p);
  const DensityMatrix a = integrate_master(rho0, pre.params, s4, 1e-3).rho;
  const DensityMatrix b = integrate_master(rho0, pre.params, s4, 5e-4).rho;
  const DensityMatrix c = integrate_master(rho0, pre.params, s4, 2.5e-4).rho;
  const double d1 = max_abs_diff(a, b);
  const double d2 = max_abs_diff(b, c);
  const double ratio = d1 / d2;
  r.check(std::abs(ratio - 16.0) <= 4.0, fmt("step halving 1e-3/5e-4/2.5e-4: diffs %.3e, %.3e, ratio %.2f", d1, d2, ratio));

  Rng rng(0xe16e);
  auto gauss = [&rng]() {
    const double u = rng.uniform_open();
    const double v = rng.uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * kPi * v);
  };
  double worst = 0.0;
  int skipped = 0;
  for (int k = 0; k < 1000; ++k) {
    CMatrix m = CMatrix::identity(3);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m(i, j) = cplx(gauss(), gauss());
    }
    const EigSystem es = eig_with_reciprocal(m);
    if (es.is_degenerate) {
      ++skipped;
      continue;
    }
    worst = std::max(worst, (es.reconstruct() - m).frobenius_norm() / m.frobenius_norm());
  }
  r.check(worst <= 1e-9 && skipped == 0,
          fmt("1000 random complex 3x3: worst relative reconstruction %.2e, degenerate %d", worst, skipped));
}

// --------------------------------------------------------------- criterion 8

void criterion8(Report& r, const AcceptanceOptions& opt) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() /
                       fmt("zenosim-det-%016llx", static_cast<unsigned long long>(stream_seed(opt.seed, 8)));
  fs::create_directories(dir);
  const fs::path cfg = dir / "itano.ini";
  {
    std::ofstream f(cfg);
    f << "[atom]\nomega2 = " << fmt("%.17g", kPi / 256.0) << "\nomega3 = 50\na3 = 20\n\n"
      << "[itano]\nt_pi = 256\ntau_p = 2\nn_values = 1, 2, 4, 8\n\n"
      << "[run]\ntrajectories = 2000\nmaster_seed = 7\n";
  }
  auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  };
  for (const char* format : {"csv", "json"}) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "4"}) {
      const fs::path out = dir / fmt("itano-%s-%s.%s", threads, format, format);
      const std::string cfg_s = cfg.string(), out_s = out.string();
      const char* argv[] = {"zenosim", "--config", cfg_s.c_str(), "--threads", threads,
                            "--format", format,   "--out",        out_s.c_str(), "itano"};
      std::ostringstream sink, errs;
      const int rc = run_cli(static_cast<int>(std::size(argv)), argv, sink, errs);
      if (rc != 0) r.note(fmt("itano exited %d: %s", rc, errs.str().c_str()));
      outputs.push_back(rc == 0 ? slurp(out) : std::string());
    }
    r.check(!outputs[0].empty() && outputs[0] == outputs[1],
            fmt("%s output with --threads 1 and 4: %zu bytes, identical: %s", format, outputs[0].size(),
                outputs[0] == outputs[1] ? "yes" : "no"));
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream& log) {
  struct Entry {
    int id;
    const char* name;
    std::function<void(Report&)> fn;
  };
  const std::vector<Entry> entries{
      {1, "ideal-measurement column", [](Report& r) { criterion1(r); }},
      {2, "finite-pulse ideal column", [](Report& r) { criterion2(r); }},
      {3, "jump ensemble vs master equation", [&opt](Report& r) { criterion3(r, opt); }},
      {4, "first-order correction accuracy", [](Report& r) { criterion4(r); }},
      {5, "period statistics", [&opt](Report& r) { criterion5(r, opt); }},
      {6, "shelving limit trend", [](Report& r) { criterion6(r); }},
      {7, "numerical hygiene", [](Report& r) { criterion7(r); }},
      {8, "thread-count determinism", [&opt](Report& r) { criterion8(r, opt); }},
  };

  std::vector<CriterionResult> results;
  for (const Entry& e : entries) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), e.id) == opt.only.end()) continue;
    Report rep;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.fn(rep);
    } catch (const std::exception& ex) {
      rep.check(false, std::string("exception: ") + ex.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CriterionResult cr{e.id, e.name, rep.pass, {}, secs};
    for (const auto& l : rep.lines) cr.detail += l + "\n";
    log << (cr.pass ? "PASS" : "FAIL") << " criterion " << e.id << ": " << e.name << fmt(" (%.1f s)", secs)
        << "\n";
    for (const auto& l : rep.lines) log << "    " << l << "\n";
    log.flush();
    results.push_back(std::move(cr));
  }
  return results;
}

}  // namespace zenosim
