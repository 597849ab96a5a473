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

#include "zenosim/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "zenosim/acceptance.hpp"
#include "zenosim/bloch.hpp"
#include "zenosim/ideal.hpp"
#include "zenosim/jump.hpp"

namespace zenosim {

// ------------------------------------------------------------ rendering

namespace {

std::string format_cell(const Cell& c) {
  char buf[64];
  switch (c.kind) {
    case Cell::Kind::kEmpty: return "";
    case Cell::Kind::kInt: return std::to_string(c.integer);
    case Cell::Kind::kProbability:
      std::snprintf(buf, sizeof buf, "%#.6g", c.real);
      return buf;
    case Cell::Kind::kReal:
      std::snprintf(buf, sizeof buf, "%.10g", c.real);
      return buf;
    case Cell::Kind::kText: return c.text;
  }
  return "";
}

nlohmann::json json_cell(const Cell& c) {
  switch (c.kind) {
    case Cell::Kind::kEmpty: return nullptr;
    case Cell::Kind::kInt: return c.integer;
    case Cell::Kind::kProbability:
    case Cell::Kind::kReal:
      if (!std::isfinite(c.real)) return nullptr;
      return c.real;
    case Cell::Kind::kText: return c.text;
  }
  return nullptr;
}

}  // namespace

std::string render_csv(const Table& t) {
  std::string out = "config_hash";
  for (const auto& col : t.columns) out += "," + col;
  out += "\n";
  for (const auto& row : t.rows) {
    out += t.config_hash;
    for (const auto& cell : row) out += "," + format_cell(cell);
    out += "\n";
  }
  return out;
}

std::string render_json(const Table& t) {
  nlohmann::json doc;
  doc["config_hash"] = t.config_hash;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json r = nlohmann::json::object();
    r["config_hash"] = t.config_hash;
    for (std::size_t i = 0; i < t.columns.size() && i < row.size(); ++i) r[t.columns[i]] = json_cell(row[i]);
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

std::string render(const Table& t, OutputFormat f) {
  return f == OutputFormat::kCsv ? render_csv(t) : render_json(t);
}

// ----------------------------------------------------------- experiments

std::vector<ItanoRow> compute_itano(const ExperimentConfig& c, int threads) {
  c.validate_for(Experiment::kItanoTable);
  std::vector<ItanoRow> rows;
  const double omega2 = c.params.omega2;
  for (int n : c.itano_n) {
    ItanoRow row;
    row.n = n;
    const double interval = c.t_pi / n;
    row.proj_dt = cook_population(n, interval, omega2);
    row.proj_dt_minus_taup = cook_population(n, interval - c.itano_tau_p, omega2);

    const PulseSchedule s = itano_schedule(n, c.t_pi, c.itano_tau_p, c.itano_placement);
    EnsembleOptions opt;
    opt.trajectories = c.trajectories;
    opt.master_seed = stream_seed(c.master_seed, static_cast<std::uint64_t>(n));
    opt.threads = threads;
    const EnsembleResult ens = run_ensemble(CVector::basis(3, 0), c.params, s, opt);
    row.jump_mean = ens.mean_p2;
    row.jump_stderr = ens.stderr_p2;
    row.bloch = itano_bloch_population(n, c.params, c.t_pi, c.itano_tau_p, c.step, c.itano_placement);
    rows.push_back(row);
  }
  return rows;
}

Table run_itano(const ExperimentConfig& c, int threads) {
  Table t;
  t.config_hash = config_hash(c);
  t.columns = {"n", "proj_dt", "proj_dt_minus_taup", "quantum_jump_mc", "quantum_jump_stderr", "bloch"};
  for (const ItanoRow& r : compute_itano(c, threads)) {
    t.rows.push_back({Cell::of_int(r.n), Cell::probability(r.proj_dt), Cell::probability(r.proj_dt_minus_taup),
                      Cell::probability(r.jump_mean), Cell::probability(r.jump_stderr),
                      Cell::probability(r.bloch)});
  }
  return t;
}

Table run_periods(const ExperimentConfig& c, int threads) {
  c.validate_for(Experiment::kSingleAtomPeriods);
  const PulseSchedule& s = c.schedule;
  const TrajectorySimulator sim(c.params, s);

  std::vector<std::vector<PeriodRecord>> per_traj(static_cast<std::size_t>(c.trajectories));
  parallel_for(c.trajectories, threads, [&](int k) {
    const Trajectory tr = sim.run(CVector::basis(3, 0), stream_seed(c.master_seed, static_cast<std::uint64_t>(k)));
    per_traj[static_cast<std::size_t>(k)] = extract_periods(tr, s);
  });

  Table t;
  t.config_hash = config_hash(c);
  t.columns = {"record", "kind", "pulse_count", "duration", "stderr", "std"};
  auto kind_name = [](PeriodKind k) { return k == PeriodKind::kLight ? "light" : "dark"; };

  struct Acc {
    long long count = 0;
    double sum = 0.0, sum2 = 0.0;
  } acc[2];
  for (const auto& recs : per_traj) {
    for (const PeriodRecord& r : recs) {
      t.rows.push_back({Cell::of_text("period"), Cell::of_text(kind_name(r.kind)), Cell::of_int(r.pulse_count),
                        Cell::real_value(r.duration), Cell::empty(), Cell::empty()});
      Acc& a = acc[r.kind == PeriodKind::kLight ? 0 : 1];
      ++a.count;
      a.sum += r.duration;
      a.sum2 += r.duration * r.duration;
    }
  }
  for (int i = 0; i < 2; ++i) {
    const Acc& a = acc[i];
    const char* kind = i == 0 ? "light" : "dark";
    if (a.count == 0) {
      t.rows.push_back({Cell::of_text("summary_mc"), Cell::of_text(kind), Cell::of_int(0), Cell::empty(),
                        Cell::empty(), Cell::empty()});
      continue;
    }
    const double n = static_cast<double>(a.count);
    const double mean = a.sum / n;
    const double var = a.count > 1 ? std::max(0.0, (a.sum2 - n * mean * mean) / (n - 1.0)) : 0.0;
    t.rows.push_back({Cell::of_text("summary_mc"), Cell::of_text(kind), Cell::of_int(a.count),
                      Cell::real_value(mean), Cell::real_value(std::sqrt(var / n)),
                      Cell::real_value(std::sqrt(var))});
  }

  try {
    const MeanPeriods an = period_statistics(c.params, s.dt, s.tau_p, PeriodMode::kAnalytic, c.margin);
    t.rows.push_back({Cell::of_text("summary_analytic"), Cell::of_text("light"), Cell::empty(),
                      Cell::real_value(an.mean_light), Cell::empty(), Cell::empty()});
    t.rows.push_back({Cell::of_text("summary_analytic"), Cell::of_text("dark"), Cell::empty(),
                      Cell::real_value(an.mean_dark), Cell::empty(), Cell::empty()});
  } catch (const std::exception& ex) {
    std::cerr << "warning: analytic period means unavailable: " << ex.what() << "\n";
    for (const char* kind : {"light", "dark"}) {
      t.rows.push_back({Cell::of_text("summary_analytic"), Cell::of_text(kind), Cell::empty(), Cell::empty(),
                        Cell::empty(), Cell::empty()});
    }
  }
  const MeanPeriods lim = period_statistics(c.params, s.dt, s.tau_p, PeriodMode::kLimit, c.margin);
  t.rows.push_back({Cell::of_text("summary_limit"), Cell::of_text("light"), Cell::empty(),
                    Cell::real_value(lim.mean_light), Cell::empty(), Cell::empty()});
  t.rows.push_back({Cell::of_text("summary_limit"), Cell::of_text("dark"), Cell::empty(),
                    Cell::real_value(lim.mean_dark), Cell::empty(), Cell::empty()});
  try {
    const PeriodStats ideal = ideal_period_stats(s.dt, c.params.omega2);
    for (const char* kind : {"light", "dark"}) {
      t.rows.push_back({Cell::of_text("summary_ideal"), Cell::of_text(kind), Cell::empty(),
                        Cell::real_value(ideal.mean), Cell::empty(), Cell::real_value(ideal.std)});
    }
  } catch (const DivergentPeriod&) {
    for (const char* kind : {"light", "dark"}) {
      t.rows.push_back({Cell::of_text("summary_ideal"), Cell::of_text(kind), Cell::empty(), Cell::empty(),
                        Cell::empty(), Cell::empty()});
    }
  }
  return t;
}

Table run_paths(const ExperimentConfig& c) {
  c.validate_for(Experiment::kTrajectoryPaths);
  Table t;
  t.config_hash = config_hash(c);
  t.columns = {"path", "time", "p2", "light"};
  for (int k = 0; k < c.trajectories; ++k) {
    Rng rng = Rng::for_stream(c.master_seed, static_cast<std::uint64_t>(k));
    const IdealPath path = sample_ideal_path(Level::kOne, c.schedule.n_pulses, c.schedule.dt, c.params.omega2, rng);
    // Latest measured level: |1> before the first measurement.
    const int per_step = static_cast<int>((path.population_trace.size() - 1) / path.outcomes.size());
    for (std::size_t i = 0; i < path.population_trace.size(); ++i) {
      const std::size_t measured = i / static_cast<std::size_t>(per_step);
      const Level last = measured == 0 ? Level::kOne : path.outcomes[measured - 1];
      const auto& smp = path.population_trace[i];
      t.rows.push_back({Cell::of_int(k), Cell::real_value(smp.time), Cell::probability(smp.p2),
                        Cell::of_int(last == Level::kOne ? 1 : 0)});
    }
  }
  return t;
}

Table run_eigen(const ExperimentConfig& c) {
  c.validate_for(Experiment::kEigenCheck);
  const PerturbativeEigen pert = perturbative_eigensystem(c.params);
  const EigSystem num = eig_with_reciprocal(build_h_cond(c.params, true, true));
  // Index 0 is the least damped mode.
  const CVector& v = num.right_vectors[0];
  const cplx scale = v[1];
  const CVector v2 = (1.0 / scale) * v;
  const CVector w2 = std::conj(scale) * num.reciprocal_vectors[0];
  const double lambda_num = -num.eigenvalues[0].imag();

  Table t;
  t.config_hash = config_hash(c);
  t.columns = {"quantity", "perturbative", "numeric", "abs_diff"};
  auto add = [&t](const char* name, double a, double b) {
    t.rows.push_back({Cell::of_text(name), Cell::real_value(a), Cell::real_value(b), Cell::real_value(std::abs(a - b))});
  };
  const Epsilons e = epsilons(c.params);
  add("lambda2", pert.lambda2, lambda_num);
  add("lambda2_real_part", 0.0, num.eigenvalues[0].real());
  add("v2_1_re", pert.v2[0].real(), v2[0].real());
  add("v2_1_im", pert.v2[0].imag(), v2[0].imag());
  add("v2_3_re", pert.v2[2].real(), v2[2].real());
  add("v2_3_im", pert.v2[2].imag(), v2[2].imag());
  add("w2_1_re", pert.w2[0].real(), w2[0].real());
  add("w2_1_im", pert.w2[0].imag(), w2[0].imag());
  add("w2_2_re", pert.w2[1].real(), w2[1].real());
  add("w2_3_re", pert.w2[2].real(), w2[2].real());
  add("w2_3_im", pert.w2[2].imag(), w2[2].imag());
  add("eps_a", e.eps_a, e.eps_a);
  add("eps_r", e.eps_r, e.eps_r);
  add("eps_p", e.eps_p, e.eps_p);
  return t;
}

Table run_bloch(const ExperimentConfig& c) {
  c.validate_for(Experiment::kBlochCheck);
  const MasterResult res =
      integrate_master(pure_state(CVector::basis(3, 0)), c.params, c.schedule, c.step, /*record_samples=*/true);
  Table t;
  t.config_hash = config_hash(c);
  t.columns = {"time", "rho11", "rho22", "rho33", "trace", "rho12_re", "rho12_im"};
  for (const MasterSample& smp : res.samples) {
    const DensityMatrix& r = smp.rho;
    t.rows.push_back({Cell::real_value(smp.time), Cell::probability(r(0, 0).real()),
                      Cell::probability(r(1, 1).real()), Cell::probability(r(2, 2).real()),
                      Cell::real_value(r.trace().real()), Cell::real_value(r(0, 1).real()),
                      Cell::real_value(r(0, 1).imag())});
  }
  return t;
}

// ------------------------------------------------------------------ CLI

namespace {

void write_output(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open output file: " + path);
  f << text;
  f.close();
  if (!f) throw IoError("failed writing output file: " + path);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pulse-measurement simulator: ideal projections, quantum jumps and Bloch equations"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_path;
  std::string format;
  long long seed = -1;
  int threads = -1;
  app.add_option("--config", config_path, "Configuration file (default: built-in preset)");
  app.add_option("--seed", seed, "Master seed override")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out_path, "Output file (default: stdout)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);

  auto* itano = app.add_subcommand("itano", "Population of |2> after the pi pulse for n pulses");
  auto* periods = app.add_subcommand("periods", "Light/dark period statistics of a single atom");
  auto* paths = app.add_subcommand("paths", "Ideal-measurement population paths and telegraph signal");
  auto* eigen = app.add_subcommand("eigen", "First-order versus numeric slow eigentriple");
  auto* bloch = app.add_subcommand("bloch", "Master-equation populations over the schedule");
  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (threads < 0) {
      if (const char* env = std::getenv("ZENOSIM_THREADS")) {
        try {
          threads = std::stoi(env);
        } catch (const std::exception&) {
          throw ValidationError("ZENOSIM_THREADS must be an integer");
        }
        if (threads < 0) throw ValidationError("ZENOSIM_THREADS must be >= 0");
      }
    }
    if (out_path.empty()) {
      if (const char* env = std::getenv("ZENOSIM_OUT")) out_path = env;
    }

    if (selftest->parsed()) {
      AcceptanceOptions opt;
      opt.threads = threads < 0 ? 0 : threads;
      const auto results = run_acceptance(opt, out);
      bool ok = true;
      for (const auto& r : results) ok = ok && r.pass;
      return ok ? 0 : 1;
    }

    ExperimentConfig cfg =
        config_path.empty() ? parse_config(preset_config_text()) : load_config(config_path);
    if (seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(seed);
    if (!format.empty()) cfg.output_format = format == "json" ? OutputFormat::kJson : OutputFormat::kCsv;
    if (!out_path.empty()) cfg.output_path = out_path;
    const int nthreads = threads >= 0 ? threads : cfg.threads;

    Experiment wanted = Experiment::kItanoTable;
    if (periods->parsed()) wanted = Experiment::kSingleAtomPeriods;
    if (paths->parsed()) wanted = Experiment::kTrajectoryPaths;
    if (eigen->parsed()) wanted = Experiment::kEigenCheck;
    if (bloch->parsed()) wanted = Experiment::kBlochCheck;
    (void)itano;
    if (cfg.experiment && *cfg.experiment != wanted) {
      throw ValidationError("config experiment '" + std::string(to_string(*cfg.experiment)) +
                            "' does not match the subcommand");
    }
    cfg.experiment = wanted;

    Table table;
    switch (wanted) {
      case Experiment::kItanoTable: table = run_itano(cfg, nthreads); break;
      case Experiment::kSingleAtomPeriods: table = run_periods(cfg, nthreads); break;
      case Experiment::kTrajectoryPaths: table = run_paths(cfg); break;
      case Experiment::kEigenCheck: table = run_eigen(cfg); break;
      case Experiment::kBlochCheck: table = run_bloch(cfg); break;
    }
    write_output(render(table, cfg.output_format), cfg.output_path, out);
    return 0;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace zenosim
