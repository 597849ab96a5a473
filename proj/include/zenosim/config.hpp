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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "zenosim/model.hpp"

namespace zenosim {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment {
  kItanoTable,
  kSingleAtomPeriods,
  kTrajectoryPaths,
  kEigenCheck,
  kBlochCheck,
};

enum class OutputFormat { kCsv, kJson };

std::string_view to_string(Experiment e);
std::optional<Experiment> experiment_from_string(std::string_view s);

struct ExperimentConfig {
  AtomParams params;
  PulseSchedule schedule;
  std::optional<Experiment> experiment;
  int trajectories = 1000;
  std::uint64_t master_seed = 1;
  std::string output_path;
  OutputFormat output_format = OutputFormat::kCsv;
  int threads = 0;  ///< 0: all cores
  double margin = kDefaultRegimeMargin;
  double step = 0.0;  ///< master-equation step; defaults to 0.02 / max rate

  // Itano table.
  double t_pi = 0.0;          ///< defaults to pi / omega2
  double itano_tau_p = 0.0;   ///< defaults to t_pi * 2.4 / 256
  std::vector<int> itano_n{1, 2, 4, 8, 16, 32, 64};
  PulsePlacement itano_placement = PulsePlacement::kPulseLast;

  /// Checks invariants that depend on the experiment. Throws ValidationError.
  void validate_for(Experiment e) const;
};

/**
 * Parses the key-value configuration grammar:
 *
 *     # comment            (also ';')
 *     [section]
 *     key = value          # trailing comments allowed
 *
 * Values are numbers, `true`/`false`, bare words, double-quoted strings or
 * comma-separated integer lists. Sections: atom, schedule, run, itano.
 * Unknown sections or keys, duplicate keys and malformed values raise
 * ParseError with the 1-based line and column; violated invariants raise
 * ValidationError after defaults are applied.
 */
ExperimentConfig parse_config(std::string_view text);

ExperimentConfig load_config(const std::string& path);

/// Preset document: omega2 = 1, omega3 = 50, a3 = 20.
std::string_view preset_config_text();

/// Canonical, defaults-resolved rendering of everything that affects results.
std::string canonical_config(const ExperimentConfig& c);

/// 16 hex digits of FNV-1a/64 over canonical_config.
std::string config_hash(const ExperimentConfig& c);

}  // namespace zenosim
