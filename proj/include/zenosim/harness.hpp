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
#include <iosfwd>
#include <string>
#include <vector>

#include "zenosim/config.hpp"

namespace zenosim {

/// One table cell. Probabilities print with 6 significant digits in CSV.
struct Cell {
  enum class Kind { kEmpty, kInt, kProbability, kReal, kText };
  Kind kind = Kind::kEmpty;
  long long integer = 0;
  double real = 0.0;
  std::string text;

  static Cell empty() { return {}; }
  static Cell of_int(long long v) { return {Kind::kInt, v, 0.0, {}}; }
  static Cell probability(double v) { return {Kind::kProbability, 0, v, {}}; }
  static Cell real_value(double v) { return {Kind::kReal, 0, v, {}}; }
  static Cell of_text(std::string v) { return {Kind::kText, 0, 0.0, std::move(v)}; }
};

/// A result table; every row starts with the config hash.
struct Table {
  std::string config_hash;
  std::vector<std::string> columns;  ///< excluding the leading config_hash column
  std::vector<std::vector<Cell>> rows;
};

std::string render_csv(const Table& t);
std::string render_json(const Table& t);
std::string render(const Table& t, OutputFormat f);

struct ItanoRow {
  int n = 0;
  double proj_dt = 0.0;
  double proj_dt_minus_taup = 0.0;
  double jump_mean = 0.0;
  double jump_stderr = 0.0;
  double bloch = 0.0;
};

std::vector<ItanoRow> compute_itano(const ExperimentConfig& c, int threads);

Table run_itano(const ExperimentConfig& c, int threads);
Table run_periods(const ExperimentConfig& c, int threads);
Table run_paths(const ExperimentConfig& c);
Table run_eigen(const ExperimentConfig& c);
Table run_bloch(const ExperimentConfig& c);

/**
 * Command-line entry point. Subcommands: itano, periods, paths, eigen, bloch,
 * selftest. Returns 0 on success, 1 on invalid input or a failed self-test,
 * 2 on internal or I/O errors.
 */
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zenosim
