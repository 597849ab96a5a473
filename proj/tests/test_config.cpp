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

#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "zenosim/config.hpp"

using namespace zenosim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<fs::path> corpus(const char* sub) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(fs::path(ZENOSIM_TEST_DATA) / "configs" / sub)) {
    if (e.path().extension() == ".ini") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("config: minimal document gets defaults") {
  const ExperimentConfig c = parse_config("[atom]\nomega2 = 1\nomega3 = 50\na3 = 20\n");
  CHECK(c.params.omega2 == 1.0);
  CHECK(c.params.omega3 == 50.0);
  CHECK(c.params.a3 == 20.0);
  CHECK(c.schedule.tau_p == doctest::Approx(2.0));
  CHECK(c.schedule.tau_tr == doctest::Approx(2.0));
  CHECK(c.schedule.n_pulses == 1000);
  CHECK(c.step == doctest::Approx(0.02 / 50));
  CHECK(c.t_pi == doctest::Approx(3.141592653589793));
  CHECK(c.itano_tau_p == doctest::Approx(c.t_pi * 2.4 / 256));
  CHECK(c.itano_n == std::vector<int>{1, 2, 4, 8, 16, 32, 64});
  CHECK_FALSE(c.experiment.has_value());
  CHECK(c.output_format == OutputFormat::kCsv);
}

TEST_CASE("config: preset text parses") {
  const ExperimentConfig c = parse_config(preset_config_text());
  CHECK(c.params.omega3 == 50.0);
}

TEST_CASE("config: duplicate key and zero pulses") {
  CHECK_THROWS_AS(parse_config("[atom]\nomega2 = 1\nomega2 = 1\nomega3 = 50\na3 = 20\n"), ParseError);
  CHECK_THROWS_AS(parse_config("[atom]\nomega2 = 1\nomega3 = 50\na3 = 20\n[schedule]\nn_pulses = 0\n"),
                  ValidationError);
}

TEST_CASE("config: parse errors carry line and column") {
  try {
    parse_config("[atom]\nomega2 = 1\n  omega3 = x\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 12);
  }
}

TEST_CASE("config: golden corpus, valid files") {
  const auto files = corpus("valid");
  REQUIRE(files.size() >= 5);
  for (const auto& f : files) {
    CAPTURE(f.filename().string());
    CHECK_NOTHROW(load_config(f.string()));
  }
  const ExperimentConfig full = load_config((fs::path(ZENOSIM_TEST_DATA) / "configs/valid/full.ini").string());
  CHECK(full.experiment == Experiment::kSingleAtomPeriods);
  CHECK(full.trajectories == 64);
  CHECK(full.master_seed == 12345u);
  CHECK(full.output_path == "out/periods.csv");
  CHECK(full.threads == 2);
  CHECK(full.schedule.dt == 1.5);
  CHECK(full.itano_n == std::vector<int>{1, 2, 4});
  CHECK(full.itano_placement == PulsePlacement::kPulseLast);
  const ExperimentConfig spaced =
      load_config((fs::path(ZENOSIM_TEST_DATA) / "configs/valid/comments_and_spacing.ini").string());
  CHECK_FALSE(spaced.schedule.weak_on_during_pulse);
  CHECK(spaced.schedule.placement == PulsePlacement::kPulseLast);
  CHECK(spaced.params.omega3 == 50.0);
}

TEST_CASE("config: golden corpus, invalid files fail as annotated") {
  const auto files = corpus("invalid");
  REQUIRE(files.size() >= 20);
  const std::regex expect_re(R"(# expect: (ParseError (\d+):(\d+)|ValidationError))");
  for (const auto& f : files) {
    CAPTURE(f.filename().string());
    const std::string text = slurp(f);
    std::smatch m;
    REQUIRE(std::regex_search(text, m, expect_re));
    if (m[2].matched) {
      try {
        parse_config(text);
        FAIL("accepted");
      } catch (const ParseError& e) {
        CHECK(e.line() == std::stoi(m[2]));
        CHECK(e.column() == std::stoi(m[3]));
      }
    } else {
      CHECK_THROWS_AS(parse_config(text), ValidationError);
    }
  }
}

TEST_CASE("config: missing file is an I/O error") {
  CHECK_THROWS_AS(load_config("/nonexistent/zenosim.ini"), IoError);
}

TEST_CASE("config: hash follows the canonical form") {
  const ExperimentConfig a = parse_config("[atom]\nomega2 = 1\nomega3 = 50\na3 = 20\n");
  const ExperimentConfig b = parse_config("# same\n[atom]\na3=20.0\nomega3=5e1\nomega2=1\n");
  CHECK(canonical_config(a) == canonical_config(b));
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  const ExperimentConfig c = parse_config("[atom]\nomega2 = 1\nomega3 = 50\na3 = 20\n[run]\nmaster_seed = 2\n");
  CHECK(config_hash(a) != config_hash(c));
  // Output destination and thread count do not affect results, so not the hash.
  const ExperimentConfig d =
      parse_config("[atom]\nomega2 = 1\nomega3 = 50\na3 = 20\n[run]\nthreads = 3\noutput_path = x.csv\n");
  CHECK(config_hash(a) == config_hash(d));
}
