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

namespace zenosim {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  int threads = 0;  ///< 0: all cores
  std::uint64_t seed = 20260101;
  /// Run only these criteria (1-based); empty runs all.
  std::vector<int> only;
};

/// Runs the acceptance criteria, printing one PASS/FAIL line per criterion
/// (plus indented detail lines) to `log`.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt, std::ostream& log);

}  // namespace zenosim
