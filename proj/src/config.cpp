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

#include "zenosim/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "zenosim/bloch.hpp"

namespace zenosim {

ParseError::ParseError(int line, int column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         message),
      line_(line),
      column_(column) {}

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::kItanoTable: return "itano_table";
    case Experiment::kSingleAtomPeriods: return "single_atom_periods";
    case Experiment::kTrajectoryPaths: return "trajectory_paths";
    case Experiment::kEigenCheck: return "eigen_check";
    case Experiment::kBlochCheck: return "bloch_check";
  }
  return "unknown";
}

std::optional<Experiment> experiment_from_string(std::string_view s) {
  for (Experiment e : {Experiment::kItanoTable, Experiment::kSingleAtomPeriods, Experiment::kTrajectoryPaths,
                       Experiment::kEigenCheck, Experiment::kBlochCheck}) {
    if (to_string(e) == s) return e;
  }
  return std::nullopt;
}

namespace {

struct RawValue {
  std::string text;
  bool quoted = false;
  int line = 0;
  int column = 0;
};

using Section = std::map<std::string, RawValue>;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"atom", {"omega2", "omega3", "a3"}},
      {"schedule",
       {"tau_p", "dt", "n_pulses", "tau_tr", "weak_on_during_pulse", "pi_pulse_total", "placement"}},
      {"run",
       {"experiment", "trajectories", "master_seed", "output_path", "output_format", "threads", "margin",
        "step"}},
      {"itano", {"t_pi", "tau_p", "n_values", "placement"}},
  };
  return keys;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

std::map<std::string, Section> tokenize(std::string_view text) {
  std::map<std::string, Section> doc;
  std::set<std::string> seen_sections;
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    pos = end + 1;

    std::size_t i = 0;
    auto col = [&i]() { return static_cast<int>(i) + 1; };
    while (i < line.size() && is_space(line[i])) ++i;
    if (i == line.size() || line[i] == '#' || line[i] == ';') {
      if (end == text.size()) break;
      continue;
    }

    if (line[i] == '[') {
      ++i;
      const std::size_t start = i;
      while (i < line.size() && is_name_char(line[i])) ++i;
      const std::string name(line.substr(start, i - start));
      if (name.empty() || i >= line.size() || line[i] != ']') {
        throw ParseError(line_no, col(), "malformed section header");
      }
      if (!known_keys().count(name)) {
        throw ParseError(line_no, static_cast<int>(start) + 1, "unknown section [" + name + "]");
      }
      if (!seen_sections.insert(name).second) {
        throw ParseError(line_no, static_cast<int>(start) + 1, "duplicate section [" + name + "]");
      }
      ++i;
      while (i < line.size() && is_space(line[i])) ++i;
      if (i < line.size() && line[i] != '#' && line[i] != ';') {
        throw ParseError(line_no, col(), "unexpected text after section header");
      }
      current = name;
      doc[current];
    } else {
      const std::size_t key_start = i;
      while (i < line.size() && is_name_char(line[i])) ++i;
      const std::string key(line.substr(key_start, i - key_start));
      const int key_col = static_cast<int>(key_start) + 1;
      if (key.empty()) throw ParseError(line_no, col(), "expected a key");
      if (current.empty()) throw ParseError(line_no, key_col, "key '" + key + "' outside of any section");
      if (!known_keys().at(current).count(key)) {
        throw ParseError(line_no, key_col, "unknown key '" + key + "' in [" + current + "]");
      }
      while (i < line.size() && is_space(line[i])) ++i;
      if (i >= line.size() || line[i] != '=') throw ParseError(line_no, col(), "expected '='");
      ++i;
      while (i < line.size() && is_space(line[i])) ++i;

      RawValue v;
      v.line = line_no;
      v.column = col();
      if (i < line.size() && line[i] == '"') {
        const std::size_t close = line.find('"', i + 1);
        if (close == std::string_view::npos) throw ParseError(line_no, col(), "unterminated string");
        v.text = std::string(line.substr(i + 1, close - i - 1));
        v.quoted = true;
        i = close + 1;
      } else {
        const std::size_t start = i;
        while (i < line.size() && line[i] != '#' && line[i] != ';') ++i;
        std::size_t stop = i;
        while (stop > start && is_space(line[stop - 1])) --stop;
        v.text = std::string(line.substr(start, stop - start));
        if (v.text.empty()) throw ParseError(line_no, v.column, "missing value for '" + key + "'");
      }
      while (i < line.size() && is_space(line[i])) ++i;
      if (i < line.size() && line[i] != '#' && line[i] != ';') {
        throw ParseError(line_no, col(), "unexpected text after value");
      }
      auto& section = doc[current];
      if (section.count(key)) {
        throw ParseError(line_no, key_col, "duplicate key '" + key + "' in [" + current + "]");
      }
      section.emplace(key, std::move(v));
    }
    if (end == text.size()) break;
  }
  return doc;
}

double as_double(const RawValue& v) {
  double out = 0.0;
  const char* b = v.text.data();
  const char* e = b + v.text.size();
  const auto res = std::from_chars(b, e, out);
  if (v.quoted || res.ec != std::errc() || res.ptr != e || !std::isfinite(out)) {
    throw ParseError(v.line, v.column, "expected a number, got '" + v.text + "'");
  }
  return out;
}

long long as_integer(const RawValue& v) {
  long long out = 0;
  const char* b = v.text.data();
  const char* e = b + v.text.size();
  const auto res = std::from_chars(b, e, out);
  if (v.quoted || res.ec != std::errc() || res.ptr != e) {
    throw ParseError(v.line, v.column, "expected an integer, got '" + v.text + "'");
  }
  return out;
}

std::uint64_t as_unsigned(const RawValue& v) {
  std::uint64_t out = 0;
  const char* b = v.text.data();
  const char* e = b + v.text.size();
  const auto res = std::from_chars(b, e, out);
  if (v.quoted || res.ec != std::errc() || res.ptr != e) {
    throw ParseError(v.line, v.column, "expected a non-negative integer, got '" + v.text + "'");
  }
  return out;
}

int as_int(const RawValue& v) {
  const long long x = as_integer(v);
  if (x < -2147483647LL || x > 2147483647LL) throw ParseError(v.line, v.column, "integer out of range");
  return static_cast<int>(x);
}

bool as_bool(const RawValue& v) {
  if (!v.quoted && v.text == "true") return true;
  if (!v.quoted && v.text == "false") return false;
  throw ParseError(v.line, v.column, "expected true or false, got '" + v.text + "'");
}

std::vector<int> as_int_list(const RawValue& v) {
  std::vector<int> out;
  std::stringstream ss(v.text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ParseError(v.line, v.column, "empty list element");
    RawValue part = v;
    part.text = item.substr(b, e - b + 1);
    out.push_back(as_int(part));
  }
  if (out.empty()) throw ParseError(v.line, v.column, "empty list");
  return out;
}

PulsePlacement as_placement(const RawValue& v) {
  if (v.text == "pulse_first" || v.text == "start") return PulsePlacement::kPulseFirst;
  if (v.text == "pulse_last" || v.text == "end") return PulsePlacement::kPulseLast;
  throw ParseError(v.line, v.column, "placement must be pulse_first/start or pulse_last/end");
}

const RawValue* find(const std::map<std::string, Section>& doc, const std::string& section,
                     const std::string& key) {
  const auto s = doc.find(section);
  if (s == doc.end()) return nullptr;
  const auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

void rethrow_as_validation(const std::exception& e) { throw ValidationError(e.what()); }

}  // namespace

void ExperimentConfig::validate_for(Experiment e) const {
  try {
    params.validate();
    schedule.validate();
  } catch (const std::invalid_argument& ex) {
    rethrow_as_validation(ex);
  }
  if (trajectories < 1) throw ValidationError("trajectories must be >= 1");
  if (threads < 0) throw ValidationError("threads must be >= 0");
  if (!(margin > 0.0)) throw ValidationError("margin must be > 0");
  if (!(step > 0.0) || step > max_master_step(params) * (1.0 + 1e-12)) {
    throw ValidationError("step must lie in (0, 0.1 / max rate]");
  }
  switch (e) {
    case Experiment::kItanoTable:
      if (!(t_pi > 0.0)) throw ValidationError("itano t_pi must be > 0 (set omega2 > 0 or t_pi)");
      if (!(itano_tau_p >= 0.0)) throw ValidationError("itano tau_p must be >= 0");
      for (int n : itano_n) {
        if (n < 1) throw ValidationError("itano n_values must be >= 1");
        if (!(n * itano_tau_p < t_pi)) {
          throw ValidationError("itano n * tau_p must be shorter than t_pi (n = " + std::to_string(n) + ")");
        }
      }
      break;
    case Experiment::kSingleAtomPeriods:
      if (!(schedule.tau_p > 0.0) || !(schedule.dt > 0.0)) {
        throw ValidationError("periods need tau_p > 0 and dt > 0");
      }
      if (schedule.n_pulses < 3) throw ValidationError("periods need n_pulses >= 3");
      if (schedule.pi_pulse_total) throw ValidationError("periods use the continuous single-atom layout");
      break;
    case Experiment::kTrajectoryPaths:
      if (!(schedule.dt > 0.0)) throw ValidationError("paths need dt > 0");
      break;
    case Experiment::kEigenCheck:
      if (!(epsilons(params).eps_max < 0.2)) throw ValidationError("eigen check needs eps_max < 0.2");
      break;
    case Experiment::kBlochCheck:
      break;
  }
}

ExperimentConfig parse_config(std::string_view text) {
  const auto doc = tokenize(text);
  ExperimentConfig c;

  // type errors on present keys outrank a missing key
  double* slots[] = {&c.params.omega2, &c.params.omega3, &c.params.a3};
  const char* keys[] = {"omega2", "omega3", "a3"};
  for (int k = 0; k < 3; ++k)
    if (const auto* v = find(doc, "atom", keys[k])) *slots[k] = as_double(*v);
  for (const char* key : keys) {
    if (!find(doc, "atom", key)) throw ValidationError(std::string("missing required key [atom] ") + key);
  }
  try {
    c.params.validate();
  } catch (const std::invalid_argument& ex) {
    rethrow_as_validation(ex);
  }
  const AtomParams& p = c.params;

  // Schedule; defaults put the preset inside the perturbative regime.
  auto& s = c.schedule;
  s.tau_p = 40.0 * std::max(1.0 / p.a3, p.a3 / (p.omega3 * p.omega3));
  s.dt = p.omega2 > 0.0 ? 0.5 * std::numbers::pi / p.omega2 : 1.0;
  s.n_pulses = 1000;
  s.tau_tr = default_transient(p);
  s.weak_on_during_pulse = true;
  s.placement = PulsePlacement::kPulseFirst;
  if (auto v = find(doc, "schedule", "tau_p")) s.tau_p = as_double(*v);
  if (auto v = find(doc, "schedule", "dt")) s.dt = as_double(*v);
  if (auto v = find(doc, "schedule", "n_pulses")) s.n_pulses = as_int(*v);
  if (auto v = find(doc, "schedule", "tau_tr")) s.tau_tr = as_double(*v);
  if (auto v = find(doc, "schedule", "weak_on_during_pulse")) s.weak_on_during_pulse = as_bool(*v);
  if (auto v = find(doc, "schedule", "pi_pulse_total")) s.pi_pulse_total = as_double(*v);
  if (auto v = find(doc, "schedule", "placement")) s.placement = as_placement(*v);

  if (auto v = find(doc, "run", "experiment")) {
    c.experiment = experiment_from_string(v->text);
    if (!c.experiment) throw ParseError(v->line, v->column, "unknown experiment '" + v->text + "'");
  }
  if (auto v = find(doc, "run", "trajectories")) c.trajectories = as_int(*v);
  if (auto v = find(doc, "run", "master_seed")) c.master_seed = as_unsigned(*v);
  if (auto v = find(doc, "run", "output_path")) c.output_path = v->text;
  if (auto v = find(doc, "run", "output_format")) {
    if (v->text == "csv") {
      c.output_format = OutputFormat::kCsv;
    } else if (v->text == "json") {
      c.output_format = OutputFormat::kJson;
    } else {
      throw ParseError(v->line, v->column, "output_format must be csv or json");
    }
  }
  if (auto v = find(doc, "run", "threads")) c.threads = as_int(*v);
  if (auto v = find(doc, "run", "margin")) c.margin = as_double(*v);
  c.step = default_master_step(p);
  if (auto v = find(doc, "run", "step")) c.step = as_double(*v);

  c.t_pi = p.omega2 > 0.0 ? std::numbers::pi / p.omega2 : 0.0;
  if (auto v = find(doc, "itano", "t_pi")) c.t_pi = as_double(*v);
  c.itano_tau_p = c.t_pi * 2.4 / 256.0;
  if (auto v = find(doc, "itano", "tau_p")) c.itano_tau_p = as_double(*v);
  if (auto v = find(doc, "itano", "n_values")) c.itano_n = as_int_list(*v);
  if (auto v = find(doc, "itano", "placement")) c.itano_placement = as_placement(*v);

  if (c.experiment) {
    c.validate_for(*c.experiment);
  } else {
    c.validate_for(Experiment::kBlochCheck);
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string_view preset_config_text() {
  return "[atom]\n"
         "omega2 = 1\n"
         "omega3 = 50\n"
         "a3 = 20\n";
}

std::string canonical_config(const ExperimentConfig& c) {
  auto num = [](double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "atom.omega2=" << num(c.params.omega2) << "\n"
     << "atom.omega3=" << num(c.params.omega3) << "\n"
     << "atom.a3=" << num(c.params.a3) << "\n"
     << "schedule.tau_p=" << num(c.schedule.tau_p) << "\n"
     << "schedule.dt=" << num(c.schedule.dt) << "\n"
     << "schedule.n_pulses=" << c.schedule.n_pulses << "\n"
     << "schedule.tau_tr=" << num(c.schedule.tau_tr) << "\n"
     << "schedule.weak_on_during_pulse=" << (c.schedule.weak_on_during_pulse ? "true" : "false") << "\n"
     << "schedule.pi_pulse_total="
     << (c.schedule.pi_pulse_total ? num(*c.schedule.pi_pulse_total) : std::string("none")) << "\n"
     << "schedule.placement="
     << (c.schedule.placement == PulsePlacement::kPulseFirst ? "pulse_first" : "pulse_last") << "\n"
     << "run.experiment=" << (c.experiment ? to_string(*c.experiment) : std::string_view("none")) << "\n"
     << "run.trajectories=" << c.trajectories << "\n"
     << "run.master_seed=" << c.master_seed << "\n"
     << "run.margin=" << num(c.margin) << "\n"
     << "run.step=" << num(c.step) << "\n"
     << "itano.t_pi=" << num(c.t_pi) << "\n"
     << "itano.tau_p=" << num(c.itano_tau_p) << "\n"
     << "itano.n_values=";
  for (std::size_t i = 0; i < c.itano_n.size(); ++i) os << (i ? "," : "") << c.itano_n[i];
  os << "\n"
     << "itano.placement=" << (c.itano_placement == PulsePlacement::kPulseFirst ? "pulse_first" : "pulse_last")
     << "\n";
  return os.str();
}

std::string config_hash(const ExperimentConfig& c) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_config(c)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace zenosim
