// Copyright 2026 The zxrl Authors
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

#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <sstream>
#include <string>
#include <string_view>

#include "zxrl/env.hpp"
#include "zxrl/error.hpp"
#include "zxrl/nn.hpp"
#include "zxrl/ppo.hpp"

namespace zxrl {

/// Everything a training run needs, read from flat `key = value` text.
struct RunConfig {
  PpoConfig ppo;
  EnvConfig env;
  nn::NetConfig net;
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& v, const std::string& where) {
  T out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) throw ParseError(where + ": bad number '" + v + "'");
  return out;
}

inline bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError(where + ": expected true or false, got '" + v + "'");
}

inline GateSet parse_gate_set(const std::string& v, const std::string& where) {
  if (v == "clifford") return GateSet::Clifford;
  if (v == "cliffordt") return GateSet::CliffordT;
  throw ParseError(where + ": gate_set must be clifford or cliffordt");
}

inline const char* gate_set_name(GateSet s) { return s == GateSet::Clifford ? "clifford" : "cliffordt"; }

/// Reads `normalizer_Q_G` keys; returns false for other keys.
inline bool parse_normalizer(const std::string& key, const std::string& v, const std::string& where,
                             NormalizerTable& table) {
  constexpr std::string_view prefix = "normalizer_";
  if (key.rfind(prefix, 0) != 0) return false;
  const std::string rest = key.substr(prefix.size());
  const auto us = rest.find('_');
  if (us == std::string::npos) throw ParseError(where + ": expected normalizer_<qubits>_<gates>");
  const int q = parse_number<int>(rest.substr(0, us), where);
  const int g = parse_number<int>(rest.substr(us + 1), where);
  const double x = parse_number<double>(v, where);
  if (!(x > 0)) throw ParseError(where + ": normalizer must be positive");
  table.entries[{q, g}] = x;
  return true;
}

}  // namespace detail

/// Parses `key = value` lines ('#' starts a comment). If `seed_override` is
/// non-null (normally the ZXRL_SEED environment variable) it replaces the
/// seed from the text.
inline RunConfig parse_run_config(std::string_view text, const char* seed_override = std::getenv("ZXRL_SEED")) {
  RunConfig rc;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (detail::trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    const std::string v = detail::trim(std::string_view(line).substr(eq + 1));
    using detail::parse_number;
    PpoConfig& p = rc.ppo;
    EnvConfig& e = rc.env;
    if (key == "num_steps") p.num_steps = parse_number<int>(v, where);
    else if (key == "num_envs") p.num_envs = parse_number<int>(v, where);
    else if (key == "learning_rate") p.learning_rate = parse_number<double>(v, where);
    else if (key == "num_epochs") p.num_epochs = parse_number<int>(v, where);
    else if (key == "minibatch_size") p.minibatch_size = parse_number<int>(v, where);
    else if (key == "gamma") p.gamma = parse_number<double>(v, where);
    else if (key == "gae_lambda") p.gae_lambda = parse_number<double>(v, where);
    else if (key == "vf_coef") p.vf_coef = parse_number<double>(v, where);
    else if (key == "entropy_coef") p.entropy_coef = parse_number<double>(v, where);
    else if (key == "clip_epsilon") p.clip_epsilon = parse_number<double>(v, where);
    else if (key == "total_steps") p.total_steps = parse_number<long>(v, where);
    else if (key == "grad_clip_norm") p.grad_clip_norm = parse_number<double>(v, where);
    else if (key == "normalize_advantages") p.normalize_advantages = detail::parse_bool(v, where);
    else if (key == "workers") p.workers = parse_number<int>(v, where);
    else if (key == "chunk_size") p.chunk_size = parse_number<int>(v, where);
    else if (key == "seed") p.seed = parse_number<std::uint64_t>(v, where);
    else if (key == "n_qubits") e.n_qubits = parse_number<int>(v, where);
    else if (key == "n_gates") e.n_gates = parse_number<int>(v, where);
    else if (key == "gate_set") e.gate_set = detail::parse_gate_set(v, where);
    else if (key == "max_steps") e.max_steps = parse_number<int>(v, where);
    else if (key == "hidden") rc.net.hidden = parse_number<nn::Index>(v, where);
    else if (key == "layers") rc.net.layers = parse_number<int>(v, where);
    else if (!detail::parse_normalizer(key, v, where, e.normalizer)) {
      throw ParseError(where + ": unknown key '" + key + "'");
    }
  }
  if (seed_override && *seed_override) rc.ppo.seed = detail::parse_number<std::uint64_t>(seed_override, "ZXRL_SEED");
  rc.env.seed = rc.ppo.seed;
  if (rc.net.hidden < 1 || rc.net.layers < 1) throw ParseError("hidden and layers must be positive");
  rc.ppo.validate();
  rc.env.validate();
  return rc;
}

/// Canonical text form; parse_run_config(emit_run_config(c), nullptr) == c.
inline std::string emit_run_config(const RunConfig& rc) {
  std::ostringstream os;
  os << std::setprecision(17);
  const PpoConfig& p = rc.ppo;
  const EnvConfig& e = rc.env;
  os << "n_qubits = " << e.n_qubits << "\n"
     << "n_gates = " << e.n_gates << "\n"
     << "gate_set = " << detail::gate_set_name(e.gate_set) << "\n"
     << "max_steps = " << e.max_steps << "\n";
  for (const auto& [k, v] : e.normalizer.entries) os << NormalizerTable::key(k.first, k.second) << " = " << v << "\n";
  os << "num_steps = " << p.num_steps << "\n"
     << "num_envs = " << p.num_envs << "\n"
     << "learning_rate = " << p.learning_rate << "\n"
     << "num_epochs = " << p.num_epochs << "\n"
     << "minibatch_size = " << p.minibatch_size << "\n"
     << "gamma = " << p.gamma << "\n"
     << "gae_lambda = " << p.gae_lambda << "\n"
     << "vf_coef = " << p.vf_coef << "\n"
     << "entropy_coef = " << p.entropy_coef << "\n"
     << "clip_epsilon = " << p.clip_epsilon << "\n"
     << "total_steps = " << p.total_steps << "\n"
     << "grad_clip_norm = " << p.grad_clip_norm << "\n"
     << "normalize_advantages = " << (p.normalize_advantages ? "true" : "false") << "\n"
     << "workers = " << p.workers << "\n"
     << "chunk_size = " << p.chunk_size << "\n"
     << "hidden = " << rc.net.hidden << "\n"
     << "layers = " << rc.net.layers << "\n"
     << "seed = " << p.seed << "\n";
  return os.str();
}

/// Reads only `normalizer_Q_G` lines, as written by `calibrate`.
inline NormalizerTable parse_normalizer_table(std::string_view text) {
  NormalizerTable t;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (detail::trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
    const std::string key = detail::trim(std::string_view(line).substr(0, eq));
    if (!detail::parse_normalizer(key, detail::trim(std::string_view(line).substr(eq + 1)), where, t)) {
      throw ParseError(where + ": expected a normalizer_<qubits>_<gates> key");
    }
  }
  return t;
}

}  // namespace zxrl
