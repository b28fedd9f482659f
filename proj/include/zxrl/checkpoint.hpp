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

#include <bit>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "zxrl/error.hpp"
#include "zxrl/nn.hpp"

namespace zxrl {

/// Actor and critic plus the settings needed to rebuild them.
struct Checkpoint {
  nn::NetConfig net;
  nn::ActorNet actor;
  nn::CriticNet critic;
  nlohmann::json hyper = nlohmann::json::object();

  [[nodiscard]] std::vector<nn::NamedTensor> parameters() const {
    auto ps = actor.parameters();
    auto cs = critic.parameters();
    ps.insert(ps.end(), cs.begin(), cs.end());
    return ps;
  }

  static Checkpoint fresh(const nn::NetConfig& cfg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Checkpoint c;
    c.net = cfg;
    c.actor = nn::ActorNet::init(cfg, rng);
    c.critic = nn::CriticNet::init(cfg, rng);
    return c;
  }
};

namespace detail {

inline constexpr char kMagic[8] = {'Z', 'X', 'R', 'L', 'C', 'K', 'P', 'T'};

inline void put_u64(std::string& out, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}

inline nlohmann::json net_json(const nn::NetConfig& c) {
  return {{"actor_features", c.actor_features}, {"critic_features", c.critic_features},
          {"edge_features", c.edge_features},   {"hidden", c.hidden},
          {"layers", c.layers},                 {"leaky_slope", c.leaky_slope}};
}

inline nn::NetConfig net_from_json(const nlohmann::json& j) {
  nn::NetConfig c;
  c.actor_features = j.at("actor_features").get<nn::Index>();
  c.critic_features = j.at("critic_features").get<nn::Index>();
  c.edge_features = j.at("edge_features").get<nn::Index>();
  c.hidden = j.at("hidden").get<nn::Index>();
  c.layers = j.at("layers").get<int>();
  c.leaky_slope = j.at("leaky_slope").get<double>();
  return c;
}

}  // namespace detail

/// Layout: 8-byte magic, little-endian u64 manifest length, JSON manifest
/// (net settings, hyperparameters, tensor names and shapes), then every
/// tensor as little-endian float32 in manifest order, row-major.
inline std::string checkpoint_bytes(const Checkpoint& c) {
  nlohmann::json manifest;
  manifest["format"] = "zxrl-checkpoint";
  manifest["version"] = 1;
  manifest["net"] = detail::net_json(c.net);
  manifest["hyper"] = c.hyper;
  manifest["tensors"] = nlohmann::json::array();
  std::string payload;
  for (const auto& [name, t] : c.parameters()) {
    manifest["tensors"].push_back({{"name", name}, {"shape", {t.rows(), t.cols()}}});
    const nn::Mat& m = t.value();
    for (nn::Index i = 0; i < m.size(); ++i) {
      const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(m.data()[i]));
      for (int b = 0; b < 4; ++b) payload.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
    }
  }
  const std::string text = manifest.dump();
  std::string out(detail::kMagic, 8);
  detail::put_u64(out, text.size());
  out += text;
  out += payload;
  return out;
}

inline void save_checkpoint(const Checkpoint& c, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write checkpoint " + path);
  const std::string bytes = checkpoint_bytes(c);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw Error("failed writing checkpoint " + path);
}

/// Copies stored tensors into `into`, whose structure must match exactly.
inline void load_checkpoint_into(const std::string& bytes, Checkpoint& into) {
  if (bytes.size() < 16 || bytes.compare(0, 8, std::string(detail::kMagic, 8)) != 0) {
    throw ParseError("checkpoint: bad magic or truncated header");
  }
  std::uint64_t len = 0;
  for (int i = 0; i < 8; ++i) len |= std::uint64_t{static_cast<unsigned char>(bytes[8 + i])} << (8 * i);
  if (bytes.size() < 16 + len) throw ParseError("checkpoint: truncated manifest");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(bytes.substr(16, len));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint manifest: ") + e.what());
  }
  const auto params = into.parameters();
  if (!manifest.contains("tensors") || !manifest["tensors"].is_array()) {
    throw ParseError("checkpoint manifest: missing tensor list");
  }
  const auto& tensors = manifest["tensors"];
  if (tensors.size() != params.size()) {
    throw ShapeMismatch("checkpoint: holds " + std::to_string(tensors.size()) + " tensors, model has " +
                        std::to_string(params.size()));
  }
  std::size_t pos = 16 + len;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& entry = tensors[i];
    const auto& [name, t] = params[i];
    std::vector<nn::Index> shape;
    try {
      shape = entry.at("shape").get<std::vector<nn::Index>>();
      (void)entry.at("name").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("checkpoint manifest: ") + e.what());
    }
    if (entry.at("name").get<std::string>() != name || shape.size() != 2 || shape[0] != t.rows() ||
        shape[1] != t.cols()) {
      throw ShapeMismatch("checkpoint: tensor " + std::to_string(i) + " is " +
                          entry.at("name").get<std::string>() + " " + entry.at("shape").dump() +
                          ", model expects " + name + " [" + std::to_string(t.rows()) + "," +
                          std::to_string(t.cols()) + "]");
    }
    const std::size_t need = static_cast<std::size_t>(t.size()) * 4;
    if (bytes.size() < pos + need) throw ParseError("checkpoint: truncated tensor data");
    nn::Mat& m = const_cast<nn::Tensor&>(t).mutable_value();
    for (nn::Index k = 0; k < m.size(); ++k) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) {
        bits |= std::uint32_t{static_cast<unsigned char>(bytes[pos++])} << (8 * b);
      }
      m.data()[k] = static_cast<double>(std::bit_cast<float>(bits));
    }
  }
  if (pos != bytes.size()) throw ParseError("checkpoint: trailing bytes");
  into.hyper = manifest.value("hyper", nlohmann::json::object());
}

/// Rebuilds the networks described by the manifest and loads them.
inline Checkpoint checkpoint_from_bytes(const std::string& bytes) {
  if (bytes.size() < 16) throw ParseError("checkpoint: truncated header");
  std::uint64_t len = 0;
  for (int i = 0; i < 8; ++i) len |= std::uint64_t{static_cast<unsigned char>(bytes[8 + i])} << (8 * i);
  if (bytes.size() < 16 + len) throw ParseError("checkpoint: truncated manifest");
  nn::NetConfig cfg;
  try {
    cfg = detail::net_from_json(nlohmann::json::parse(bytes.substr(16, len)).at("net"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("checkpoint manifest: ") + e.what());
  }
  Checkpoint c = Checkpoint::fresh(cfg, 0);
  load_checkpoint_into(bytes, c);
  return c;
}

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error("cannot read " + path);
  return std::string((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
}

inline Checkpoint load_checkpoint(const std::string& path) { return checkpoint_from_bytes(read_file(path)); }

}  // namespace zxrl
