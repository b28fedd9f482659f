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

#include <nlohmann/json.hpp>
#include <string>
#include <string_view>

#include "zxrl/diagram.hpp"

namespace zxrl {

namespace detail {

inline const char* kind_name(VertexKind k) {
  switch (k) {
    case VertexKind::ZSpider: return "z";
    case VertexKind::XSpider: return "x";
    case VertexKind::Boundary: return "boundary";
  }
  return "?";
}

inline VertexKind kind_from_name(const std::string& s, const std::string& where) {
  if (s == "z") return VertexKind::ZSpider;
  if (s == "x") return VertexKind::XSpider;
  if (s == "boundary") return VertexKind::Boundary;
  throw ParseError(where + ": unknown vertex kind '" + s + "'");
}

template <typename T>
T field(const nlohmann::json& obj, const char* name, const std::string& where) {
  if (!obj.is_object() || !obj.contains(name)) {
    throw ParseError(where + ": missing field '" + name + "'");
  }
  try {
    return obj.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(where + ": field '" + name + "' has the wrong type");
  }
}

}  // namespace detail

/// Diagram as a JSON document with `vertices`, `edges`, `inputs`, `outputs`.
[[nodiscard]] inline std::string serialize(const ZxDiagram& d) {
  nlohmann::json doc;
  doc["vertices"] = nlohmann::json::array();
  for (VertexId v : d.vertices()) {
    doc["vertices"].push_back({{"id", v},
                               {"kind", detail::kind_name(d.kind(v))},
                               {"phase_k", d.phase(v).k()}});
  }
  doc["edges"] = nlohmann::json::array();
  for (const auto& [u, v, t] : d.edges()) {
    doc["edges"].push_back(
        {{"u", u}, {"v", v}, {"type", t == EdgeType::Simple ? "simple" : "hadamard"}});
  }
  doc["inputs"] = d.inputs();
  doc["outputs"] = d.outputs();
  doc["next_id"] = d.next_id();
  return doc.dump(1) + "\n";
}

[[nodiscard]] inline ZxDiagram deserialize(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("diagram: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("diagram: top level must be an object");
  for (const char* key : {"vertices", "edges", "inputs", "outputs"}) {
    if (!doc.contains(key) || !doc[key].is_array()) {
      throw ParseError(std::string("diagram: missing array field '") + key + "'");
    }
  }

  ZxDiagram d;
  const auto& verts = doc["vertices"];
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const std::string where = "vertices[" + std::to_string(i) + "]";
    const int id = detail::field<int>(verts[i], "id", where);
    const auto kind =
        detail::kind_from_name(detail::field<std::string>(verts[i], "kind", where), where);
    const int k = detail::field<int>(verts[i], "phase_k", where);
    if (k < 0 || k >= 8) throw ParseError(where + ": phase_k out of range");
    try {
      d.insert_vertex_with_id(id, kind, Phase(k));
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  const auto& edges = doc["edges"];
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const int u = detail::field<int>(edges[i], "u", where);
    const int v = detail::field<int>(edges[i], "v", where);
    const auto type = detail::field<std::string>(edges[i], "type", where);
    EdgeType t;
    if (type == "simple") {
      t = EdgeType::Simple;
    } else if (type == "hadamard") {
      t = EdgeType::Hadamard;
    } else {
      throw ParseError(where + ": unknown edge type '" + type + "'");
    }
    if (!d.has_vertex(u) || !d.has_vertex(v)) {
      throw ParseError(where + ": endpoint does not exist");
    }
    try {
      d.add_edge(u, v, t);
    } catch (const Error& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  auto boundary_list = [&](const char* key) {
    std::vector<VertexId> ids;
    const auto& arr = doc[key];
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string where = std::string(key) + "[" + std::to_string(i) + "]";
      if (!arr[i].is_number_integer()) throw ParseError(where + ": not an integer");
      const int id = arr[i].get<int>();
      if (!d.has_vertex(id) || !d.is_boundary(id)) {
        throw ParseError(where + ": not a boundary vertex");
      }
      ids.push_back(id);
    }
    return ids;
  };
  d.set_inputs(boundary_list("inputs"));
  d.set_outputs(boundary_list("outputs"));
  if (doc.contains("next_id")) {
    if (!doc["next_id"].is_number_integer()) {
      throw ParseError("diagram: field 'next_id' has the wrong type");
    }
    d.bump_next_id(doc["next_id"].get<int>());
  }
  return d;
}

}  // namespace zxrl
