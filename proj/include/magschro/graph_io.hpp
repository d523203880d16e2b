#pragma once

// JSON graph files.
//
//   {
//     "degree_bound": 3,                                   (optional)
//     "vertices": [ {"id": 1, "w": 1, "W": 0, "q": 1}, ... ],
//     "edges":    [ {"u": 1, "v": 2, "a": 1, "sigma": {"re": 1, "im": 0}}, ... ]
//   }
//
// One record per unoriented edge; sigma belongs to the orientation [u,v] and
// [v,u] carries its conjugate. Ids are either all integers or all strings.
// W defaults to 0, q to 1, sigma to 1.

#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "magschro/error.hpp"
#include "magschro/graph.hpp"

namespace magschro {

struct GraphFile {
  struct Vertex {
    VertexId id;
    VertexData<double> data;
  };
  struct Edge {
    VertexId u, v;
    double a{1};
    std::complex<double> sigma{1.0, 0.0};
  };

  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::optional<std::size_t> degree_bound;
  /// Present iff the file used string ids; maps the assigned integer ids back.
  std::map<VertexId, std::string> labels;
};

inline constexpr double kParsePhaseTolerance = 1e-9;

namespace detail {

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line, col = 1;
    else ++col;
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline double number_field(const nlohmann::json& obj, const char* key, const std::string& path,
                           std::optional<double> fallback = std::nullopt) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    if (fallback) return *fallback;
    throw InputError(std::string("missing field '") + key + "'", path);
  }
  if (!it->is_number()) throw InputError(std::string("field '") + key + "' must be a number", path + "/" + key);
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw InputError("non-finite number", path + "/" + key);
  return v;
}

}  // namespace detail

/// Parses and validates a graph file. Phases within 1e-9 of unit modulus are
/// renormalized; everything else that breaks a graph invariant is rejected
/// with the JSON pointer of the offending element.
inline GraphFile parse_graph(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what(), detail::line_column(text, e.byte));
  }
  if (!doc.is_object()) throw InputError("top level must be an object", "/");
  if (!doc.contains("vertices") || !doc["vertices"].is_array())
    throw InputError("missing array 'vertices'", "/vertices");
  if (!doc.contains("edges") || !doc["edges"].is_array()) throw InputError("missing array 'edges'", "/edges");

  GraphFile file;
  if (auto it = doc.find("degree_bound"); it != doc.end()) {
    if (!it->is_number_unsigned() || it->get<std::size_t>() == 0)
      throw InputError("degree_bound must be a positive integer", "/degree_bound");
    file.degree_bound = it->get<std::size_t>();
  }

  const auto& vs = doc["vertices"];
  if (vs.empty()) throw InputError("graph has no vertices", "/vertices");
  const bool string_ids = vs[0].is_object() && vs[0].contains("id") && vs[0]["id"].is_string();
  std::map<std::string, VertexId> by_name;
  std::set<VertexId> ids;

  auto resolve = [&](const nlohmann::json& id, const std::string& path, bool define) -> VertexId {
    if (string_ids) {
      if (!id.is_string()) throw InputError("ids must be all strings or all integers", path);
      const auto name = id.get<std::string>();
      if (define) {
        VertexId v{static_cast<std::int64_t>(by_name.size()) + 1};
        if (!by_name.emplace(name, v).second) throw InputError("duplicate vertex id", path);
        file.labels[v] = name;
        return v;
      }
      auto it = by_name.find(name);
      if (it == by_name.end()) throw InputError("unknown vertex '" + name + "'", path);
      return it->second;
    }
    if (!id.is_number_integer()) throw InputError("ids must be all strings or all integers", path);
    VertexId v{id.get<std::int64_t>()};
    if (define && !ids.insert(v).second) throw InputError("duplicate vertex id", path);
    if (!define && !ids.count(v)) throw InputError("unknown vertex " + std::to_string(v.value), path);
    return v;
  };

  for (std::size_t i = 0; i < vs.size(); ++i) {
    const std::string path = "/vertices/" + std::to_string(i);
    const auto& rec = vs[i];
    if (!rec.is_object()) throw InputError("vertex must be an object", path);
    if (!rec.contains("id")) throw InputError("missing field 'id'", path);
    GraphFile::Vertex v;
    v.id = resolve(rec["id"], path + "/id", true);
    v.data.w = detail::number_field(rec, "w", path, 1.0);
    v.data.W = detail::number_field(rec, "W", path, 0.0);
    v.data.q = detail::number_field(rec, "q", path, 1.0);
    if (!(v.data.w > 0)) throw InputError("w must be positive", path + "/w");
    if (!(v.data.q >= 1)) throw InputError("q must be >= 1", path + "/q");
    file.vertices.push_back(v);
  }

  std::set<EdgeKey> seen;
  const auto& es = doc["edges"];
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string path = "/edges/" + std::to_string(i);
    const auto& rec = es[i];
    if (!rec.is_object()) throw InputError("edge must be an object", path);
    if (!rec.contains("u") || !rec.contains("v")) throw InputError("edge needs 'u' and 'v'", path);
    GraphFile::Edge e;
    e.u = resolve(rec["u"], path + "/u", false);
    e.v = resolve(rec["v"], path + "/v", false);
    if (e.u == e.v) throw InputError("loop edge", path);
    if (!seen.insert(edge_key({e.u, e.v})).second) throw InputError("duplicate edge", path);
    e.a = detail::number_field(rec, "a", path, 1.0);
    if (!(e.a > 0)) throw InputError("a must be positive", path + "/a");
    if (auto it = rec.find("sigma"); it != rec.end()) {
      if (!it->is_object()) throw InputError("sigma must be {re, im}", path + "/sigma");
      const double re = detail::number_field(*it, "re", path + "/sigma");
      const double im = detail::number_field(*it, "im", path + "/sigma");
      const double mod = std::hypot(re, im);
      if (std::abs(mod - 1.0) > kParsePhaseTolerance)
        throw InputError("sigma must have unit modulus (got " + std::to_string(mod) + ")", path + "/sigma");
      // already unit up to rounding: keep the bits so that parsing is idempotent
      e.sigma = std::abs(mod - 1.0) <= 4 * std::numeric_limits<double>::epsilon() ? std::complex<double>(re, im)
                                                                                  : std::complex<double>(re / mod, im / mod);
    }
    file.edges.push_back(e);
  }
  return file;
}

inline WeightedGraph to_graph(const GraphFile& file) {
  GraphBuilder b;
  for (const auto& v : file.vertices) b.add_vertex(v.id, v.data);
  for (const auto& e : file.edges) b.add_edge(e.u, e.v, e.a, e.sigma);
  if (file.degree_bound) b.set_degree_bound(*file.degree_bound);
  for (const auto& [id, name] : file.labels) b.set_label(id, name);
  try {
    return b.build();
  } catch (const InputError& e) {
    throw InputError(e.what(), "/");
  }
}

inline WeightedGraph read_graph(const std::string& text) { return to_graph(parse_graph(text)); }

inline WeightedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return read_graph(ss.str());
}

/// Canonical file form of an explicit graph: vertices by id, one record per
/// edge stored as [smaller id, larger id].
inline GraphFile to_file(const WeightedGraph& g) {
  if (!g.is_finite()) throw InputError("only explicit graphs can be serialized");
  GraphFile file;
  file.degree_bound = g.degree_bound();
  for (VertexId x : g.vertices()) {
    file.vertices.push_back({x, g.vertex(x)});
    if (g.has_labels()) file.labels[x] = g.label(x);
    for (const auto& nb : g.neighbors(x))
      if (nb.edge.origin < nb.edge.terminus)
        file.edges.push_back({nb.edge.origin, nb.edge.terminus, nb.data.a, nb.data.sigma});
  }
  return file;
}

inline std::string serialize_graph(const GraphFile& file) {
  auto id_json = [&](VertexId v) -> nlohmann::json {
    if (!file.labels.empty()) return file.labels.at(v);
    return v.value;
  };
  nlohmann::json doc;
  if (file.degree_bound) doc["degree_bound"] = *file.degree_bound;
  doc["vertices"] = nlohmann::json::array();
  for (const auto& v : file.vertices)
    doc["vertices"].push_back({{"id", id_json(v.id)}, {"w", v.data.w}, {"W", v.data.W}, {"q", v.data.q}});
  doc["edges"] = nlohmann::json::array();
  for (const auto& e : file.edges)
    doc["edges"].push_back({{"u", id_json(e.u)},
                            {"v", id_json(e.v)},
                            {"a", e.a},
                            {"sigma", {{"re", e.sigma.real()}, {"im", e.sigma.imag()}}}});
  return doc.dump(2) + "\n";
}

inline std::string serialize_graph(const WeightedGraph& g) { return serialize_graph(to_file(g)); }

}  // namespace magschro
