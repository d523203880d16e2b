#pragma once

// Generated graph families. Vertex data come from expressions in n evaluated
// at the vertex id; edge data at the edge's index (see each family).

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "magschro/error.hpp"
#include "magschro/expr.hpp"
#include "magschro/graph.hpp"
#include "magschro/graph_io.hpp"

namespace magschro {

struct FamilySpec {
  /// path-nat | path | cycle | star | binary-tree | file
  std::string family = "path-nat";
  /// Vertex count (path, cycle), leaf count (star) or depth (binary-tree).
  std::size_t size = 0;
  std::string w = "1";
  std::string a = "1";
  std::string W = "0";
  std::string q = "1";
  /// Phase angle in radians: sigma = exp(i * phase(n)) on the stored orientation.
  std::string phase = "0";
  std::string file;
};

namespace detail {

struct CompiledFamily {
  Expr w, a, W, q, phase;

  explicit CompiledFamily(const FamilySpec& s)
      : w(parse_field(s.w, "w")), a(parse_field(s.a, "a")), W(parse_field(s.W, "W")),
        q(parse_field(s.q, "q")), phase(parse_field(s.phase, "phase")) {}

  static Expr parse_field(const std::string& text, const char* name) {
    try {
      return parse_expr(text);
    } catch (const ExprError& e) {
      throw InputError(std::string("expression for ") + name + ": " + e.what());
    }
  }

  VertexData<double> vertex(std::int64_t n) const {
    const double x = static_cast<double>(n);
    VertexData<double> d{w(x), W(x), q(x)};
    if (!(d.w > 0)) throw InputError("w must be positive", "vertex " + std::to_string(n));
    if (!(d.q >= 1)) throw InputError("q must be >= 1 (q < 1 violates the minorant range)", "vertex " + std::to_string(n));
    return d;
  }

  EdgeData<double> edge(std::int64_t n) const {
    const double x = static_cast<double>(n);
    const double av = a(x);
    if (!(av > 0)) throw InputError("a must be positive", "edge index " + std::to_string(n));
    return {av, std::polar(1.0, phase(x))};
  }
};

inline std::optional<double> ray_length_exponent(const CompiledFamily& f, bool with_q) {
  auto aw = asymptote(f.w), aa = asymptote(f.a), aq = asymptote(f.q);
  if (!aw || !aa || (with_q && !aq)) return std::nullopt;
  if (aw->zero || aa->zero || aw->coefficient <= 0 || aa->coefficient <= 0) return std::nullopt;
  double p = (aw->exponent - aa->exponent) / 2;
  if (with_q) {
    if (aq->zero || aq->coefficient <= 0) return std::nullopt;
    p -= aq->exponent / 2;
  }
  return p;
}

}  // namespace detail

/// The half-line {1, 2, 3, ...} with edges [n, n+1]; a and phase of [n, n+1]
/// are evaluated at n.
inline WeightedGraph make_path_nat(const FamilySpec& spec) {
  auto f = std::make_shared<const detail::CompiledFamily>(spec);
  // surface bad expressions at construction rather than deep inside a search
  for (std::int64_t n = 1; n <= 1000; ++n) f->vertex(n), f->edge(n);

  auto source = std::make_shared<const LazySource<double>>(
      [](VertexId x) { return x.value >= 1; },
      [f](VertexId x) { return f->vertex(x.value); },
      [f](VertexId x) {
        std::vector<Neighbor<double>> out;
        if (x.value > 1) {
          auto d = f->edge(x.value - 1);
          d.sigma = std::conj(d.sigma);
          out.push_back({{x, {x.value - 1}}, d});
        }
        out.push_back({{x, {x.value + 1}}, f->edge(x.value)});
        return out;
      });
  WeightedGraph g(source, 2);
  RayModel ray;
  ray.first = {1};
  ray.length_exponent_with_q = detail::ray_length_exponent(*f, true);
  ray.length_exponent_unit_q = detail::ray_length_exponent(*f, false);
  ray.description = "path-nat w=" + spec.w + " a=" + spec.a + " q=" + spec.q;
  g.set_ray_model(std::move(ray));
  return g;
}

inline WeightedGraph make_family(const FamilySpec& spec) {
  if (spec.family == "path-nat") return make_path_nat(spec);
  if (spec.family == "file") {
    if (spec.file.empty()) throw InputError("family 'file' needs a path");
    return load_graph(spec.file);
  }

  const detail::CompiledFamily f(spec);
  GraphBuilder b;
  auto vertex = [&](std::int64_t n) { b.add_vertex({n}, f.vertex(n)); };
  auto edge = [&](std::int64_t u, std::int64_t v, std::int64_t index) {
    const auto d = f.edge(index);
    b.add_edge({u}, {v}, d.a, d.sigma);
  };
  const auto n = static_cast<std::int64_t>(spec.size);

  if (spec.family == "path") {
    if (n < 1) throw InputError("path needs size >= 1");
    for (std::int64_t k = 1; k <= n; ++k) vertex(k);
    for (std::int64_t k = 1; k < n; ++k) edge(k, k + 1, k);
  } else if (spec.family == "cycle") {
    if (n < 3) throw InputError("cycle needs size >= 3");
    for (std::int64_t k = 1; k <= n; ++k) vertex(k);
    for (std::int64_t k = 1; k < n; ++k) edge(k, k + 1, k);
    edge(n, 1, n);
  } else if (spec.family == "star") {
    if (n < 1) throw InputError("star needs at least one leaf");
    for (std::int64_t k = 1; k <= n + 1; ++k) vertex(k);
    for (std::int64_t k = 2; k <= n + 1; ++k) edge(1, k, k);
  } else if (spec.family == "binary-tree") {
    if (spec.size > 20) throw InputError("binary-tree depth above 20 is not supported");
    const std::int64_t count = (std::int64_t{1} << (spec.size + 1)) - 1;
    for (std::int64_t k = 1; k <= count; ++k) vertex(k);
    for (std::int64_t k = 2; k <= count; ++k) edge(k / 2, k, k);
  } else {
    throw InputError("unknown family '" + spec.family + "'");
  }
  return b.build();
}

}  // namespace magschro
