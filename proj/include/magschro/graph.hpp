#pragma once

// Weighted graphs without loops or multi-edges, either explicit and finite or
// generated lazily through a neighbor oracle. Oriented edges come in reverse
// pairs; the weight a is shared by both orientations and the phase sigma is
// conjugated under reversal.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "magschro/error.hpp"
#include "magschro/scalar.hpp"

namespace magschro {

struct VertexId {
  std::int64_t value{0};

  friend auto operator<=>(const VertexId&, const VertexId&) = default;
  friend std::ostream& operator<<(std::ostream& os, VertexId v) { return os << v.value; }
};

struct OrientedEdge {
  VertexId origin;
  VertexId terminus;

  OrientedEdge reversed() const { return {terminus, origin}; }

  friend auto operator<=>(const OrientedEdge&, const OrientedEdge&) = default;
  friend std::ostream& operator<<(std::ostream& os, const OrientedEdge& e) {
    return os << '[' << e.origin << ',' << e.terminus << ']';
  }
};

/// Unordered edge key: (smaller id, larger id).
using EdgeKey = std::pair<std::int64_t, std::int64_t>;

inline EdgeKey edge_key(const OrientedEdge& e) {
  return std::minmax(e.origin.value, e.terminus.value);
}

template <class Real>
struct EdgeData {
  Real a{1};
  complex_t<Real> sigma{Real(1)};
};

/// Per-vertex record: measure w, potential W, minorant q.
template <class Real>
struct VertexData {
  Real w{1};
  Real W{0};
  Real q{1};
};

template <class Real>
struct Neighbor {
  OrientedEdge edge;
  EdgeData<Real> data;
};

enum class GraphMode { explicit_finite, lazy_generated };

/// Closed-form description of one-dimensional ray families (vertex k joined to
/// k+1 only). Edge lengths of the path metric behave like c * k^p; when the
/// exponent is known, metric completeness reduces to a p-series test.
struct RayModel {
  VertexId first{1};
  std::optional<double> length_exponent_with_q;
  std::optional<double> length_exponent_unit_q;
  std::string description;
};

template <class Real>
class GraphSource {
 public:
  virtual ~GraphSource() = default;
  virtual GraphMode mode() const = 0;
  virtual bool contains(VertexId x) const = 0;
  virtual VertexData<Real> vertex(VertexId x) const = 0;
  /// Edges with origin x, in any order.
  virtual std::vector<Neighbor<Real>> out_edges(VertexId x) const = 0;
  /// All vertices (explicit graphs only).
  virtual std::vector<VertexId> all_vertices() const {
    throw InputError("vertex enumeration is only available on explicit graphs");
  }
};

template <class Real>
class ExplicitSource final : public GraphSource<Real> {
 public:
  struct Record {
    VertexData<Real> data;
    std::vector<Neighbor<Real>> out;
  };

  explicit ExplicitSource(std::map<VertexId, Record> records) : records_(std::move(records)) {}

  GraphMode mode() const override { return GraphMode::explicit_finite; }
  bool contains(VertexId x) const override { return records_.count(x) != 0; }
  VertexData<Real> vertex(VertexId x) const override { return records_.at(x).data; }
  std::vector<Neighbor<Real>> out_edges(VertexId x) const override { return records_.at(x).out; }
  std::vector<VertexId> all_vertices() const override {
    std::vector<VertexId> ids;
    ids.reserve(records_.size());
    for (const auto& [id, rec] : records_) ids.push_back(id);
    return ids;
  }

 private:
  std::map<VertexId, Record> records_;
};

/// Oracle-backed infinite graph. Vertex records are memoized; the oracles must
/// be pure functions of the vertex id.
template <class Real>
class LazySource final : public GraphSource<Real> {
 public:
  using ContainsFn = std::function<bool(VertexId)>;
  using VertexFn = std::function<VertexData<Real>(VertexId)>;
  using EdgesFn = std::function<std::vector<Neighbor<Real>>(VertexId)>;

  LazySource(ContainsFn contains, VertexFn vertex, EdgesFn edges)
      : contains_(std::move(contains)), vertex_(std::move(vertex)), edges_(std::move(edges)) {}

  GraphMode mode() const override { return GraphMode::lazy_generated; }
  bool contains(VertexId x) const override { return contains_(x); }
  VertexData<Real> vertex(VertexId x) const override {
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(x.value); it != cache_.end()) return it->second;
    }
    VertexData<Real> d = vertex_(x);
    std::lock_guard lock(mutex_);
    cache_.emplace(x.value, d);
    return d;
  }
  std::vector<Neighbor<Real>> out_edges(VertexId x) const override { return edges_(x); }

 private:
  ContainsFn contains_;
  VertexFn vertex_;
  EdgesFn edges_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::int64_t, VertexData<Real>> cache_;
};

template <class Real>
class BasicWeightedGraph {
 public:
  using real_type = Real;
  using complex_type = complex_t<Real>;
  using neighbor_type = Neighbor<Real>;

  BasicWeightedGraph(std::shared_ptr<const GraphSource<Real>> source,
                     std::optional<std::size_t> degree_bound)
      : source_(std::move(source)), degree_bound_(degree_bound) {}

  GraphMode mode() const { return source_->mode(); }
  bool is_finite() const { return mode() == GraphMode::explicit_finite; }
  std::optional<std::size_t> degree_bound() const { return degree_bound_; }

  bool contains(VertexId x) const { return source_->contains(x); }

  VertexData<Real> vertex(VertexId x) const {
    require(x);
    return source_->vertex(x);
  }

  /// Edges with origin x, sorted by terminus id.
  std::vector<neighbor_type> neighbors(VertexId x) const {
    require(x);
    auto out = source_->out_edges(x);
    std::stable_sort(out.begin(), out.end(), [](const neighbor_type& l, const neighbor_type& r) {
      return l.edge.terminus < r.edge.terminus;
    });
    return out;
  }

  std::size_t degree(VertexId x) const { return neighbors(x).size(); }

  std::optional<EdgeData<Real>> find_edge(const OrientedEdge& e) const {
    if (!contains(e.origin)) return std::nullopt;
    for (const auto& nb : source_->out_edges(e.origin))
      if (nb.edge.terminus == e.terminus) return nb.data;
    return std::nullopt;
  }

  EdgeData<Real> edge(const OrientedEdge& e) const {
    auto d = find_edge(e);
    if (!d) {
      std::ostringstream os;
      os << "no edge " << e;
      throw InputError(os.str());
    }
    return *d;
  }

  /// Canonical orientation E_s: [x,y] with id(x) < id(y), unless the edge has
  /// been flipped with with_flipped().
  bool is_canonical(const OrientedEdge& e) const {
    const bool id_order = e.origin < e.terminus;
    return flipped_ && flipped_->count(edge_key(e)) ? !id_order : id_order;
  }

  OrientedEdge canonical(const OrientedEdge& e) const {
    return is_canonical(e) ? e : e.reversed();
  }

  /// S_x: canonically oriented edges meeting x, sorted.
  std::vector<OrientedEdge> star_edges(VertexId x) const {
    std::vector<OrientedEdge> out;
    for (const auto& nb : neighbors(x)) out.push_back(canonical(nb.edge));
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<VertexId> vertices() const { return source_->all_vertices(); }

  /// Copy of the graph whose canonical orientation is reversed on `edges`
  /// (toggled if already flipped).
  BasicWeightedGraph with_flipped(std::span<const OrientedEdge> edges) const {
    auto flips = flipped_ ? std::set<EdgeKey>(*flipped_) : std::set<EdgeKey>{};
    for (const auto& e : edges) {
      auto k = edge_key(e);
      if (!flips.erase(k)) flips.insert(k);
    }
    BasicWeightedGraph copy = *this;
    copy.flipped_ = std::make_shared<const std::set<EdgeKey>>(std::move(flips));
    return copy;
  }

  const RayModel* ray_model() const { return ray_.get(); }
  void set_ray_model(RayModel model) { ray_ = std::make_shared<const RayModel>(std::move(model)); }

  std::string label(VertexId x) const {
    if (labels_)
      if (auto it = labels_->find(x); it != labels_->end()) return it->second;
    return std::to_string(x.value);
  }
  bool has_labels() const { return labels_ != nullptr; }
  void set_labels(std::map<VertexId, std::string> labels) {
    labels_ = std::make_shared<const std::map<VertexId, std::string>>(std::move(labels));
  }

 private:
  void require(VertexId x) const {
    if (!contains(x)) throw InputError("unknown vertex", "vertex " + std::to_string(x.value));
  }

  std::shared_ptr<const GraphSource<Real>> source_;
  std::optional<std::size_t> degree_bound_;
  std::shared_ptr<const std::set<EdgeKey>> flipped_;
  std::shared_ptr<const RayModel> ray_;
  std::shared_ptr<const std::map<VertexId, std::string>> labels_;
};

using WeightedGraph = BasicWeightedGraph<double>;
using ExactGraph = BasicWeightedGraph<Rational>;

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  unknown_vertex,
  loop,
  multi_edge,
  missing_reverse,
  edge_weight_asymmetry,
  phase_not_conjugate,
  non_unit_phase,
  nonpositive_edge_weight,
  nonpositive_vertex_weight,
  minorant_below_one,
  degree_bound,
  non_finite,
  disconnected,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::unknown_vertex: return "unknown-vertex";
    case ViolationKind::loop: return "loop";
    case ViolationKind::multi_edge: return "multi-edge";
    case ViolationKind::missing_reverse: return "missing-reverse";
    case ViolationKind::edge_weight_asymmetry: return "edge-weight-asymmetry";
    case ViolationKind::phase_not_conjugate: return "phase-not-conjugate";
    case ViolationKind::non_unit_phase: return "non-unit-phase";
    case ViolationKind::nonpositive_edge_weight: return "nonpositive-edge-weight";
    case ViolationKind::nonpositive_vertex_weight: return "nonpositive-vertex-weight";
    case ViolationKind::minorant_below_one: return "minorant-below-one";
    case ViolationKind::degree_bound: return "degree-bound";
    case ViolationKind::non_finite: return "non-finite";
    case ViolationKind::disconnected: return "disconnected";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  std::string location;
  double measured{0};
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ViolationKind k) const {
    return std::any_of(violations.begin(), violations.end(),
                       [k](const Violation& v) { return v.kind == k; });
  }
  std::string summary() const {
    std::ostringstream os;
    for (const auto& v : violations)
      os << to_string(v.kind) << " at " << v.location << " (measured " << v.measured << ")\n";
    return os.str();
  }
};

inline constexpr double kPhaseTolerance = 1e-12;

template <class Real>
ValidationReport validate(const BasicWeightedGraph<Real>& g, std::span<const VertexId> window) {
  using T = ScalarTraits<Real>;
  if (window.empty()) throw InputError("validation window is empty");
  for (VertexId x : window)
    if (!g.contains(x)) throw InputError("unknown vertex in window", "vertex " + std::to_string(x.value));

  ValidationReport report;
  auto add = [&](ViolationKind k, std::string loc, double m) {
    report.violations.push_back({k, std::move(loc), m});
  };
  auto vname = [](VertexId x) { return "vertex " + std::to_string(x.value); };
  auto ename = [](const OrientedEdge& e) {
    std::ostringstream os;
    os << "edge " << e;
    return os.str();
  };

  std::set<OrientedEdge> seen;
  for (VertexId x : window) {
    const auto rec = g.vertex(x);
    const double w = T::to_double(rec.w), W = T::to_double(rec.W), q = T::to_double(rec.q);
    if (!std::isfinite(w) || !std::isfinite(W) || !std::isfinite(q))
      add(ViolationKind::non_finite, vname(x), std::isfinite(w) ? (std::isfinite(W) ? q : W) : w);
    if (!(w > 0)) add(ViolationKind::nonpositive_vertex_weight, vname(x), w);
    if (!(q >= 1)) add(ViolationKind::minorant_below_one, vname(x), q);

    const auto out = g.neighbors(x);
    if (auto bound = g.degree_bound(); bound && out.size() > *bound)
      add(ViolationKind::degree_bound, vname(x), static_cast<double>(out.size()));

    for (std::size_t i = 0; i < out.size(); ++i) {
      const auto& [e, data] = out[i];
      if (!seen.insert(e).second) continue;
      if (e.origin == e.terminus) {
        add(ViolationKind::loop, ename(e), 0);
        continue;
      }
      if (i > 0 && out[i - 1].edge.terminus == e.terminus) add(ViolationKind::multi_edge, ename(e), 0);

      const double a = T::to_double(data.a);
      if (!(a > 0)) add(ViolationKind::nonpositive_edge_weight, ename(e), a);
      const double mod = magnitude<Real>(data.sigma);
      if (!T::is_finite(data.sigma) || std::abs(mod - 1.0) > kPhaseTolerance)
        add(ViolationKind::non_unit_phase, ename(e), mod);

      if (!g.contains(e.terminus)) {
        add(ViolationKind::missing_reverse, ename(e), 0);
        continue;
      }
      const auto back = g.find_edge(e.reversed());
      if (!back) {
        add(ViolationKind::missing_reverse, ename(e), 0);
        continue;
      }
      if (!(back->a == data.a))
        add(ViolationKind::edge_weight_asymmetry, ename(e), T::to_double(back->a - data.a));
      const double conj_gap = magnitude<Real>(back->sigma - T::conj(data.sigma));
      if (conj_gap > kPhaseTolerance) add(ViolationKind::phase_not_conjugate, ename(e), conj_gap);
      seen.insert(e.reversed());
    }
  }

  if (g.is_finite()) {
    const auto all = g.vertices();
    std::set<VertexId> reached{all.front()};
    std::deque<VertexId> queue{all.front()};
    while (!queue.empty()) {
      VertexId x = queue.front();
      queue.pop_front();
      for (const auto& nb : g.neighbors(x))
        if (g.contains(nb.edge.terminus) && reached.insert(nb.edge.terminus).second)
          queue.push_back(nb.edge.terminus);
    }
    if (reached.size() != all.size())
      add(ViolationKind::disconnected, "graph", static_cast<double>(all.size() - reached.size()));
  }
  return report;
}

/// Whole-graph validation for explicit graphs.
template <class Real>
ValidationReport validate(const BasicWeightedGraph<Real>& g) {
  const auto all = g.vertices();
  return validate(g, std::span<const VertexId>(all));
}

// ---------------------------------------------------------------------------
// Construction of explicit graphs

template <class Real>
class BasicGraphBuilder {
 public:
  BasicGraphBuilder& add_vertex(VertexId x, VertexData<Real> data) {
    vertices_.emplace_back(x, std::move(data));
    return *this;
  }

  /// Unoriented edge stored for orientation [u,v]; [v,u] gets conj(sigma).
  BasicGraphBuilder& add_edge(VertexId u, VertexId v, Real a, complex_t<Real> sigma = complex_t<Real>(Real(1))) {
    edges_.push_back({{u, v}, {a, sigma}});
    edges_.push_back({{v, u}, {a, ScalarTraits<Real>::conj(sigma)}});
    return *this;
  }

  /// Single orientation, no reverse implied. Lets tests build malformed graphs.
  BasicGraphBuilder& add_oriented_edge(OrientedEdge e, EdgeData<Real> data) {
    edges_.push_back({e, std::move(data)});
    return *this;
  }

  BasicGraphBuilder& set_degree_bound(std::size_t n) {
    degree_bound_ = n;
    return *this;
  }

  BasicGraphBuilder& set_label(VertexId x, std::string label) {
    labels_[x] = std::move(label);
    return *this;
  }

  /// Builds without checking graph invariants; only dangling endpoints and
  /// duplicate vertex ids are rejected.
  BasicWeightedGraph<Real> build_unchecked() const {
    std::map<VertexId, typename ExplicitSource<Real>::Record> records;
    for (const auto& [x, data] : vertices_)
      if (!records.emplace(x, typename ExplicitSource<Real>::Record{data, {}}).second)
        throw InputError("duplicate vertex id", "vertex " + std::to_string(x.value));
    if (records.empty()) throw InputError("graph has no vertices");
    for (const auto& nb : edges_) {
      auto it = records.find(nb.edge.origin);
      if (it == records.end() || !records.count(nb.edge.terminus)) {
        std::ostringstream os;
        os << "edge " << nb.edge;
        throw InputError("edge endpoint is not a vertex", os.str());
      }
      it->second.out.push_back(nb);
    }
    std::size_t max_degree = 0;
    for (const auto& [x, rec] : records) max_degree = std::max(max_degree, rec.out.size());
    BasicWeightedGraph<Real> g(std::make_shared<const ExplicitSource<Real>>(std::move(records)),
                               degree_bound_ ? degree_bound_ : std::optional<std::size_t>(max_degree));
    if (!labels_.empty()) g.set_labels(labels_);
    return g;
  }

  /// Builds and validates; any violation is an InputError.
  BasicWeightedGraph<Real> build() const {
    auto g = build_unchecked();
    const auto report = validate(g);
    if (!report.ok()) throw InputError("invalid graph:\n" + report.summary());
    return g;
  }

 private:
  std::vector<std::pair<VertexId, VertexData<Real>>> vertices_;
  std::vector<Neighbor<Real>> edges_;
  std::optional<std::size_t> degree_bound_;
  std::map<VertexId, std::string> labels_;
};

using GraphBuilder = BasicGraphBuilder<double>;

/// Exact copy of a double-precision graph; phases must lie in {1, i, -1, -i}
/// (or `round_phase` maps them there).
inline ExactGraph to_exact(const WeightedGraph& g, bool round_phase = false) {
  BasicGraphBuilder<Rational> b;
  auto exact_phase = [&](std::complex<double> s) -> ExactComplex<Rational> {
    if (round_phase) {
      const double k = std::round(std::arg(s) / (M_PI / 2));
      const int m = (static_cast<int>(k) % 4 + 4) % 4;
      static const int re[4] = {1, 0, -1, 0}, im[4] = {0, 1, 0, -1};
      return {Rational(re[m]), Rational(im[m])};
    }
    if (!((s.real() == 0 || std::abs(s.real()) == 1) && (s.imag() == 0 || std::abs(s.imag()) == 1) &&
          std::norm(s) == 1))
      throw InputError("phase is not a quarter turn; exact copy impossible");
    return {to_rational(s.real()), to_rational(s.imag())};
  };
  for (VertexId x : g.vertices()) {
    const auto d = g.vertex(x);
    b.add_vertex(x, {to_rational(d.w), to_rational(d.W), to_rational(d.q)});
    for (const auto& nb : g.neighbors(x))
      b.add_oriented_edge(nb.edge, {to_rational(nb.data.a), exact_phase(nb.data.sigma)});
  }
  if (auto n = g.degree_bound()) b.set_degree_bound(*n);
  return b.build_unchecked();
}

}  // namespace magschro

template <>
struct std::hash<magschro::VertexId> {
  std::size_t operator()(const magschro::VertexId& v) const noexcept {
    return std::hash<std::int64_t>{}(v.value);
  }
};
