#pragma once

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "magschro/error.hpp"
#include "magschro/graph.hpp"
#include "magschro/scalar.hpp"

namespace magschro {

/// Finitely supported complex function on vertices; zero off its support.
/// Iteration is in ascending vertex id.
template <class Real>
class BasicVertexFunction {
 public:
  using complex_type = complex_t<Real>;
  using map_type = std::map<VertexId, complex_type>;

  BasicVertexFunction() = default;
  BasicVertexFunction(std::initializer_list<std::pair<const VertexId, complex_type>> init) {
    for (const auto& [x, v] : init) set(x, v);
  }

  static BasicVertexFunction delta(VertexId x, complex_type value = complex_type(Real(1))) {
    BasicVertexFunction f;
    f.set(x, value);
    return f;
  }

  complex_type operator()(VertexId x) const {
    auto it = values_.find(x);
    return it == values_.end() ? complex_type(Real(0)) : it->second;
  }

  void set(VertexId x, complex_type v) {
    if (!ScalarTraits<Real>::is_finite(v))
      throw InputError("non-finite function value", "vertex " + std::to_string(x.value));
    values_[x] = std::move(v);
  }

  void add(VertexId x, const complex_type& v) {
    auto [it, inserted] = values_.try_emplace(x, v);
    if (!inserted) it->second += v;
  }

  std::vector<VertexId> support() const {
    std::vector<VertexId> s;
    for (const auto& [x, v] : values_) s.push_back(x);
    return s;
  }

  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool is_real() const {
    for (const auto& [x, v] : values_)
      if (ScalarTraits<Real>::imag(v) != Real(0)) return false;
    return true;
  }

  BasicVertexFunction conj() const {
    BasicVertexFunction out;
    for (const auto& [x, v] : values_) out.values_[x] = ScalarTraits<Real>::conj(v);
    return out;
  }

  friend BasicVertexFunction operator*(const BasicVertexFunction& f, const BasicVertexFunction& g) {
    BasicVertexFunction out;
    for (const auto& [x, v] : f.values_)
      if (auto it = g.values_.find(x); it != g.values_.end()) out.values_[x] = v * it->second;
    return out;
  }

  friend BasicVertexFunction operator*(const complex_type& c, const BasicVertexFunction& f) {
    BasicVertexFunction out;
    for (const auto& [x, v] : f.values_) out.values_[x] = c * v;
    return out;
  }

  friend BasicVertexFunction operator+(const BasicVertexFunction& f, const BasicVertexFunction& g) {
    BasicVertexFunction out = f;
    for (const auto& [x, v] : g.values_) out.add(x, v);
    return out;
  }

  friend BasicVertexFunction operator-(const BasicVertexFunction& f, const BasicVertexFunction& g) {
    BasicVertexFunction out = f;
    for (const auto& [x, v] : g.values_) out.add(x, -v);
    return out;
  }

 private:
  map_type values_;
};

/// Finitely supported antisymmetric function on oriented edges, Y(ê) = -Y(e).
/// One value is stored per unoriented edge, for the orientation [smaller id,
/// larger id]; the accessor negates for the other orientation, so
/// antisymmetry holds by construction and independently of the canonical
/// orientation E_s chosen on any particular graph.
template <class Real>
class BasicEdgeFunction {
 public:
  using complex_type = complex_t<Real>;

  complex_type operator()(const OrientedEdge& e) const {
    auto it = values_.find(edge_key(e));
    if (it == values_.end()) return complex_type(Real(0));
    return e.origin < e.terminus ? it->second : -it->second;
  }

  void set(const OrientedEdge& e, const complex_type& value) {
    if (e.origin == e.terminus) throw InputError("edge function on a loop");
    if (!ScalarTraits<Real>::is_finite(value)) throw InputError("non-finite edge function value");
    values_[edge_key(e)] = e.origin < e.terminus ? value : -value;
  }

  void add(const OrientedEdge& e, const complex_type& value) { set(e, (*this)(e) + value); }

  /// Stored edges as [smaller id, larger id].
  std::vector<OrientedEdge> edges() const {
    std::vector<OrientedEdge> out;
    for (const auto& [k, v] : values_) out.push_back({{k.first}, {k.second}});
    return out;
  }

  bool empty() const { return values_.empty(); }
  std::size_t size() const { return values_.size(); }

 private:
  std::map<EdgeKey, complex_type> values_;
};

using VertexFunction = BasicVertexFunction<double>;
using EdgeFunction = BasicEdgeFunction<double>;

/// (f, h)_w = sum_x w(x) f(x) conj(h(x)).
template <class Real>
complex_t<Real> inner_w(const BasicWeightedGraph<Real>& g, const BasicVertexFunction<Real>& f,
                        const BasicVertexFunction<Real>& h) {
  complex_t<Real> sum(Real(0));
  for (const auto& [x, fx] : f) {
    const auto hx = h(x);
    if (hx == complex_t<Real>(Real(0))) continue;
    sum += complex_t<Real>(g.vertex(x).w) * fx * ScalarTraits<Real>::conj(hx);
  }
  return sum;
}

template <class Real>
double norm_w(const BasicWeightedGraph<Real>& g, const BasicVertexFunction<Real>& f) {
  return std::sqrt(ScalarTraits<Real>::to_double(ScalarTraits<Real>::real(inner_w(g, f, f))));
}

/// (F, G)_a = sum over canonical edges of a(e) F(e) conj(G(e)).
template <class Real>
complex_t<Real> inner_a(const BasicWeightedGraph<Real>& g, const BasicEdgeFunction<Real>& F,
                        const BasicEdgeFunction<Real>& G) {
  complex_t<Real> sum(Real(0));
  for (const auto& stored : F.edges()) {
    const OrientedEdge e = g.canonical(stored);
    const auto Ge = G(e);
    if (Ge == complex_t<Real>(Real(0))) continue;
    sum += complex_t<Real>(g.edge(e).a) * F(e) * ScalarTraits<Real>::conj(Ge);
  }
  return sum;
}

template <class Real>
double norm_a(const BasicWeightedGraph<Real>& g, const BasicEdgeFunction<Real>& F) {
  return std::sqrt(ScalarTraits<Real>::to_double(ScalarTraits<Real>::real(inner_a(g, F, F))));
}

/// u^#(e) = (u(t(e)) + u(o(e))) / 2.
template <class Real>
complex_t<Real> sharp(const BasicVertexFunction<Real>& u, const OrientedEdge& e) {
  return (u(e.terminus) + u(e.origin)) / complex_t<Real>(Real(2));
}

/// u_sigma^#(e) = (sigma(e) u(t(e)) + u(o(e))) / 2.
template <class Real>
complex_t<Real> sharp_sigma(const BasicWeightedGraph<Real>& g, const BasicVertexFunction<Real>& u,
                            const OrientedEdge& e) {
  return (g.edge(e).sigma * u(e.terminus) + u(e.origin)) / complex_t<Real>(Real(2));
}

/// (phi^2)^#(e) - (phi^#(e))^2 for real phi; nonnegative by convexity.
inline double square_average_gap(const BasicVertexFunction<double>& phi, const OrientedEdge& e) {
  const double s = sharp(phi, e).real();
  return sharp(phi * phi, e).real() - s * s;
}

/// Vertices of supp(f) together with their neighbors.
template <class Real, class Support>
std::set<VertexId> closed_neighborhood(const BasicWeightedGraph<Real>& g, const Support& support) {
  std::set<VertexId> out;
  for (VertexId x : support) {
    out.insert(x);
    for (const auto& nb : g.neighbors(x)) out.insert(nb.edge.terminus);
  }
  return out;
}

/// Canonical edges with at least one endpoint in `vertices`.
template <class Real, class Vertices>
std::set<OrientedEdge> incident_canonical_edges(const BasicWeightedGraph<Real>& g, const Vertices& vertices) {
  std::set<OrientedEdge> out;
  for (VertexId x : vertices)
    for (const auto& nb : g.neighbors(x)) out.insert(g.canonical(nb.edge));
  return out;
}

}  // namespace magschro
