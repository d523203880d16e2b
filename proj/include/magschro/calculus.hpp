#pragma once

// Deformed differential and co-differential, the magnetic Laplacian and the
// Schrodinger expression H = Delta_sigma + W, together with residuals of the
// identities relating them. All operators act on finitely supported
// functions and are templated on the scalar field so that the residuals can
// be evaluated in exact rational arithmetic.

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "magschro/fields.hpp"
#include "magschro/graph.hpp"

namespace magschro {

/// Which phase enters an operator: sigma itself, its conjugate, or none
/// (the classical sigma = 1 operators d and delta).
enum class Twist { sigma, conjugate, none };

namespace detail {

template <class Real>
complex_t<Real> twisted_phase(const BasicWeightedGraph<Real>& g, const OrientedEdge& e, Twist twist) {
  switch (twist) {
    case Twist::sigma: return g.edge(e).sigma;
    case Twist::conjugate: return ScalarTraits<Real>::conj(g.edge(e).sigma);
    case Twist::none: break;
  }
  return complex_t<Real>(Real(1));
}

template <class Real>
complex_t<Real> abs_c(const complex_t<Real>& z) {
  return complex_t<Real>(Real(magnitude<Real>(z)));
}

}  // namespace detail

/// (d_sigma u)(e) = conj(sigma(e)) u(t(e)) - u(o(e)) on canonical edges,
/// extended antisymmetrically.
template <class Real>
BasicEdgeFunction<Real> d_sigma(const BasicWeightedGraph<Real>& g, const BasicVertexFunction<Real>& u,
                                Twist twist = Twist::sigma) {
  BasicEdgeFunction<Real> out;
  for (const OrientedEdge& e : incident_canonical_edges(g, u.support())) {
    const auto phase = detail::twisted_phase(g, e, twist);
    out.set(e, ScalarTraits<Real>::conj(phase) * u(e.terminus) - u(e.origin));
  }
  return out;
}

/// d_{conj sigma}: the differential with every phase conjugated.
template <class Real>
BasicEdgeFunction<Real> d_conj_sigma(const BasicWeightedGraph<Real>& g, const BasicVertexFunction<Real>& u) {
  return d_sigma(g, u, Twist::conjugate);
}

/// Classical differential (sigma = 1).
template <class Real>
BasicEdgeFunction<Real> d_plain(const BasicWeightedGraph<Real>& g, const BasicVertexFunction<Real>& u) {
  return d_sigma(g, u, Twist::none);
}

/// (delta_sigma Y)(x) = (1/w(x)) [ sum_{e in E_s, t(e)=x} sigma(e) a(e) Y(e)
///                                - sum_{e in E_s, o(e)=x} a(e) Y(e) ].
template <class Real>
BasicVertexFunction<Real> delta_sigma(const BasicWeightedGraph<Real>& g, const BasicEdgeFunction<Real>& Y,
                                      Twist twist = Twist::sigma) {
  using C = complex_t<Real>;
  std::map<VertexId, C> acc;
  for (const auto& stored : Y.edges()) {
    const OrientedEdge e = g.canonical(stored);
    const C a(g.edge(e).a);
    const C aY = a * Y(e);
    auto [t, t_new] = acc.try_emplace(e.terminus, C(Real(0)));
    t->second += detail::twisted_phase(g, e, twist) * aY;
    auto [o, o_new] = acc.try_emplace(e.origin, C(Real(0)));
    o->second -= aY;
  }
  BasicVertexFunction<Real> out;
  for (const auto& [x, v] : acc) out.set(x, v / C(g.vertex(x).w));
  return out;
}

template <class Real>
BasicVertexFunction<Real> delta_plain(const BasicWeightedGraph<Real>& g, const BasicEdgeFunction<Real>& Y) {
  return delta_sigma(g, Y, Twist::none);
}

/// (Delta_sigma u)(x) = (1/w(x)) sum_{e in O_x} a(e) (u(x) - sigma(ê) u(t(e))).
template <class Real>
BasicVertexFunction<Real> laplacian_sigma(const BasicWeightedGraph<Real>& g, const BasicVertexFunction<Real>& u) {
  using C = complex_t<Real>;
  BasicVertexFunction<Real> out;
  for (VertexId x : closed_neighborhood(g, u.support())) {
    C sum(Real(0));
    const C ux = u(x);
    for (const auto& [e, data] : g.neighbors(x)) {
      const C sigma_rev = ScalarTraits<Real>::conj(data.sigma);
      sum += C(data.a) * (ux - sigma_rev * u(e.terminus));
    }
    out.set(x, sum / C(g.vertex(x).w));
  }
  return out;
}

/// Hu = Delta_sigma u + W u.
template <class Real>
BasicVertexFunction<Real> schrodinger_apply(const BasicWeightedGraph<Real>& g, const BasicVertexFunction<Real>& u) {
  using C = complex_t<Real>;
  BasicVertexFunction<Real> out = laplacian_sigma(g, u);
  for (const auto& [x, ux] : u) out.add(x, C(g.vertex(x).W) * ux);
  return out;
}

// ---------------------------------------------------------------------------
// Identity residuals. `value` is the deviation (exactly 0 in exact
// arithmetic); `scale` is the sum of magnitudes of the terms involved, the
// natural yardstick for floating-point cancellation.

struct Residual {
  double value{0};
  double scale{0};

  double relative() const { return scale > 0 ? value / scale : value; }
  bool within(double rel_tol) const { return value <= rel_tol * scale || value == 0; }

  Residual& merge(const Residual& o) {
    if (o.relative() > relative()) *this = o;
    return *this;
  }
};

/// max over edges of |d_conj(uv) - (d_conj u) v^# - u_sigma^# dv|.
template <class Real>
Residual leibniz_residual(const BasicWeightedGraph<Real>& g, const BasicVertexFunction<Real>& u,
                          const BasicVertexFunction<Real>& v) {
  std::set<VertexId> support;
  for (VertexId x : u.support()) support.insert(x);
  for (VertexId x : v.support()) support.insert(x);
  const auto lhs = d_conj_sigma(g, u * v);
  const auto du = d_conj_sigma(g, u);
  const auto dv = d_plain(g, v);
  Residual r;
  for (const OrientedEdge& e : incident_canonical_edges(g, support)) {
    const auto t1 = du(e) * sharp(v, e);
    const auto t2 = sharp_sigma(g, u, e) * dv(e);
    const double dev = magnitude<Real>(lhs(e) - t1 - t2);
    const double sc = magnitude<Real>(lhs(e)) + magnitude<Real>(t1) + magnitude<Real>(t2);
    r.value = std::max(r.value, dev);
    r.scale = std::max(r.scale, sc);
  }
  return r;
}

/// max over vertices of |delta(u_sigma^# Y) - u delta_sigma Y
///                       + (1/2w) sum_{S_x} a Y d_conj u|.
template <class Real>
Residual delta_product_residual(const BasicWeightedGraph<Real>& g, const BasicVertexFunction<Real>& u,
                                const BasicEdgeFunction<Real>& Y) {
  using C = complex_t<Real>;
  BasicEdgeFunction<Real> product;
  for (const auto& stored : Y.edges()) {
    const OrientedEdge e = g.canonical(stored);
    product.set(e, sharp_sigma(g, u, e) * Y(e));
  }
  const auto lhs = delta_plain(g, product);
  const auto dY = delta_sigma(g, Y);
  const auto du = d_conj_sigma(g, u);

  std::set<VertexId> vertices;
  for (const auto& e : Y.edges()) vertices.insert({e.origin, e.terminus});

  Residual r;
  for (VertexId x : vertices) {
    const C first = u(x) * dY(x);
    C star_sum(Real(0));
    for (const OrientedEdge& e : g.star_edges(x)) star_sum += C(g.edge(e).a) * Y(e) * du(e);
    const C second = star_sum / (C(Real(2)) * C(g.vertex(x).w));
    const double dev = magnitude<Real>(lhs(x) - first + second);
    const double sc = magnitude<Real>(lhs(x)) + magnitude<Real>(first) + magnitude<Real>(second);
    r.value = std::max(r.value, dev);
    r.scale = std::max(r.scale, sc);
  }
  return r;
}

/// |(d_sigma u, Y)_a - (u, delta_sigma Y)_w|.
template <class Real>
Residual adjointness_residual(const BasicWeightedGraph<Real>& g, const BasicVertexFunction<Real>& u,
                              const BasicEdgeFunction<Real>& Y) {
  const auto du = d_sigma(g, u);
  const auto dY = delta_sigma(g, Y);
  const auto lhs = inner_a(g, du, Y);
  const auto rhs = inner_w(g, u, dY);
  Residual r;
  r.value = magnitude<Real>(lhs - rhs);
  r.scale = magnitude<Real>(lhs) + magnitude<Real>(rhs);
  // termwise magnitudes bound the cancellation error better than |lhs|
  for (const auto& e : du.edges())
    r.scale += ScalarTraits<Real>::to_double(g.edge(e).a) * magnitude<Real>(du(e)) * magnitude<Real>(Y(e));
  return r;
}

/// max over vertices of |delta_sigma d_sigma u - Delta_sigma u|.
template <class Real>
Residual composition_residual(const BasicWeightedGraph<Real>& g, const BasicVertexFunction<Real>& u) {
  const auto lhs = delta_sigma(g, d_sigma(g, u));
  const auto rhs = laplacian_sigma(g, u);
  Residual r;
  for (VertexId x : closed_neighborhood(g, u.support())) {
    r.value = std::max(r.value, magnitude<Real>(lhs(x) - rhs(x)));
    r.scale = std::max(r.scale, magnitude<Real>(lhs(x)) + magnitude<Real>(rhs(x)));
  }
  return r;
}

/// |(Hu, v)_w - (u, Hv)_w|.
template <class Real>
Residual symmetry_residual(const BasicWeightedGraph<Real>& g, const BasicVertexFunction<Real>& u,
                           const BasicVertexFunction<Real>& v) {
  const auto lhs = inner_w(g, schrodinger_apply(g, u), v);
  const auto rhs = inner_w(g, u, schrodinger_apply(g, v));
  Residual r;
  r.value = magnitude<Real>(lhs - rhs);
  r.scale = magnitude<Real>(lhs) + magnitude<Real>(rhs);
  const auto Hu = schrodinger_apply(g, u);
  for (const auto& [x, hx] : Hu)
    r.scale += ScalarTraits<Real>::to_double(g.vertex(x).w) * magnitude<Real>(hx) * magnitude<Real>(v(x));
  return r;
}

/// Gauge-transformed copy of an explicit graph: sigma'(e) =
/// conj(tau(o(e))) sigma(e) tau(t(e)) for unit scalars tau (1 where absent).
inline WeightedGraph gauge_transform(const WeightedGraph& g, const std::map<VertexId, std::complex<double>>& tau) {
  auto phase = [&](VertexId x) {
    auto it = tau.find(x);
    return it == tau.end() ? std::complex<double>(1.0) : it->second;
  };
  GraphBuilder b;
  for (VertexId x : g.vertices()) {
    b.add_vertex(x, g.vertex(x));
    for (const auto& nb : g.neighbors(x))
      if (nb.edge.origin < nb.edge.terminus)
        b.add_edge(nb.edge.origin, nb.edge.terminus, nb.data.a,
                   std::conj(phase(nb.edge.origin)) * nb.data.sigma * phase(nb.edge.terminus));
  }
  if (auto n = g.degree_bound()) b.set_degree_bound(*n);
  return b.build_unchecked();
}

}  // namespace magschro
