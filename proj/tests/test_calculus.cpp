// Differentials, co-differentials, Laplacian and H, and their identities.

#include <gtest/gtest.h>

#include <complex>
#include <map>

#include "magschro/magschro.hpp"

using namespace magschro;
using cd = std::complex<double>;

namespace {

WeightedGraph path(int n) {
  GraphBuilder b;
  for (int k = 1; k <= n; ++k) b.add_vertex({k}, {});
  for (int k = 1; k < n; ++k) b.add_edge({k}, {k + 1}, 1.0);
  return b.build();
}

WeightedGraph edge_with_phase(cd sigma) {
  GraphBuilder b;
  b.add_vertex({1}, {}).add_vertex({2}, {});
  b.add_edge({1}, {2}, 1.0, sigma);
  return b.build();
}

BasicVertexFunction<Rational> exact(const VertexFunction& f) {
  BasicVertexFunction<Rational> out;
  for (const auto& [x, v] : f) out.set(x, {to_rational(v.real()), to_rational(v.imag())});
  return out;
}

BasicEdgeFunction<Rational> exact(const EdgeFunction& F) {
  BasicEdgeFunction<Rational> out;
  for (const auto& e : F.edges()) out.set(e, {to_rational(F(e).real()), to_rational(F(e).imag())});
  return out;
}

double max_diff(const VertexFunction& f, const VertexFunction& h) {
  double worst = 0;
  for (const auto& [x, v] : f) worst = std::max(worst, std::abs(v - h(x)));
  for (const auto& [x, v] : h) worst = std::max(worst, std::abs(v - f(x)));
  return worst;
}

double max_abs(const VertexFunction& f) {
  double m = 0;
  for (const auto& [x, v] : f) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST(DSigma, Examples) {
  const auto p = path(3);
  VertexFunction c;
  c.set({1}, 2.5);
  c.set({2}, 2.5);
  EXPECT_EQ(d_sigma(p, c)({{1}, {2}}), cd(0));
  EXPECT_EQ(d_sigma(p, VertexFunction::delta({2}))({{1}, {2}}), cd(1));
  EXPECT_EQ(d_sigma(p, VertexFunction::delta({2}))({{2}, {1}}), cd(-1));
  const auto g = edge_with_phase(cd(0, 1));
  EXPECT_EQ(d_sigma(g, VertexFunction::delta({2}))({{1}, {2}}), cd(0, -1));
  EXPECT_EQ(d_conj_sigma(g, VertexFunction::delta({2}))({{1}, {2}}), cd(0, 1));
  EXPECT_EQ(d_plain(g, VertexFunction::delta({2}))({{1}, {2}}), cd(1));
}

TEST(DeltaSigma, Examples) {
  const auto p = path(3);
  EXPECT_TRUE(delta_sigma(p, EdgeFunction{}).empty());
  EdgeFunction Y;
  Y.set({{1}, {2}}, 1.0);
  const auto dY = delta_sigma(p, Y);
  EXPECT_EQ(dY({1}), cd(-1));
  EXPECT_EQ(dY({2}), cd(1));
  EXPECT_EQ(dY({3}), cd(0));
}

TEST(Laplacian, Examples) {
  GraphBuilder b;
  for (int k = 1; k <= 3; ++k) b.add_vertex({k}, {});
  b.add_edge({1}, {2}, 1.0).add_edge({2}, {3}, 1.0).add_edge({1}, {3}, 1.0);
  const auto tri = b.build();
  const auto L = laplacian_sigma(tri, VertexFunction::delta({1}));
  EXPECT_EQ(L({1}), cd(2));
  EXPECT_EQ(L({2}), cd(-1));
  EXPECT_EQ(L({3}), cd(-1));

  const auto g = edge_with_phase(cd(0, 1));
  EXPECT_EQ(laplacian_sigma(g, VertexFunction::delta({2}))({1}), cd(0, 1));

  VertexFunction c;
  for (VertexId x : tri.vertices()) c.set(x, cd(3, -1));
  EXPECT_EQ(max_abs(laplacian_sigma(tri, c)), 0);
}

TEST(Schrodinger, Examples) {
  const auto g = worked_example_graph();
  const auto H1 = schrodinger_apply(g, VertexFunction::delta({1}));
  EXPECT_EQ(H1({1}), cd(0));
  EXPECT_EQ(H1({2}), cd(-1));
  EXPECT_EQ(H1({3}), cd(0));
  for (std::int64_t K = 2; K <= 30; ++K) {
    const auto d = VertexFunction::delta({K});
    EXPECT_EQ(inner_w(g, schrodinger_apply(g, d), d), cd(static_cast<double>(2 - K * K)));
  }
  const auto d5 = VertexFunction::delta({5});
  EXPECT_EQ(inner_w(g, schrodinger_apply(g, d5), d5).real(), -23);
}

TEST(Schrodinger, ZeroPotentialIsLaplacian) {
  Random rnd(3);
  for (int k = 0; k < 20; ++k) {
    const auto h = rnd.graph();
    GraphBuilder b;
    for (VertexId x : h.vertices()) {
      auto d = h.vertex(x);
      d.W = 0;
      b.add_vertex(x, d);
      for (const auto& nb : h.neighbors(x)) b.add_oriented_edge(nb.edge, nb.data);
    }
    const auto g = b.build();
    const auto u = rnd.vertex_function(g.vertices());
    EXPECT_EQ(max_diff(schrodinger_apply(g, u), laplacian_sigma(g, u)), 0);
  }
}

// The Laplacian form equals the energy ||d_sigma u||_a^2, hence is real and
// nonnegative.
TEST(Laplacian, FormIsEnergy) {
  Random rnd(4);
  for (int k = 0; k < 50; ++k) {
    const auto g = rnd.graph();
    const auto u = rnd.vertex_function(g.vertices());
    const cd form = inner_w(g, laplacian_sigma(g, u), u);
    const double energy = std::pow(norm_a(g, d_sigma(g, u)), 2);
    EXPECT_NEAR(form.real(), energy, 1e-11 * (1 + energy));
    EXPECT_NEAR(form.imag(), 0, 1e-11 * (1 + energy));
    EXPECT_GE(form.real(), -1e-11 * (1 + energy));
  }
}

TEST(Residuals, HandExamplesVanish) {
  const auto g = edge_with_phase(cd(0, 1));
  VertexFunction u, v;
  u.set({1}, cd(1, 2));
  u.set({2}, cd(0, -1));
  v.set({2}, 3.0);
  EdgeFunction Y;
  Y.set({{2}, {1}}, cd(0.5, 0.25));
  EXPECT_EQ(leibniz_residual(g, u, v).value, 0);
  EXPECT_EQ(delta_product_residual(g, u, Y).value, 0);
  EXPECT_EQ(adjointness_residual(g, u, Y).value, 0);
  EXPECT_EQ(composition_residual(g, u).value, 0);
  EXPECT_EQ(symmetry_residual(g, u, v).value, 0);
}

TEST(Residuals, SeededSuiteWithinTolerance) {
  const auto res = run_identity_suite(42, 200);
  for (const auto& l : res.lines) {
    EXPECT_EQ(l.violations, 0u) << l.name << " worst " << l.worst_relative;
    EXPECT_EQ(l.cases, 200u);
    EXPECT_LE(l.worst_relative, 1e-12) << l.name;
  }
}

TEST(Residuals, SuiteAcrossPhaseKinds) {
  for (PhaseKind kind : {PhaseKind::trivial, PhaseKind::quarter_turn}) {
    RandomGraphOptions opt;
    opt.phases = kind;
    opt.max_vertices = 15;
    EXPECT_TRUE(run_identity_suite(7, 50, 1e-10, opt).pass());
  }
}

TEST(Residuals, ExactArithmeticGivesZero) {
  Random rnd(99);
  RandomGraphOptions opt;
  opt.phases = PhaseKind::quarter_turn;
  opt.max_vertices = 12;
  for (int k = 0; k < 25; ++k) {
    const auto g = rnd.graph(opt);
    const auto G = to_exact(g);
    const auto V = g.vertices();
    const auto u = exact(rnd.vertex_function(V)), v = exact(rnd.vertex_function(V));
    const auto Y = exact(rnd.edge_function(g, V));
    EXPECT_EQ(leibniz_residual(G, u, v).value, 0);
    EXPECT_EQ(delta_product_residual(G, u, Y).value, 0);
    EXPECT_EQ(adjointness_residual(G, u, Y).value, 0);
    EXPECT_EQ(composition_residual(G, u).value, 0);
    EXPECT_EQ(symmetry_residual(G, u, v).value, 0);
  }
}

TEST(Residuals, ExactCopyRejectsGenericPhases) {
  EXPECT_THROW(to_exact(edge_with_phase(std::polar(1.0, 0.3))), InputError);
  EXPECT_NO_THROW(to_exact(edge_with_phase(std::polar(1.0, 1.5)), true));
}

// A broken Leibniz rule (plain d in place of d_conj) must be detected: the
// residual machinery is not vacuous.
TEST(Residuals, DetectWrongPhaseConvention) {
  const auto g = edge_with_phase(cd(0, 1));
  const auto u = VertexFunction::delta({2});
  const auto right = d_sigma(g, u), wrong = d_conj_sigma(g, u);
  EXPECT_NE(right({{1}, {2}}), wrong({{1}, {2}}));
  EdgeFunction Y;
  Y.set({{1}, {2}}, 1.0);
  const cd good = inner_a(g, right, Y) - inner_w(g, u, delta_sigma(g, Y));
  const cd bad = inner_a(g, wrong, Y) - inner_w(g, u, delta_sigma(g, Y));
  EXPECT_EQ(good, cd(0));
  EXPECT_GT(std::abs(bad), 1);
}

// H' = H for sigma' = conj(tau(o)) sigma tau(t) up to the unitary u -> tau u.
TEST(Gauge, Covariance) {
  Random rnd(12);
  for (int k = 0; k < 30; ++k) {
    const auto g = rnd.graph();
    std::map<VertexId, cd> tau;
    for (VertexId x : g.vertices()) tau[x] = rnd.phase(PhaseKind::unit_circle);
    const auto h = gauge_transform(g, tau);
    EXPECT_TRUE(validate(h).ok());
    const auto u = rnd.vertex_function(g.vertices());
    VertexFunction tu;
    for (const auto& [x, ux] : u) tu.set(x, tau[x] * ux);
    const auto lhs = schrodinger_apply(h, tu);
    VertexFunction rhs;
    for (const auto& [x, hx] : schrodinger_apply(g, u)) rhs.set(x, tau[x] * hx);
    EXPECT_LE(max_diff(lhs, rhs), 1e-12 * (1 + max_abs(rhs)));
  }
}

TEST(Orientation, FlipLeavesCompositionAndResidualsInvariant) {
  Random rnd(21);
  for (int k = 0; k < 30; ++k) {
    const auto g = rnd.graph();
    const auto f = g.with_flipped(rnd.edges(g, 10));
    const auto V = g.vertices();
    const auto u = rnd.vertex_function(V), v = rnd.vertex_function(V);
    const auto Y = rnd.edge_function(g, V);
    const auto a = delta_sigma(g, d_sigma(g, u)), b = delta_sigma(f, d_sigma(f, u));
    EXPECT_LE(max_diff(a, b), 1e-12 * (1 + max_abs(a)));
    EXPECT_LE(std::abs(inner_a(g, Y, Y) - inner_a(f, Y, Y)), 1e-12 * (1 + std::abs(inner_a(g, Y, Y))));
    EXPECT_TRUE(leibniz_residual(f, u, v).within(1e-10));
    EXPECT_TRUE(delta_product_residual(f, u, Y).within(1e-10));
    EXPECT_TRUE(adjointness_residual(f, u, Y).within(1e-10));
  }
}

TEST(Orientation, PlainCodifferentialIsInvariant) {
  Random rnd(22);
  for (int k = 0; k < 30; ++k) {
    const auto g = rnd.graph();
    const auto f = g.with_flipped(rnd.edges(g, 10));
    const auto Y = rnd.edge_function(g, g.vertices());
    const auto a = delta_plain(g, Y), b = delta_plain(f, Y);
    EXPECT_LE(max_diff(a, b), 1e-12 * (1 + max_abs(a)));
  }
}

// Flipping [x,y] with phase sigma multiplies the contribution of a fixed Y
// on that edge to delta_sigma Y by conj(sigma).
TEST(Orientation, TwistedCodifferentialPicksUpConjugatePhase) {
  const cd sigma = std::polar(1.0, 0.7);
  GraphBuilder b;
  b.add_vertex({1}, {2.0, 0, 1}).add_vertex({2}, {0.5, 0, 1});
  b.add_edge({1}, {2}, 3.0, sigma);
  const auto g = b.build();
  const std::vector<OrientedEdge> flips{{{1}, {2}}};
  const auto f = g.with_flipped(flips);
  EdgeFunction Y;
  Y.set({{1}, {2}}, cd(0.25, -1));
  const auto a = delta_sigma(g, Y), c = delta_sigma(f, Y);
  for (VertexId x : g.vertices()) EXPECT_LE(std::abs(c(x) - std::conj(sigma) * a(x)), 1e-15);
}
