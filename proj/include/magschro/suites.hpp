#pragma once

// Randomized identity suites over seeded random graphs.

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "magschro/calculus.hpp"
#include "magschro/fields.hpp"
#include "magschro/random.hpp"

namespace magschro {

struct SuiteLine {
  std::string name;
  double worst_relative{0};
  std::size_t cases{0};
  std::size_t violations{0};
};

struct IdentitySuiteResult {
  std::vector<SuiteLine> lines;
  double seconds{0};

  bool pass() const {
    for (const auto& l : lines)
      if (l.violations) return false;
    return true;
  }
};

/// Leibniz, delta-product, adjointness, composition and symmetry residuals
/// on `graphs` random graphs, each checked against `rel_tol`.
inline IdentitySuiteResult run_identity_suite(std::uint64_t seed, int graphs, double rel_tol = 1e-10,
                                              const RandomGraphOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  Random rnd(seed);
  IdentitySuiteResult out;
  out.lines = {{"leibniz"}, {"delta-product"}, {"adjointness"}, {"composition"}, {"symmetry"}};
  auto record = [&](std::size_t i, const Residual& r) {
    auto& l = out.lines[i];
    ++l.cases;
    l.worst_relative = std::max(l.worst_relative, r.relative());
    if (!r.within(rel_tol)) ++l.violations;
  };
  for (int k = 0; k < graphs; ++k) {
    const auto g = rnd.graph(opt);
    const auto V = g.vertices();
    const auto u = rnd.vertex_function(V);
    const auto v = rnd.vertex_function(V);
    const auto Y = rnd.edge_function(g, V);
    record(0, leibniz_residual(g, u, v));
    record(1, delta_product_residual(g, u, Y));
    record(2, adjointness_residual(g, u, Y));
    record(3, composition_residual(g, u));
    record(4, symmetry_residual(g, u, v));
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

/// Counts edges where (phi^#)^2 > (phi^2)^# beyond rounding, over `samples`
/// random real phi on random two-vertex edges.
inline SuiteLine run_square_average_suite(std::uint64_t seed, int samples) {
  Random rnd(seed);
  SuiteLine l{"square-average"};
  for (int k = 0; k < samples; ++k) {
    const OrientedEdge e{{1}, {2}};
    VertexFunction phi;
    phi.set({1}, rnd.normal() * rnd.log_uniform(1e-3, 1e3));
    phi.set({2}, rnd.normal() * rnd.log_uniform(1e-3, 1e3));
    const double gap = square_average_gap(phi, e);
    const double scale = sharp(phi * phi, e).real();
    ++l.cases;
    if (gap < -1e-15 * scale) ++l.violations;
    l.worst_relative = std::max(l.worst_relative, scale > 0 ? -gap / scale : 0.0);
  }
  return l;
}

}  // namespace magschro
