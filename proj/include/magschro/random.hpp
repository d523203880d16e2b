#pragma once

// Seeded generators for property suites. Every draw goes through one
// std::mt19937_64, so a seed fixes the whole run.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <set>
#include <vector>

#include "magschro/fields.hpp"
#include "magschro/graph.hpp"

namespace magschro {

enum class PhaseKind { unit_circle, quarter_turn, trivial };

struct RandomGraphOptions {
  int min_vertices = 2;
  int max_vertices = 40;
  /// Extra edges beyond a spanning tree, as a fraction of the vertex count.
  double extra_edge_ratio = 0.6;
  double weight_lo = 0.1;
  double weight_hi = 10;
  PhaseKind phases = PhaseKind::unit_circle;
  /// Draw q >= 1 and W >= -q so that the minorant condition holds.
  bool satisfy_minorant = true;
};

class Random {
 public:
  explicit Random(std::uint64_t seed) : rng_(seed) {}

  std::mt19937_64& engine() { return rng_; }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>()(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

  std::complex<double> complex_normal() { return {normal(), normal()}; }

  std::complex<double> phase(PhaseKind kind) {
    switch (kind) {
      case PhaseKind::unit_circle: return std::polar(1.0, uniform(-std::numbers::pi, std::numbers::pi));
      case PhaseKind::quarter_turn: {
        static const std::complex<double> turns[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        return turns[integer(0, 3)];
      }
      case PhaseKind::trivial: break;
    }
    return 1.0;
  }

  /// Connected graph on 1..V: a random spanning tree plus random chords.
  WeightedGraph graph(const RandomGraphOptions& opt = {}) {
    const int V = integer(opt.min_vertices, opt.max_vertices);
    GraphBuilder b;
    for (int i = 1; i <= V; ++i) {
      VertexData<double> d;
      d.w = log_uniform(opt.weight_lo, opt.weight_hi);
      d.q = opt.satisfy_minorant ? 1 + log_uniform(0.01, 10) - 0.01 : 1;
      d.W = opt.satisfy_minorant ? uniform(-d.q, 2 * d.q) : uniform(-10, 10);
      b.add_vertex({i}, d);
    }
    std::set<EdgeKey> used;
    auto connect = [&](int u, int v) {
      if (u == v || !used.insert(edge_key({{u}, {v}})).second) return;
      b.add_edge({u}, {v}, log_uniform(opt.weight_lo, opt.weight_hi), phase(opt.phases));
    };
    for (int i = 2; i <= V; ++i) connect(integer(1, i - 1), i);
    const int extra = static_cast<int>(opt.extra_edge_ratio * V);
    for (int k = 0; k < extra; ++k) connect(integer(1, V), integer(1, V));
    return b.build();
  }

  /// Complex function on a random subset of `pool` (at least one vertex).
  VertexFunction vertex_function(const std::vector<VertexId>& pool, double density = 0.5, bool real = false) {
    VertexFunction f;
    for (VertexId x : pool)
      if (coin(density)) f.set(x, real ? std::complex<double>(normal()) : complex_normal());
    if (f.empty() && !pool.empty()) f.set(pool[static_cast<std::size_t>(integer(0, int(pool.size()) - 1))], 1.0);
    return f;
  }

  /// Antisymmetric function on a random subset of the edges meeting `pool`.
  EdgeFunction edge_function(const WeightedGraph& g, const std::vector<VertexId>& pool, double density = 0.5) {
    EdgeFunction Y;
    for (const OrientedEdge& e : incident_canonical_edges(g, pool))
      if (coin(density)) Y.set(e, complex_normal());
    return Y;
  }

  /// Up to k distinct canonical edges of an explicit graph.
  std::vector<OrientedEdge> edges(const WeightedGraph& g, std::size_t k) {
    const auto canonical = incident_canonical_edges(g, g.vertices());
    std::vector<OrientedEdge> all(canonical.begin(), canonical.end());
    std::shuffle(all.begin(), all.end(), rng_);
    all.resize(std::min(k, all.size()));
    return all;
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace magschro
