#pragma once

// The path-nat example with w = a = 1, W(n) = -n^2, q(n) = n^2: complete,
// Lipschitz with C = 1/2, and not semi-bounded from below. Each check returns
// a line with the measured quantities.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "magschro/estimates.hpp"
#include "magschro/family.hpp"
#include "magschro/hypothesis.hpp"
#include "magschro/metric.hpp"
#include "magschro/random.hpp"
#include "magschro/spectral.hpp"
#include "magschro/suites.hpp"

namespace magschro {

inline WeightedGraph worked_example_graph() {
  FamilySpec spec;
  spec.family = "path-nat";
  spec.W = "-(n^2)";
  spec.q = "n^2";
  return make_family(spec);
}

struct CheckLine {
  int id{0};
  std::string name;
  bool pass{false};
  std::string detail;
};

namespace detail {

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

/// sum_{k=2}^{K} 1/k with Neumaier compensation.
inline double harmonic_minus_one(std::int64_t K) {
  double sum = 0, comp = 0;
  for (std::int64_t k = 2; k <= K; ++k) {
    const double t = 1.0 / static_cast<double>(k), s = sum + t;
    comp += std::abs(sum) >= t ? (sum - s) + t : (t - s) + sum;
    sum = s;
  }
  return sum + comp;
}

}  // namespace detail

/// d(1, K) = H_K - 1 for K <= 10^4, d(1, 10^6) in [13.39, 13.40], and an
/// exact completeness verdict.
inline CheckLine example_metric_check(const WeightedGraph& g) {
  CheckLine l{3, "metric"};
  SearchLimits lim;
  lim.target = VertexId{10000};
  const auto sp = shortest_paths(g, {1}, LengthMode::with_q, lim);
  double worst = 0;
  double oracle = 0;
  for (std::int64_t K = 1; K <= 10000; ++K) {
    if (K >= 2) oracle += 1.0 / static_cast<double>(K);
    const double d = *sp.find(VertexId{K});
    worst = std::max(worst, K == 1 ? d : std::abs(d - oracle) / oracle);
  }
  const double exact_tail = detail::harmonic_minus_one(10000);
  worst = std::max(worst, std::abs(*sp.find(VertexId{10000}) - exact_tail) / exact_tail);
  const auto far = distance(g, {1}, {1000000}, LengthMode::with_q);
  const auto verdict = completeness_probe(g, {1}, 10000);
  const bool far_ok = far.resolved() && *far.value >= 13.39 && *far.value <= 13.40;
  l.pass = worst <= 1e-12 && far_ok && verdict.label() == "complete (exact)";
  l.detail = "max rel |d(1,K) - (H_K - 1)| = " + detail::fmt(worst) + "; d(1,1e6) = " +
             (far.resolved() ? detail::fmt(*far.value) : "unresolved") + "; verdict " + verdict.label();
  return l;
}

/// C_best = 1/2 at edge [1,2] over the first 10^4 edges; hypotheses pass
/// with the stated C = 1.
inline CheckLine example_lipschitz_check(const WeightedGraph& g) {
  CheckLine l{4, "lipschitz"};
  const auto L = lipschitz_best_constant(g, prefix_window(10000));
  const auto rep = theorem1_report(g, {1}, 2000, 1.0);
  const bool witness_ok = L.witness && L.witness->origin == VertexId{1} && L.witness->terminus == VertexId{2};
  l.pass = std::abs(L.C_best - 0.5) <= 1e-12 && witness_ok && L.edges_checked == 10000 &&
           rep.overall == Verdict::pass;
  l.detail = "C_best = " + detail::fmt(L.C_best) + " over " + std::to_string(L.edges_checked) + " edges, witness [" +
             (L.witness ? std::to_string(L.witness->origin.value) + "," + std::to_string(L.witness->terminus.value)
                        : "-") +
             "]; hypotheses " + to_string(rep.overall) + " (" + rep.scope + ")";
  return l;
}

/// lambda_min({1..K}) <= 2 - K^2 for K in {10, 20, 40}, strictly decreasing.
inline CheckLine example_spectrum_check(const WeightedGraph& g) {
  CheckLine l{5, "semibounded"};
  std::vector<std::vector<VertexId>> windows;
  for (int K : {10, 20, 40}) windows.push_back(prefix_window(K));
  l.pass = true;
  std::ostringstream os;
  try {
    const auto rep = semibounded_probe(g, windows);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& row : rep.rows) {
      const double K = static_cast<double>(row.window_size);
      const bool ok = row.lambda_min <= 2 - K * K && row.residual <= 1e-8 && row.lambda_min < prev;
      l.pass = l.pass && ok;
      prev = row.lambda_min;
      os << "K=" << row.window_size << " lambda_min=" << detail::fmt(row.lambda_min) << " (bound "
         << 2 - K * K << ", residual " << row.residual << "); ";
    }
    os << "trend: " << to_string(rep.trend);
  } catch (const ConvergenceError& e) {
    l.pass = false;
    os << e.what();
  }
  l.detail = os.str();
  return l;
}

/// Energy estimate on random u: the example window {1..200} with C = 1, N = 2
/// and random hypothesis-satisfying graphs; plus the delta_1 hand values.
inline CheckLine example_energy_check(const WeightedGraph& g, std::uint64_t seed = 6) {
  CheckLine l{6, "energy-estimate"};
  Random rnd(seed);
  int violations = 0, chain_violations = 0, cases = 0;
  const auto window = prefix_window(200);
  for (int k = 0; k < 100; ++k) {
    const auto b = energy_estimate_check(g, rnd.vertex_function(window, rnd.uniform(0.02, 0.5)), 1.0, 2);
    ++cases;
    violations += !b.holds();
    chain_violations += !b.chain_holds();
  }
  for (int k = 0; k < 20; ++k) {
    const auto h = rnd.graph();
    for (int j = 0; j < 5; ++j) {
      const auto b = energy_estimate_check(h, rnd.vertex_function(h.vertices()));
      ++cases;
      violations += !b.holds();
      chain_violations += !b.chain_holds();
    }
  }
  const auto d1 = energy_estimate_check(g, VertexFunction::delta({1}), 1.0, 2);
  const bool hand = std::abs(d1.lhs - 0.25) <= 1e-15 && std::abs(d1.rhs - 12) <= 1e-12;
  l.pass = violations == 0 && chain_violations == 0 && hand;
  l.detail = std::to_string(violations) + " violations, " + std::to_string(chain_violations) +
             " chain violations in " + std::to_string(cases) + " cases; delta_1: lhs = " + detail::fmt(d1.lhs) +
             ", rhs = " + detail::fmt(d1.rhs);
  return l;
}

/// The intermediate inequality for I and its finite-n consequence, with
/// phi = phi_n for n in {1, 2, 4, 8}.
inline CheckLine example_sum_I_check(const WeightedGraph& g, std::uint64_t seed = 7) {
  CheckLine l{7, "sum-I-inequality"};
  Random rnd(seed);
  int violations = 0, finite_violations = 0, cases = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (double n : {1.0, 2.0, 4.0, 8.0}) {
    const CutoffFunction chi(g, {1}, n);
    const auto phi = chi.phi(g);
    std::vector<VertexId> pool;
    for (const auto& [x, d] : chi.support_ball().members) pool.push_back(x);
    std::sort(pool.begin(), pool.end());
    pool.push_back({pool.back().value + 1});
    for (int k = 0; k < 25; ++k) {
      const auto u = rnd.vertex_function(pool, 0.6);
      const auto r = sum_I_inequality_check(g, u, phi);
      const auto f = finite_cutoff_estimate(g, u, {1}, n, 0.5, 2);
      ++cases;
      violations += !r.holds();
      finite_violations += !f.holds();
      worst = std::min(worst, r.slack / std::max(r.scale, 1e-300));
    }
  }
  l.pass = violations == 0 && finite_violations == 0;
  l.detail = std::to_string(violations) + " violations of the I inequality, " + std::to_string(finite_violations) +
             " of the finite-n estimate, in " + std::to_string(cases) + " cases; min relative slack " +
             detail::fmt(worst);
  return l;
}

/// Cut-off properties (i)-(v) on the example for n = 1..20 and on random
/// finite graphs.
inline CheckLine example_cutoff_check(const WeightedGraph& g, std::uint64_t seed = 8) {
  CheckLine l{8, "cutoff"};
  int failures = 0;
  std::size_t edges = 0;
  std::string first;
  for (int n = 1; n <= 20; ++n) {
    const auto r = cutoff_property_check(g, {1}, n);
    edges += r.edges_checked;
    if (!r.ok()) {
      ++failures;
      if (first.empty()) first = "example n=" + std::to_string(n) + ": " + r.violations.front();
    }
  }
  Random rnd(seed);
  for (int k = 0; k < 20; ++k) {
    const auto h = rnd.graph();
    const double n = rnd.log_uniform(0.05, 2);
    const auto r = cutoff_property_check(h, {1}, n);
    edges += r.edges_checked;
    if (!r.ok()) {
      ++failures;
      if (first.empty()) first = "random graph " + std::to_string(k) + ": " + r.violations.front();
    }
  }
  l.pass = failures == 0;
  l.detail = std::to_string(failures) + " failing cases of 40; gradient bound checked on " + std::to_string(edges) +
             " edges" + (first.empty() ? "" : "; first: " + first);
  return l;
}

/// J_s bound over the dyadic sweep s = 1..128, and |J_s| <= 1e-10 scale for
/// s beyond the support radius. For such s, J_s = -(1/s) sum P f w exactly,
/// so the second part only holds when that moment vanishes; the detail
/// reports the moment-free facts (s J_s constant, (Hu,v) - (u,Hv) ~ 0).
inline CheckLine example_J_s_check(const WeightedGraph& g, std::uint64_t seed = 9) {
  CheckLine l{9, "J_s"};
  Random rnd(seed);
  int violations = 0, limit_violations = 0;
  double worst_limit = 0, worst_drift = 0, worst_symmetry = 0;
  const auto pool = prefix_window(40);
  for (int k = 0; k < 50; ++k) {
    const auto u = rnd.vertex_function(pool, 0.3), v = rnd.vertex_function(pool, 0.3);
    for (double s = 1; s <= 128; s *= 2) violations += !J_s_bound_check(g, u, v, {1}, s).holds();
    double radius = 0;
    for (VertexId x : closed_neighborhood(g, detail::joint_support(u, v))) radius = std::max(radius, anchor(g, {1}, x));
    const double s1 = 2 * radius + 1, s2 = 4 * radius + 3;
    const auto j1 = J_s_detailed(g, u, v, {1}, s1), j2 = J_s_detailed(g, u, v, {1}, s2);
    worst_limit = std::max(worst_limit, std::abs(j1.value) / std::max(j1.scale, 1e-300));
    limit_violations += std::abs(j1.value) > 1e-10 * j1.scale;
    worst_drift = std::max(worst_drift, std::abs(s1 * j1.value - s2 * j2.value) / std::max(s1 * j1.scale, 1e-300));
    worst_symmetry = std::max(worst_symmetry, symmetry_residual(g, u, v).relative());
  }
  l.pass = violations == 0 && limit_violations == 0;
  l.detail = std::to_string(violations) + " bound violations in 400 (u, v, s) cases; beyond the support radius " +
             std::to_string(limit_violations) + "/50 exceed 1e-10 scale (max |J_s|/scale = " +
             detail::fmt(worst_limit) + "); max drift of s J_s = " + detail::fmt(worst_drift) +
             "; max |(Hu,v)-(u,Hv)| relative = " + detail::fmt(worst_symmetry);
  return l;
}

inline std::vector<CheckLine> run_worked_example() {
  const auto g = worked_example_graph();
  return {example_metric_check(g), example_lipschitz_check(g), example_spectrum_check(g), example_energy_check(g),
          example_sum_I_check(g),  example_cutoff_check(g),    example_J_s_check(g)};
}

}  // namespace magschro
