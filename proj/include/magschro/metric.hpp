#pragma once

// The path metric d_{w,a;q}: edge length
//
//   min{w(o)^1/2, w(t)^1/2} * min{q(o)^-1/2, q(t)^-1/2} / sqrt(a(e)),
//
// shortest paths over a lazily explored graph, metric balls, completeness
// diagnostics and the cut-off functions chi_n built from d_{w,a;1}.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "magschro/error.hpp"
#include "magschro/fields.hpp"
#include "magschro/graph.hpp"

namespace magschro {

enum class LengthMode { with_q, unit_q };

inline const char* to_string(LengthMode m) { return m == LengthMode::with_q ? "with-q" : "unit-q"; }

/// Default cap on settled vertices; MAGSCHRO_BUDGET overrides it.
inline std::size_t default_budget() {
  if (const char* env = std::getenv("MAGSCHRO_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 2'000'000;
}

inline double edge_length(const VertexData<double>& o, const VertexData<double>& t, double a, LengthMode mode) {
  const double wmin = std::sqrt(std::min(o.w, t.w));
  const double qfac = mode == LengthMode::with_q ? 1.0 / std::sqrt(std::max(o.q, t.q)) : 1.0;
  return wmin * qfac / std::sqrt(a);
}

inline double edge_length(const WeightedGraph& g, const OrientedEdge& e, LengthMode mode) {
  return edge_length(g.vertex(e.origin), g.vertex(e.terminus), g.edge(e).a, mode);
}

struct SearchLimits {
  std::size_t budget = default_budget();
  double radius = std::numeric_limits<double>::infinity();
  std::optional<VertexId> target;
  /// Stop as soon as every vertex listed here is settled.
  std::vector<VertexId> targets;
};

/// Settled labels of a Dijkstra search. Labels are exact path-metric
/// distances; `frontier` is the smallest tentative label left unsettled
/// (+inf once a finite component is exhausted).
struct SearchResult {
  std::unordered_map<VertexId, double> distance;
  std::vector<VertexId> order;
  bool budget_exhausted = false;
  double frontier = std::numeric_limits<double>::infinity();

  std::optional<double> find(VertexId x) const {
    auto it = distance.find(x);
    if (it == distance.end()) return std::nullopt;
    return it->second;
  }
};

inline SearchResult shortest_paths(const WeightedGraph& g, VertexId source, LengthMode mode,
                                   const SearchLimits& limits = {}) {
  using Item = std::pair<double, std::int64_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::unordered_map<VertexId, double> tentative;
  std::unordered_map<VertexId, VertexData<double>> records;
  SearchResult result;

  auto record = [&](VertexId x) -> const VertexData<double>& {
    auto it = records.find(x);
    if (it == records.end()) it = records.emplace(x, g.vertex(x)).first;
    return it->second;
  };

  g.vertex(source);
  std::unordered_set<VertexId> pending(limits.targets.begin(), limits.targets.end());
  const bool use_targets = !pending.empty();
  tentative[source] = 0;
  queue.push({0.0, source.value});
  while (!queue.empty()) {
    const auto [d, id] = queue.top();
    const VertexId x{id};
    if (result.distance.count(x) || d > tentative[x]) {
      queue.pop();
      continue;
    }
    if (d > limits.radius) {
      result.frontier = d;
      break;
    }
    if (result.distance.size() >= limits.budget) {
      result.budget_exhausted = true;
      result.frontier = d;
      break;
    }
    queue.pop();
    result.distance[x] = d;
    result.order.push_back(x);
    if (limits.target && *limits.target == x) {
      // leave the frontier at the next candidate, if any
      while (!queue.empty() && (result.distance.count(VertexId{queue.top().second}) ||
                                queue.top().first > tentative[VertexId{queue.top().second}]))
        queue.pop();
      if (!queue.empty()) result.frontier = queue.top().first;
      return result;
    }
    if (use_targets && pending.erase(x) && pending.empty()) {
      result.frontier = d;
      return result;
    }
    const auto& rx = record(x);
    for (const auto& [e, data] : g.neighbors(x)) {
      if (result.distance.count(e.terminus)) continue;
      const double nd = d + edge_length(rx, record(e.terminus), data.a, mode);
      auto [it, inserted] = tentative.try_emplace(e.terminus, nd);
      if (inserted || nd < it->second) {
        it->second = nd;
        queue.push({nd, e.terminus.value});
      }
    }
  }
  if (queue.empty()) result.frontier = std::numeric_limits<double>::infinity();
  return result;
}

/// A distance, or the fact that the exploration budget ran out first.
struct DistanceOutcome {
  std::optional<double> value;
  std::size_t settled = 0;

  bool resolved() const { return value.has_value(); }
};

inline DistanceOutcome distance(const WeightedGraph& g, VertexId x, VertexId y, LengthMode mode,
                                std::size_t budget = default_budget()) {
  g.vertex(y);
  const auto r = shortest_paths(g, x, mode, {budget, std::numeric_limits<double>::infinity(), y});
  return {r.find(y), r.distance.size()};
}

struct MetricBall {
  VertexId center;
  double radius{0};
  LengthMode mode{LengthMode::with_q};
  std::map<VertexId, double> members;
  /// False when the budget ran out before every vertex within `radius` was settled.
  bool complete{true};

  bool contains(VertexId x) const { return members.count(x) != 0; }
};

inline MetricBall ball(const WeightedGraph& g, VertexId x0, double r, LengthMode mode,
                       std::size_t budget = default_budget()) {
  if (!(r >= 0)) throw InputError("ball radius must be nonnegative");
  const auto res = shortest_paths(g, x0, mode, {budget, r, std::nullopt});
  MetricBall b{x0, r, mode, {}, !res.budget_exhausted};
  for (const auto& [x, d] : res.distance) b.members.emplace(x, d);
  return b;
}

// ---------------------------------------------------------------------------
// Completeness

enum class CompletenessVerdict { complete, incomplete, inconclusive };

inline const char* to_string(CompletenessVerdict v) {
  switch (v) {
    case CompletenessVerdict::complete: return "complete";
    case CompletenessVerdict::incomplete: return "incomplete";
    case CompletenessVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct CompletenessReport {
  CompletenessVerdict verdict{CompletenessVerdict::inconclusive};
  /// True when the verdict is a closed-form fact about the whole graph, false
  /// when it is evidence from the explored region.
  bool exact{false};
  std::string rationale;
  /// Every vertex at distance <= settled_radius from x0 has been settled.
  double settled_radius{0};
  std::size_t settled{0};
  /// (settled count, frontier distance) at doubling checkpoints.
  std::vector<std::pair<std::size_t, double>> growth;
  /// (radius, ball size) at sampled radii.
  std::vector<std::pair<double, std::size_t>> ball_sizes;
  /// Vertices settled by the probe, ascending distance.
  std::vector<VertexId> explored;

  std::string label() const {
    return std::string(to_string(verdict)) + (exact ? " (exact)" : " (evidence)");
  }
};

inline CompletenessReport completeness_probe(const WeightedGraph& g, VertexId x0,
                                             std::size_t budget = default_budget()) {
  CompletenessReport rep;
  const auto res = shortest_paths(g, x0, LengthMode::with_q, {budget, std::numeric_limits<double>::infinity(), std::nullopt});
  rep.settled = res.order.size();
  rep.settled_radius = res.budget_exhausted ? res.frontier : std::numeric_limits<double>::infinity();
  rep.explored = res.order;

  std::vector<double> dist_by_rank;
  dist_by_rank.reserve(res.order.size());
  for (VertexId x : res.order) dist_by_rank.push_back(res.distance.at(x));
  for (std::size_t k = 1; k < dist_by_rank.size(); k *= 2) rep.growth.emplace_back(k, dist_by_rank[k]);
  if (res.budget_exhausted) rep.growth.emplace_back(dist_by_rank.size(), res.frontier);
  if (!dist_by_rank.empty()) {
    const double top = dist_by_rank.back();
    for (int i = 1; i <= 8; ++i) {
      const double r = top * i / 8;
      const auto n = std::upper_bound(dist_by_rank.begin(), dist_by_rank.end(), r) - dist_by_rank.begin();
      rep.ball_sizes.emplace_back(r, static_cast<std::size_t>(n));
    }
  }

  if (g.is_finite()) {
    rep.verdict = CompletenessVerdict::complete;
    rep.exact = true;
    rep.rationale = "finite graph: every finite metric space is complete";
    return rep;
  }

  if (const RayModel* ray = g.ray_model(); ray && ray->length_exponent_with_q) {
    const double p = *ray->length_exponent_with_q;
    rep.exact = true;
    // The ray is complete iff the edge lengths ~ c k^p have a divergent sum.
    if (p >= -1.0 - 1e-12) {
      rep.verdict = CompletenessVerdict::complete;
      rep.rationale = "ray with edge lengths ~ k^" + std::to_string(p) + ": divergent series";
    } else {
      rep.verdict = CompletenessVerdict::incomplete;
      rep.rationale = "ray with edge lengths ~ k^" + std::to_string(p) + ": convergent series";
    }
    return rep;
  }

  if (!res.budget_exhausted) {
    rep.verdict = CompletenessVerdict::complete;
    rep.exact = true;
    rep.rationale = "connected component exhausted within budget: finite";
    return rep;
  }

  // Frontier growth over the last three doublings of the settled count.
  if (rep.growth.size() >= 4) {
    const auto n = rep.growth.size();
    const double d1 = rep.growth[n - 3].second - rep.growth[n - 4].second;
    const double d2 = rep.growth[n - 2].second - rep.growth[n - 3].second;
    const double d3 = rep.growth[n - 1].second - rep.growth[n - 2].second;
    if (d2 > 0 && d3 >= 0.5 * d2) {
      rep.verdict = CompletenessVerdict::complete;
      rep.rationale = "frontier distance keeps growing under doubling of the explored region";
    } else if (d1 > 0 && d2 < 0.5 * d1 && d3 < 0.5 * d2) {
      rep.verdict = CompletenessVerdict::incomplete;
      rep.rationale = "frontier distance increments shrink geometrically: bounded frontier";
    } else {
      rep.rationale = "frontier growth is ambiguous";
    }
  } else {
    rep.rationale = "too few vertices explored";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Cut-off functions

/// chi_n as a function of d = d_{w,a;1}(x0, x): ((2n - d)/n v 0) ^ 1.
inline double cutoff_value(double d, double n) { return std::clamp((2 * n - d) / n, 0.0, 1.0); }

/// chi_n(x) for a single vertex.
inline double cutoff(const WeightedGraph& g, VertexId x0, double n, VertexId x,
                     std::size_t budget = default_budget()) {
  const auto d = distance(g, x0, x, LengthMode::unit_q, budget);
  if (!d.resolved()) throw BudgetExhausted("distance to vertex " + std::to_string(x.value) + " unresolved");
  return cutoff_value(*d.value, n);
}

/// chi_n on the whole graph, from the unit-q ball of radius 2n (outside of
/// which it vanishes).
class CutoffFunction {
 public:
  CutoffFunction(const WeightedGraph& g, VertexId x0, double n, std::size_t budget = default_budget())
      : x0_(x0), n_(n), ball_(ball(g, x0, 2 * n, LengthMode::unit_q, budget)) {
    if (!(n > 0)) throw InputError("cut-off index n must be positive");
    if (!ball_.complete) throw BudgetExhausted("ball B_2n not settled within budget");
  }

  double operator()(VertexId x) const {
    auto it = ball_.members.find(x);
    return it == ball_.members.end() ? 0.0 : cutoff_value(it->second, n_);
  }

  double n() const { return n_; }
  VertexId base() const { return x0_; }
  const MetricBall& support_ball() const { return ball_; }

  VertexFunction as_function() const {
    VertexFunction f;
    for (const auto& [x, d] : ball_.members)
      if (double v = cutoff_value(d, n_); v > 0) f.set(x, v);
    return f;
  }

  /// phi_n = chi_n q^{-1/2}.
  VertexFunction phi(const WeightedGraph& g) const {
    VertexFunction f;
    for (const auto& [x, d] : ball_.members)
      if (double v = cutoff_value(d, n_); v > 0) f.set(x, v / std::sqrt(g.vertex(x).q));
    return f;
  }

 private:
  VertexId x0_;
  double n_;
  MetricBall ball_;
};

struct CutoffReport {
  bool range_ok = true;           // (i)
  bool plateau_ok = true;         // (ii)
  bool convergence_ok = true;     // (iii)
  bool finite_support_ok = true;  // (iv)
  bool gradient_ok = true;        // (v)
  std::size_t edges_checked = 0;
  std::size_t vertices_checked = 0;
  /// max over checked edges of |d chi_n(e)| / (d_{w,a;1}(o,t)/n).
  double max_gradient_ratio = 0;
  std::vector<std::string> violations;

  bool ok() const { return range_ok && plateau_ok && convergence_ok && finite_support_ok && gradient_ok; }
};

inline CutoffReport cutoff_property_check(const WeightedGraph& g, VertexId x0, double n,
                                          std::size_t budget = default_budget()) {
  constexpr double tol = 1e-12;
  CutoffReport rep;
  const CutoffFunction chi(g, x0, n, budget);
  const auto& members = chi.support_ball().members;
  auto fail = [&](bool& flag, std::string what) {
    flag = false;
    rep.violations.push_back(std::move(what));
  };

  std::set<VertexId> boundary;
  for (const auto& [x, d] : members) {
    ++rep.vertices_checked;
    const double v = chi(x);
    if (!(v >= 0 && v <= 1)) fail(rep.range_ok, "(i) chi out of [0,1] at " + std::to_string(x.value));
    if (d <= n && v != 1.0) fail(rep.plateau_ok, "(ii) chi != 1 on B_n at " + std::to_string(x.value));
    // (iii) chi_m(x) is nondecreasing in m and reaches 1 once m >= d(x0, x)
    double prev = v;
    for (double m = 2 * n; m <= 64 * n; m *= 2) {
      const double vm = cutoff_value(d, m);
      if (vm + tol < prev) fail(rep.convergence_ok, "(iii) chi_m decreasing at " + std::to_string(x.value));
      prev = vm;
    }
    if (cutoff_value(d, std::max(n, d)) != 1.0)
      fail(rep.convergence_ok, "(iii) chi_m(x) != 1 for m >= d at " + std::to_string(x.value));
    for (const auto& nb : g.neighbors(x))
      if (!members.count(nb.edge.terminus)) boundary.insert(nb.edge.terminus);
  }
  for (VertexId y : boundary) {
    ++rep.vertices_checked;
    if (chi(y) != 0.0) fail(rep.plateau_ok, "(ii) chi != 0 outside B_2n at " + std::to_string(y.value));
  }
  if (!chi.support_ball().complete) fail(rep.finite_support_ok, "(iv) support not settled");

  // (v) |chi(t) - chi(o)| <= d_{w,a;1}(o, t) / n on every edge meeting the support
  std::set<OrientedEdge> edges;
  for (const auto& [x, d] : members)
    if (chi(x) > 0)
      for (const auto& nb : g.neighbors(x)) edges.insert(g.canonical(nb.edge));
  for (const OrientedEdge& e : edges) {
    ++rep.edges_checked;
    const double len = edge_length(g, e, LengthMode::unit_q);
    const auto local = shortest_paths(g, e.origin, LengthMode::unit_q, {budget, len, e.terminus});
    const double dot = local.find(e.terminus).value_or(len);
    const double grad = std::abs(chi(e.terminus) - chi(e.origin));
    const double bound = dot / n;
    if (bound > 0) rep.max_gradient_ratio = std::max(rep.max_gradient_ratio, grad / bound);
    if (grad > bound + tol) {
      std::ostringstream os;
      os << "(v) gradient bound fails on " << e << ": " << grad << " > " << bound;
      fail(rep.gradient_ok, os.str());
    }
  }
  return rep;
}

}  // namespace magschro
