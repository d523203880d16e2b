#pragma once

// Windowed checks of the hypotheses of the self-adjointness criterion:
// bounded degree, the minorant condition W >= -q, the Lipschitz-type bound on
// q^{-1/2}, and completeness of d_{w,a;q}. Every result states the region it
// covers; only closed-form families get global statements.

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "magschro/calculus.hpp"
#include "magschro/fields.hpp"
#include "magschro/graph.hpp"
#include "magschro/metric.hpp"
#include "magschro/spectral.hpp"

namespace magschro {

/// f^+ = max{f, 0}.
inline double positive_part(double f) { return std::max(f, 0.0); }

struct MinorantResult {
  double worst_violation{0};
  std::optional<VertexId> witness;
  bool pass{true};
};

template <class Vertices>
MinorantResult minorant_check(const WeightedGraph& g, const Vertices& window) {
  MinorantResult r;
  for (VertexId x : window) {
    const auto d = g.vertex(x);
    const double gap = positive_part(-d.q - d.W);
    if (gap > r.worst_violation) {
      r.worst_violation = gap;
      r.witness = x;
    }
  }
  r.pass = r.worst_violation == 0;
  return r;
}

struct LipschitzResult {
  double C_best{0};
  std::optional<OrientedEdge> witness;
  std::size_t edges_checked{0};
};

/// |q^{-1/2}(t) - q^{-1/2}(o)| / sqrt(min{w(t), w(o)} / a(e)).
inline double lipschitz_ratio(const VertexData<double>& o, const VertexData<double>& t, double a) {
  return std::abs(1 / std::sqrt(t.q) - 1 / std::sqrt(o.q)) / std::sqrt(std::min(t.w, o.w) / a);
}

/// Smallest C for which the Lipschitz condition holds on every edge meeting
/// the window. Ties keep the first edge in canonical order.
template <class Vertices>
LipschitzResult lipschitz_best_constant(const WeightedGraph& g, const Vertices& window) {
  LipschitzResult r;
  for (const OrientedEdge& e : incident_canonical_edges(g, window)) {
    ++r.edges_checked;
    const double ratio = lipschitz_ratio(g.vertex(e.origin), g.vertex(e.terminus), g.edge(e).a);
    if (!r.witness || ratio > r.C_best) {
      r.C_best = ratio;
      r.witness = e;
    }
  }
  return r;
}

struct DegreeResult {
  std::size_t N_observed{0};
  std::optional<std::size_t> N_declared;
  bool pass{true};
};

template <class Vertices>
DegreeResult degree_check(const WeightedGraph& g, const Vertices& window) {
  DegreeResult r;
  r.N_declared = g.degree_bound();
  for (VertexId x : window) r.N_observed = std::max(r.N_observed, g.degree(x));
  r.pass = !r.N_declared || r.N_observed <= *r.N_declared;
  return r;
}

enum class Verdict { pass, fail, partial };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::partial: return "partial";
  }
  return "?";
}

struct HypothesisReport {
  DegreeResult degree;
  MinorantResult minorant;
  LipschitzResult lipschitz;
  std::optional<double> user_C;
  bool lipschitz_pass{true};
  CompletenessReport completeness;
  Verdict overall{Verdict::partial};
  std::size_t window_size{0};
  std::string scope;
};

/// Aggregates all four hypotheses over the vertices settled by a completeness
/// probe from x0 (the whole graph when it is finite).
inline HypothesisReport theorem1_report(const WeightedGraph& g, VertexId x0, std::size_t budget,
                                        std::optional<double> user_C = std::nullopt) {
  HypothesisReport rep;
  rep.completeness = completeness_probe(g, x0, budget);
  std::vector<VertexId> window = g.is_finite() ? g.vertices() : rep.completeness.explored;
  std::sort(window.begin(), window.end());
  rep.window_size = window.size();
  rep.degree = degree_check(g, window);
  rep.minorant = minorant_check(g, window);
  rep.lipschitz = lipschitz_best_constant(g, window);
  rep.user_C = user_C;
  rep.lipschitz_pass = !user_C || rep.lipschitz.C_best <= *user_C + 1e-12;

  const bool local_ok = rep.degree.pass && rep.minorant.pass && rep.lipschitz_pass;
  const auto& c = rep.completeness;
  if (!local_ok || c.verdict == CompletenessVerdict::incomplete) rep.overall = Verdict::fail;
  else if (c.verdict == CompletenessVerdict::complete && (c.exact || g.is_finite())) rep.overall = Verdict::pass;
  else rep.overall = Verdict::partial;

  std::ostringstream os;
  if (g.is_finite()) os << "whole graph (" << window.size() << " vertices)";
  else os << "window of " << window.size() << " vertices around " << x0;
  os << "; completeness " << c.label();
  rep.scope = os.str();
  return rep;
}

// ---------------------------------------------------------------------------
// Semi-boundedness

struct SemiboundedRow {
  std::size_t window_size{0};
  double lambda_min{0};
  double residual{0};
  /// min over x in the window of (H delta_x, delta_x) / ||delta_x||^2.
  double delta_rayleigh_min{0};
  VertexId delta_argmin;
};

enum class SemiboundedTrend { unbounded_below, no_verdict };

inline const char* to_string(SemiboundedTrend t) {
  return t == SemiboundedTrend::unbounded_below ? "not semi-bounded (lambda_min decreasing without deceleration)"
                                                : "no verdict (raw trend only)";
}

struct SemiboundedReport {
  std::vector<SemiboundedRow> rows;
  /// lambda_min nonincreasing along the (nested) window sequence.
  bool monotone{true};
  SemiboundedTrend trend{SemiboundedTrend::no_verdict};
};

inline double delta_rayleigh(const WeightedGraph& g, VertexId x) {
  const auto delta = VertexFunction::delta(x);
  return inner_w(g, schrodinger_apply(g, delta), delta).real() / std::pow(norm_w(g, delta), 2);
}

/// lambda_min and delta Rayleigh quotients over nested windows. The trend is
/// flagged unbounded only when lambda_min strictly decreases with
/// nondecreasing decrements; anything else is reported without a verdict.
inline SemiboundedReport semibounded_probe(const WeightedGraph& g, const std::vector<std::vector<VertexId>>& windows,
                                           const EigenOptions& opt = {}) {
  SemiboundedReport rep;
  for (const auto& w : windows) {
    const auto T = assemble_truncation(g, w);
    const auto ex = eigen_extremes(T, opt);
    SemiboundedRow row{T.window.size(), ex.lambda_min, ex.residual(), std::numeric_limits<double>::infinity(), {}};
    for (VertexId x : T.window)
      if (double r = delta_rayleigh(g, x); r < row.delta_rayleigh_min) row.delta_rayleigh_min = r, row.delta_argmin = x;
    rep.rows.push_back(row);
  }
  bool decelerating = false, strict = rep.rows.size() >= 3;
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    const double drop = rep.rows[i - 1].lambda_min - rep.rows[i].lambda_min;
    if (drop < -1e-9 * std::max(1.0, std::abs(rep.rows[i].lambda_min))) rep.monotone = false;
    if (drop <= 0) strict = false;
    if (i >= 2 && drop < rep.rows[i - 2].lambda_min - rep.rows[i - 1].lambda_min) decelerating = true;
  }
  if (strict && !decelerating) rep.trend = SemiboundedTrend::unbounded_below;
  return rep;
}

}  // namespace magschro
