#pragma once

// Energy sums and a-priori estimates for finitely supported functions, the
// anchor function P = d_{w,a;q}(x0, .) and the symmetry defect J_s.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "magschro/calculus.hpp"
#include "magschro/error.hpp"
#include "magschro/fields.hpp"
#include "magschro/hypothesis.hpp"
#include "magschro/metric.hpp"

namespace magschro {

namespace detail {

inline void require_real(const VertexFunction& phi, const char* name) {
  for (const auto& [x, v] : phi)
    if (v.imag() != 0) throw InputError(std::string(name) + " must be real-valued", "vertex " + std::to_string(x.value));
}

template <class Vertices>
void require_minorant(const WeightedGraph& g, const Vertices& window, const char* what) {
  const auto m = minorant_check(g, window);
  if (!m.pass)
    throw CheckRefused(std::string(what) + ": W >= -q fails at vertex " + std::to_string(m.witness->value) +
                       " (violation " + std::to_string(m.worst_violation) + ")");
}

inline std::set<VertexId> joint_support(const VertexFunction& u, const VertexFunction& v) {
  std::set<VertexId> s;
  for (const auto& [x, val] : u) s.insert(x);
  for (const auto& [x, val] : v) s.insert(x);
  return s;
}

inline double min_q_inverse(const WeightedGraph& g, const OrientedEdge& e) {
  return std::min(1 / g.vertex(e.origin).q, 1 / g.vertex(e.terminus).q);
}

/// E_f = (sum a min{q^{-1}} |d_sigma f|^2)^{1/2}.
inline double energy_root(const WeightedGraph& g, const VertexFunction& f) {
  const auto df = d_sigma(g, f);
  double sum = 0;
  for (const OrientedEdge& e : df.edges()) sum += min_q_inverse(g, e) * g.edge(e).a * std::norm(df(e));
  return std::sqrt(sum);
}

}  // namespace detail

/// I = (sum over E_s of a |d_sigma u|^2 (phi^2)^#)^{1/2}.
inline double sum_I(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& phi) {
  detail::require_real(phi, "phi");
  const auto du = d_sigma(g, u);
  double sum = 0;
  for (const OrientedEdge& stored : du.edges()) {
    const OrientedEdge e = g.canonical(stored);
    const double p_o = phi(e.origin).real(), p_t = phi(e.terminus).real();
    sum += g.edge(e).a * std::norm(du(e)) * (p_o * p_o + p_t * p_t) / 2;
  }
  return std::sqrt(sum);
}

struct SumIReport {
  double I{0};
  double lhs{0};  // I^2
  double h_term{0};   // |(phi^2 Hu, u)|
  double q_term{0};   // (phi^2 q u, u)
  double gradient_term{0};  // 2 I (sum a |d phi|^2 |(conj u)_sigma^#|^2)^{1/2}
  double rhs{0};
  double slack{0};
  double scale{0};

  bool holds(double rel_tol = 1e-10) const { return slack >= -rel_tol * std::max(scale, 1.0); }
};

/// Both sides of I^2 <= |(phi^2 Hu, u)| + (phi^2 q u, u) + 2 I (...)^{1/2}.
inline SumIReport sum_I_inequality_check(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& phi) {
  detail::require_real(phi, "phi");
  detail::require_minorant(g, closed_neighborhood(g, phi.support()), "sum-I inequality");
  SumIReport r;
  r.I = sum_I(g, u, phi);
  r.lhs = r.I * r.I;

  const auto Hu = schrodinger_apply(g, u);
  std::complex<double> h(0);
  for (const auto& [x, ux] : u) {
    const double p = phi(x).real();
    const auto rec = g.vertex(x);
    h += rec.w * p * p * Hu(x) * std::conj(ux);
    r.q_term += rec.w * p * p * rec.q * std::norm(ux);
  }
  r.h_term = std::abs(h);

  const auto dphi = d_plain(g, phi);
  const auto ubar = u.conj();
  double grad = 0;
  for (const OrientedEdge& stored : dphi.edges()) {
    const OrientedEdge e = g.canonical(stored);
    grad += g.edge(e).a * std::norm(dphi(e)) * std::norm(sharp_sigma(g, ubar, e));
  }
  r.gradient_term = 2 * r.I * std::sqrt(grad);
  r.rhs = r.h_term + r.q_term + r.gradient_term;
  r.slack = r.rhs - r.lhs;
  r.scale = r.lhs + r.rhs;
  return r;
}

struct EdgeContribution {
  OrientedEdge edge;
  double min_q_inverse{0};
  double a{0};
  double du_squared{0};
  double value{0};  // min_q_inverse * a * du_squared
};

struct EnergyBreakdown {
  double lhs{0};
  double rhs{0};
  double C{0};
  std::size_t N{0};
  /// True when C and N were taken from the local best values on supp(u).
  bool C_derived{false};
  bool N_derived{false};
  std::vector<EdgeContribution> contributions;
  double norm_u{0};
  double norm_Hu{0};
  /// Same sum with min{q^{-1}} replaced by the average (q^{-1})^#.
  double averaged_lhs{0};
  double slack{0};
  double scale{0};

  bool holds(double rel_tol = 1e-10) const { return slack >= -rel_tol * std::max(scale, 1.0); }
  /// lhs <= averaged_lhs <= rhs, each up to rounding.
  bool chain_holds(double rel_tol = 1e-10) const {
    const double tol = rel_tol * std::max(scale, 1.0);
    return lhs <= averaged_lhs + tol && averaged_lhs <= rhs + tol;
  }
};

/// sum min{q^{-1}} a |d_sigma u|^2 <= 2((2 C^2 N + 1) ||u||^2 + ||Hu|| ||u||).
/// Only edges meeting supp(u) enter the argument, so C and N default to the
/// best constants over those edges and vertices. User-supplied constants
/// smaller than the local ones are refused, as is a failing minorant.
inline EnergyBreakdown energy_estimate_check(const WeightedGraph& g, const VertexFunction& u,
                                             std::optional<double> C = std::nullopt,
                                             std::optional<std::size_t> N = std::nullopt) {
  EnergyBreakdown b;
  const auto support = u.support();
  const auto hood = closed_neighborhood(g, support);
  detail::require_minorant(g, hood, "energy estimate");

  const double C_local = lipschitz_best_constant(g, support).C_best;
  std::size_t N_local = 0;
  for (VertexId x : hood) N_local = std::max(N_local, g.degree(x));
  if (C && *C + 1e-12 < C_local)
    throw CheckRefused("Lipschitz constant C = " + std::to_string(*C) + " below the local best " +
                       std::to_string(C_local));
  if (N && *N < N_local)
    throw CheckRefused("degree bound N = " + std::to_string(*N) + " below the local degree " +
                       std::to_string(N_local));
  b.C = C.value_or(C_local);
  b.N = N.value_or(N_local);
  b.C_derived = !C;
  b.N_derived = !N;

  const auto du = d_sigma(g, u);
  for (const OrientedEdge& stored : du.edges()) {
    const OrientedEdge e = g.canonical(stored);
    const auto o = g.vertex(e.origin), t = g.vertex(e.terminus);
    EdgeContribution c{e, std::min(1 / o.q, 1 / t.q), g.edge(e).a, std::norm(du(e)), 0};
    c.value = c.min_q_inverse * c.a * c.du_squared;
    b.lhs += c.value;
    b.averaged_lhs += (1 / o.q + 1 / t.q) / 2 * c.a * c.du_squared;
    b.contributions.push_back(c);
  }
  b.norm_u = norm_w(g, u);
  b.norm_Hu = norm_w(g, schrodinger_apply(g, u));
  const double N_d = static_cast<double>(b.N);
  b.rhs = 2 * ((2 * b.C * b.C * N_d + 1) * b.norm_u * b.norm_u + b.norm_Hu * b.norm_u);
  b.slack = b.rhs - b.lhs;
  b.scale = b.lhs + b.rhs;
  return b;
}

struct FiniteCutoffEstimate {
  double n{0};
  double I_squared{0};
  double rhs{0};
  double slack{0};
  double scale{0};

  bool holds(double rel_tol = 1e-10) const { return slack >= -rel_tol * std::max(scale, 1.0); }
};

/// I_n^2 <= 2(||Hu|| ||u|| + (2N (1/n + C)^2 + 1) ||u||^2) with I_n = sum_I(u, phi_n).
inline FiniteCutoffEstimate finite_cutoff_estimate(const WeightedGraph& g, const VertexFunction& u, VertexId x0,
                                                   double n, double C, std::size_t N,
                                                   std::size_t budget = default_budget()) {
  const CutoffFunction chi(g, x0, n, budget);
  FiniteCutoffEstimate r;
  r.n = n;
  const double I = sum_I(g, u, chi.phi(g));
  r.I_squared = I * I;
  const double nu = norm_w(g, u), nHu = norm_w(g, schrodinger_apply(g, u));
  const double k = 1 / n + C;
  r.rhs = 2 * (nHu * nu + (2 * static_cast<double>(N) * k * k + 1) * nu * nu);
  r.slack = r.rhs - r.I_squared;
  r.scale = r.rhs + r.I_squared;
  return r;
}

// ---------------------------------------------------------------------------
// P and J_s

/// P(x) = d_{w,a;q}(x0, x), cached over a settled ball.
class AnchorFunction {
 public:
  AnchorFunction(const WeightedGraph& g, VertexId x0, double radius, std::size_t budget = default_budget())
      : ball_(ball(g, x0, radius, LengthMode::with_q, budget)) {
    if (!ball_.complete)
      throw BudgetExhausted("ball of radius " + std::to_string(radius) + " around " + std::to_string(x0.value) +
                            " not settled within budget");
  }

  VertexId base() const { return ball_.center; }
  double radius() const { return ball_.radius; }

  /// P(x) if d(x0, x) <= radius, else nullopt.
  std::optional<double> operator()(VertexId x) const {
    auto it = ball_.members.find(x);
    if (it == ball_.members.end()) return std::nullopt;
    return it->second;
  }

  /// The sublevel set U_radius = {P <= radius}.
  const std::map<VertexId, double>& sublevel() const { return ball_.members; }

 private:
  MetricBall ball_;
};

inline double anchor(const WeightedGraph& g, VertexId x0, VertexId x, std::size_t budget = default_budget()) {
  const auto d = distance(g, x0, x, LengthMode::with_q, budget);
  if (!d.resolved())
    throw BudgetExhausted("P(" + std::to_string(x.value) + ") unresolved after " + std::to_string(d.settled) +
                          " vertices");
  return *d.value;
}

struct JsValue {
  std::complex<double> value;
  /// sum of |summand| over the joint support.
  double scale{0};
};

/// J_s = sum_x (1 - P(x)/s)^+ ((Hu)(x) conj v(x) - u(x) conj (Hv)(x)) w(x),
/// summed in ascending vertex order. The summand vanishes off
/// supp(u) u supp(v), so P is only resolved there; vertices of the joint
/// support that lie beyond radius s carry weight zero.
inline JsValue J_s_detailed(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& v, VertexId x0,
                            double s, std::size_t budget = default_budget()) {
  if (!(s > 0)) throw InputError("s must be positive");
  const auto support = detail::joint_support(u, v);
  SearchLimits limits;
  limits.budget = budget;
  limits.radius = s;
  limits.targets.assign(support.begin(), support.end());
  const auto P = shortest_paths(g, x0, LengthMode::with_q, limits);
  if (P.budget_exhausted)
    throw BudgetExhausted("P not resolved on the support within radius " + std::to_string(s) + " after " +
                          std::to_string(P.distance.size()) + " vertices");
  const auto Hu = schrodinger_apply(g, u);
  const auto Hv = schrodinger_apply(g, v);
  JsValue out;
  for (VertexId x : support) {
    const auto p = P.find(x);
    if (!p) continue;
    const double weight = positive_part(1 - *p / s) * g.vertex(x).w;
    const auto a = Hu(x) * std::conj(v(x)), b = u(x) * std::conj(Hv(x));
    out.value += weight * (a - b);
    out.scale += weight * (std::abs(a) + std::abs(b));
  }
  return out;
}

inline std::complex<double> J_s(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& v, VertexId x0,
                                double s, std::size_t budget = default_budget()) {
  return J_s_detailed(g, u, v, x0, s, budget).value;
}

struct JsBoundReport {
  double s{0};
  double abs_J{0};
  double bound{0};
  double slack{0};
  double scale{0};
  double E_u{0};
  double E_v{0};
  std::size_t N{0};

  bool holds(double rel_tol = 1e-10) const { return slack >= -rel_tol * std::max(scale, 1.0); }
};

/// |J_s| <= (sqrt(N)/s)(||v|| E_u + ||u|| E_v). N defaults to the declared
/// degree bound, else to the largest degree around the supports.
inline JsBoundReport J_s_bound_check(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& v,
                                     VertexId x0, double s, std::optional<std::size_t> N = std::nullopt,
                                     std::size_t budget = default_budget()) {
  const auto J = J_s_detailed(g, u, v, x0, s, budget);
  JsBoundReport r;
  r.s = s;
  r.abs_J = std::abs(J.value);
  if (N) {
    r.N = *N;
  } else if (auto declared = g.degree_bound()) {
    r.N = *declared;
  } else {
    for (VertexId x : closed_neighborhood(g, detail::joint_support(u, v))) r.N = std::max(r.N, g.degree(x));
  }
  r.E_u = detail::energy_root(g, u);
  r.E_v = detail::energy_root(g, v);
  r.bound = std::sqrt(static_cast<double>(r.N)) / s * (norm_w(g, v) * r.E_u + norm_w(g, u) * r.E_v);
  r.slack = r.bound - r.abs_J;
  r.scale = J.scale + r.bound;
  return r;
}

}  // namespace magschro
