#pragma once

// Dirichlet truncations of H on finite vertex windows. The matrix acts on
// functions supported in the window and keeps the full degree term of every
// window vertex, so M u = (H u)|_window exactly.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "magschro/calculus.hpp"
#include "magschro/error.hpp"
#include "magschro/fields.hpp"
#include "magschro/graph.hpp"

namespace magschro {

struct TruncatedOperator {
  std::vector<VertexId> window;
  std::map<VertexId, Eigen::Index> index;
  /// Row-major sparse M; M(x, y) for x, y in the window.
  Eigen::SparseMatrix<std::complex<double>, Eigen::RowMajor> matrix;
  Eigen::VectorXd weights;

  Eigen::Index size() const { return static_cast<Eigen::Index>(window.size()); }

  /// M u for u supported in the window (entries outside are ignored).
  VertexFunction apply(const VertexFunction& u) const {
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(size());
    for (const auto& [v, val] : u)
      if (auto it = index.find(v); it != index.end()) x[it->second] = val;
    const Eigen::VectorXcd y = matrix * x;
    VertexFunction out;
    for (Eigen::Index i = 0; i < size(); ++i) out.set(window[static_cast<std::size_t>(i)], y[i]);
    return out;
  }

  /// max |w(x) M[x][y] - conj(w(y) M[y][x])|.
  double w_hermitian_defect() const {
    double worst = 0;
    for (Eigen::Index i = 0; i < matrix.outerSize(); ++i)
      for (decltype(matrix)::InnerIterator it(matrix, i); it; ++it) {
        const Eigen::Index j = it.col();
        worst = std::max(worst, std::abs(weights[i] * it.value() - std::conj(weights[j] * matrix.coeff(j, i))));
      }
    return worst;
  }

  /// S = D_w^{1/2} M D_w^{-1/2}, Hermitian and similar to M.
  Eigen::SparseMatrix<std::complex<double>> symmetrized() const {
    const Eigen::VectorXd s = weights.cwiseSqrt();
    Eigen::SparseMatrix<std::complex<double>> S =
        (s.cast<std::complex<double>>().asDiagonal() * matrix * s.cwiseInverse().cast<std::complex<double>>().asDiagonal());
    Eigen::SparseMatrix<std::complex<double>> St = S.adjoint();
    return (S + St) * std::complex<double>(0.5);  // remove rounding asymmetry
  }
};

inline TruncatedOperator assemble_truncation(const WeightedGraph& g, std::vector<VertexId> window) {
  std::sort(window.begin(), window.end());
  window.erase(std::unique(window.begin(), window.end()), window.end());
  if (window.empty()) throw InputError("truncation window is empty");
  TruncatedOperator T;
  T.window = window;
  const auto n = static_cast<Eigen::Index>(window.size());
  std::vector<Eigen::Triplet<std::complex<double>>> entries;
  T.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) T.index[window[static_cast<std::size_t>(i)]] = i;
  for (Eigen::Index i = 0; i < n; ++i) {
    const VertexId x = window[static_cast<std::size_t>(i)];
    const auto rec = g.vertex(x);
    T.weights[i] = rec.w;
    double degree_term = 0;
    for (const auto& [e, data] : g.neighbors(x)) {
      degree_term += data.a;
      if (auto it = T.index.find(e.terminus); it != T.index.end())
        entries.emplace_back(i, it->second, -data.a * std::conj(data.sigma) / rec.w);
    }
    entries.emplace_back(i, i, degree_term / rec.w + rec.W);
  }
  T.matrix.resize(n, n);
  T.matrix.setFromTriplets(entries.begin(), entries.end());
  return T;
}

/// {first, first+1, ..., first+K-1}.
inline std::vector<VertexId> prefix_window(std::int64_t K, std::int64_t first = 1) {
  std::vector<VertexId> w;
  for (std::int64_t k = 0; k < K; ++k) w.push_back({first + k});
  return w;
}

struct EigenOptions {
  Eigen::Index dense_limit = 2000;
  double residual_tol = 1e-8;
  int krylov_dim = 300;
  int max_restarts = 60;
  std::uint64_t seed = 12345;
};

struct EigenExtremes {
  double lambda_min{0};
  double lambda_max{0};
  /// ||S v - lambda v|| / ||v|| for the returned pairs.
  double residual_min{0};
  double residual_max{0};
  Eigen::VectorXcd vector_min;
  Eigen::VectorXcd vector_max;
  std::string method;
  int iterations{0};

  double residual() const { return std::max(residual_min, residual_max); }
};

namespace detail {

struct RitzPair {
  double value;
  Eigen::VectorXcd vector;
  double residual;
  int iterations;
};

/// Lanczos with full reorthogonalization and explicit restarts from the
/// current Ritz vector. `lowest` selects the end of the spectrum.
inline RitzPair lanczos_extreme(const Eigen::SparseMatrix<std::complex<double>>& S, bool lowest,
                                const EigenOptions& opt) {
  const Eigen::Index n = S.rows();
  const int m = static_cast<int>(std::min<Eigen::Index>(n, opt.krylov_dim));
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd start(n);
  for (Eigen::Index i = 0; i < n; ++i) start[i] = {normal(rng), normal(rng)};

  RitzPair best{0, {}, std::numeric_limits<double>::infinity(), 0};
  int total = 0;
  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    Eigen::MatrixXcd V(n, m);
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(m), beta = Eigen::VectorXd::Zero(m);
    V.col(0) = start.normalized();
    int k = 0;
    for (; k < m; ++k) {
      Eigen::VectorXcd w = S * V.col(k);
      alpha[k] = V.col(k).dot(w).real();
      // two passes of classical Gram-Schmidt against the whole basis
      for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(k + 1) * (V.leftCols(k + 1).adjoint() * w);
      ++total;
      if (k + 1 == m) break;
      beta[k] = w.norm();
      if (beta[k] < 1e-14 * std::max(1.0, std::abs(alpha[k]))) break;  // invariant subspace
      V.col(k + 1) = w / beta[k];
    }
    const int dim = std::min(k + 1, m);
    Eigen::MatrixXd Tm = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
      Tm(i, i) = alpha[i];
      if (i + 1 < dim) Tm(i, i + 1) = Tm(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(Tm);
    const int pick = lowest ? 0 : dim - 1;
    Eigen::VectorXcd y = V.leftCols(dim) * small.eigenvectors().col(pick).cast<std::complex<double>>();
    y.normalize();
    const double theta = (y.dot(S * y)).real();
    const double res = (S * y - theta * y).norm();
    if (res < best.residual) best = {theta, y, res, total};
    if (res <= opt.residual_tol || dim < m) break;
    start = y;
  }
  best.iterations = total;
  return best;
}

}  // namespace detail

/// Extreme eigenvalues of the Hermitian form S of a truncation. Dense solve
/// up to `dense_limit` vertices, Lanczos above. Throws ConvergenceError when
/// the residual contract cannot be met.
inline EigenExtremes eigen_extremes(const TruncatedOperator& T, const EigenOptions& opt = {}) {
  EigenExtremes out;
  const Eigen::Index n = T.size();
  if (n <= opt.dense_limit) {
    const Eigen::MatrixXcd S = Eigen::MatrixXcd(T.symmetrized());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(S);
    if (solver.info() != Eigen::Success) throw ConvergenceError("dense Hermitian eigensolver failed");
    out.method = "dense";
    out.lambda_min = solver.eigenvalues()[0];
    out.lambda_max = solver.eigenvalues()[n - 1];
    out.vector_min = solver.eigenvectors().col(0);
    out.vector_max = solver.eigenvectors().col(n - 1);
    out.residual_min = (S * out.vector_min - out.lambda_min * out.vector_min).norm() / out.vector_min.norm();
    out.residual_max = (S * out.vector_max - out.lambda_max * out.vector_max).norm() / out.vector_max.norm();
  } else {
    const Eigen::SparseMatrix<std::complex<double>> S = T.symmetrized();
    const auto lo = detail::lanczos_extreme(S, true, opt);
    const auto hi = detail::lanczos_extreme(S, false, opt);
    out.method = "lanczos";
    out.lambda_min = lo.value;
    out.lambda_max = hi.value;
    out.vector_min = lo.vector;
    out.vector_max = hi.vector;
    out.residual_min = lo.residual;
    out.residual_max = hi.residual;
    out.iterations = lo.iterations + hi.iterations;
  }
  if (!(out.residual() <= opt.residual_tol)) {
    throw ConvergenceError(out.method + " eigensolver: residual " + std::to_string(out.residual()) +
                           " exceeds " + std::to_string(opt.residual_tol) + " after " +
                           std::to_string(out.iterations) + " iterations (window of " + std::to_string(n) +
                           " vertices)");
  }
  return out;
}

struct TrendRow {
  std::size_t window_size{0};
  double lambda_min{0};
  double lambda_max{0};
  double residual{0};
};

inline std::vector<TrendRow> spectral_trend(const WeightedGraph& g, const std::vector<std::vector<VertexId>>& windows,
                                            const EigenOptions& opt = {}) {
  std::vector<TrendRow> rows;
  for (const auto& w : windows) {
    const auto T = assemble_truncation(g, w);
    const auto ex = eigen_extremes(T, opt);
    rows.push_back({T.window.size(), ex.lambda_min, ex.lambda_max, ex.residual()});
  }
  return rows;
}

}  // namespace magschro
