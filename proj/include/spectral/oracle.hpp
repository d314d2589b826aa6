#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "spectral/dense_matrix.hpp"
#include "spectral/embedding.hpp"
#include "spectral/error.hpp"
#include "spectral/graph.hpp"
#include "spectral/linalg.hpp"
#include "spectral/random.hpp"

namespace spectral {

/// Hard cap on the vertex count of exhaustive searches.
inline constexpr std::size_t kMaxEnumerationVertices = 12;

/// Number of partitions of n items into exactly k nonempty blocks.
inline std::uint64_t stirling2(std::size_t n, std::size_t k) {
  std::vector<std::uint64_t> row(k + 1, 0);
  row[0] = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = std::min(i, k); j >= 1; --j) row[j] = j * row[j] + row[j - 1];
    row[0] = 0;
  }
  return row[k];
}

/// Calls `visit(labels)` for every restricted growth string of length n
/// with exactly k distinct values, in lexicographic order. Each string is the
/// canonical labeling of one set partition.
template <typename Visitor>
void for_each_restricted_growth(std::size_t n, std::size_t k, Visitor&& visit) {
  if (k == 0 || k > n) return;
  std::vector<std::size_t> labels(n, 0);
  // Depth-first over positions; `blocks` counts distinct values in labels[0..i).
  auto recurse = [&](auto&& self, std::size_t i, std::size_t blocks) -> void {
    if (i == n) {
      if (blocks == k) visit(static_cast<const std::vector<std::size_t>&>(labels));
      return;
    }
    const std::size_t top = std::min(blocks, k - 1);
    for (std::size_t v = 0; v <= top; ++v) {
      const std::size_t used = v == blocks ? blocks + 1 : blocks;
      if (used + (n - i - 1) < k) continue;
      labels[i] = v;
      self(self, i + 1, used);
    }
  };
  labels[0] = 0;
  recurse(recurse, 1, 1);
}

struct EnumerationResult {
  Partition best_partition;
  double best_value;
  std::uint64_t partitions_checked;
};

/// Exact maximizer of the discrete objective over every k-partition. Ties
/// (within 1e-12 relative) keep the lexicographically smallest labeling.
inline EnumerationResult enumerate_best(const AffinityGraph& g, const ObjectiveSpec& spec,
                                        std::size_t k, const WeightOptions& opts = {}) {
  const std::size_t n = g.vertex_count();
  if (n > kMaxEnumerationVertices) {
    throw Error(Errc::TooLarge, std::to_string(n) + " vertices exceed the enumeration cap of " +
                                    std::to_string(kMaxEnumerationVertices));
  }
  if (k < 1 || k > n) {
    throw Error(Errc::KOutOfRange, "k=" + std::to_string(k) + " with " + std::to_string(n) +
                                       " vertices");
  }
  const ObjectivePair pair = objective_pair(g, spec, opts);
  std::vector<std::size_t> best;
  double best_value = -std::numeric_limits<double>::infinity();
  std::uint64_t checked = 0;
  for_each_restricted_growth(n, k, [&](const std::vector<std::size_t>& labels) {
    ++checked;
    const double value = objective_value(pair, labels, k);
    if (best.empty() || value > best_value + 1e-12 * std::max(1.0, std::abs(best_value))) {
      best_value = value;
      best = labels;
    }
  });
  return {Partition(std::move(best), k), best_value, checked};
}

/// Gaussian fill (column by column, rows in order, one Box-Muller normal per
/// entry) followed by two passes of modified Gram-Schmidt.
inline DenseMatrix random_orthonormal(std::size_t rows, std::size_t k, SplitMix64& rng) {
  if (k > rows) throw Error(Errc::KOutOfRange, "more orthonormal columns than rows");
  DenseMatrix x(rows, k);
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i < rows; ++i) x(i, c) = rng.normal();
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<double> col = x.column(c);
    const double r = linalg_detail::orthogonalize(col, x, c);
    for (double& v : col) v /= r;
    x.set_column(c, col);
  }
  return x;
}

/// Symmetric matrix with standard normal entries on and above the diagonal.
inline DenseMatrix random_symmetric(std::size_t n, SplitMix64& rng) {
  DenseMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      h(i, j) = rng.normal();
      h(j, i) = h(i, j);
    }
  return h;
}

inline DenseMatrix random_gaussian(std::size_t rows, std::size_t cols, SplitMix64& rng) {
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.normal();
  return m;
}

/// Entries uniform on (0, 1].
inline DenseMatrix random_nonnegative(std::size_t rows, std::size_t cols, SplitMix64& rng) {
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform();
  return m;
}

/// tr(X^T H Y).
inline double bilinear_trace(const DenseMatrix& x, const DenseMatrix& h, const DenseMatrix& y) {
  if (x.rows() != h.rows() || y.rows() != h.cols() || x.cols() != y.cols()) {
    throw Error(Errc::DimensionMismatch, "shapes do not match in tr(X^T H Y)");
  }
  double t = 0.0;
  for (std::size_t i = 0; i < h.rows(); ++i) {
    for (std::size_t j = 0; j < h.cols(); ++j) {
      const double hij = h(i, j);
      if (hij == 0.0) continue;
      for (std::size_t c = 0; c < x.cols(); ++c) t += x(i, c) * hij * y(j, c);
    }
  }
  return t;
}

struct KyFanSymmetricReport {
  /// tr(X^T H X) at the top-k eigenvector stack.
  double eigen_trace;
  /// Sum of the top-k eigenvalues.
  double eigenvalue_sum;
  /// Best tr(X^T H X) over the random orthonormal competitors.
  double max_random_trace;
};

/// Checks the symmetric trace maximum against `trials` random orthonormal
/// competitors; trial i draws from the sub-stream derive_seed(seed, i).
inline KyFanSymmetricReport kyfan_symmetric_check(const DenseMatrix& h, std::size_t k,
                                                  std::size_t trials, std::uint64_t seed) {
  const EigenDecomposition eig = eigh(h, k);
  KyFanSymmetricReport rep{bilinear_trace(eig.vectors, h, eig.vectors),
                           std::accumulate(eig.values.begin(), eig.values.end(), 0.0),
                           -std::numeric_limits<double>::infinity()};
  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(seed, t));
    const DenseMatrix x = random_orthonormal(h.rows(), k, rng);
    rep.max_random_trace = std::max(rep.max_random_trace, bilinear_trace(x, h, x));
  }
  return rep;
}

struct KyFanRectReport {
  /// tr(U_k^T R V_k) from the singular vectors.
  double svd_trace;
  /// Sum of the top-k singular values.
  double singular_sum;
  /// Symmetric-embedding route: half the trace of [X;Y]^T Psi [X;Y] with
  /// [X;Y] = sqrt(2) times the top-k eigenvectors of Psi = [[0,R],[R^T,0]].
  double psi_trace;
  /// Sum of the top-k eigenvalues of Psi.
  double psi_eigenvalue_sum;
  /// Best tr(X^T R Y) over random orthonormal (X, Y) pairs.
  double max_random_trace;
};

inline KyFanRectReport kyfan_rect_check(const DenseMatrix& r, std::size_t k, std::size_t trials,
                                        std::uint64_t seed) {
  const SvdResult s = svd(r, k);
  const std::size_t m = r.rows();
  const std::size_t n = r.cols();

  DenseMatrix psi(m + n, m + n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      psi(i, m + j) = r(i, j);
      psi(m + j, i) = r(i, j);
    }
  const EigenDecomposition eig = eigh(psi, k);
  DenseMatrix scaled = eig.vectors;
  for (std::size_t i = 0; i < scaled.rows(); ++i)
    for (std::size_t c = 0; c < k; ++c) scaled(i, c) *= std::sqrt(2.0);

  KyFanRectReport rep{bilinear_trace(s.u, r, s.v),
                      std::accumulate(s.sigma.begin(), s.sigma.end(), 0.0),
                      0.5 * bilinear_trace(scaled, psi, scaled),
                      std::accumulate(eig.values.begin(), eig.values.end(), 0.0),
                      -std::numeric_limits<double>::infinity()};
  for (std::size_t t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(seed, t));
    const DenseMatrix x = random_orthonormal(m, k, rng);
    const DenseMatrix y = random_orthonormal(n, k, rng);
    rep.max_random_trace = std::max(rep.max_random_trace, bilinear_trace(x, r, y));
  }
  return rep;
}

struct RelaxationGap {
  double relaxed;
  double discrete;
  double gap;
};

/// Relaxed optimum (mean of the top-k eigenvalues of the normalized matrix)
/// against the exhaustive discrete optimum.
inline RelaxationGap relaxation_gap(const AffinityGraph& g, const ObjectiveSpec& spec,
                                    std::size_t k, const WeightOptions& opts = {}) {
  const EnumerationResult best = enumerate_best(g, spec, k, opts);
  const EigenDecomposition eig = eigh(normalized_matrix(g, spec, opts), k);
  const double relaxed =
      std::accumulate(eig.values.begin(), eig.values.end(), 0.0) / static_cast<double>(k);
  return {relaxed, best.best_value, relaxed - best.best_value};
}

}  // namespace spectral
