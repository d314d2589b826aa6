#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spectral/dense_matrix.hpp"
#include "spectral/error.hpp"
#include "spectral/graph.hpp"
#include "spectral/linalg.hpp"

namespace spectral {

/// Relaxed cluster indicator matrix (the Q = I representative) with its
/// eigen- or singular values. Bipartite embeddings stack feature rows above
/// item rows; `row_split` is the index of the first item row.
struct SpectralEmbedding {
  DenseMatrix vectors;
  std::vector<double> values;
  std::optional<std::size_t> row_split;
};

/// Value of the relaxed trace objective: the mean of the embedding values.
inline double relaxed_value(const SpectralEmbedding& e) {
  return std::accumulate(e.values.begin(), e.values.end(), 0.0) /
         static_cast<double>(e.values.size());
}

/// Phi^{-1/2} affinity Phi^{-1/2} for the objective on any graph kind.
inline DenseMatrix normalized_matrix(const AffinityGraph& g, const ObjectiveSpec& spec,
                                     const WeightOptions& opts = {}) {
  const ObjectivePair pair = objective_pair(g, spec, opts);
  return scale_symmetric(pair.affinity, pair.phi);
}

inline SpectralEmbedding embed_unipartite(const AffinityGraph& g, const ObjectiveSpec& spec,
                                          std::size_t k, const WeightOptions& opts = {}) {
  if (g.kind() != GraphKind::Unipartite) {
    throw Error(Errc::WrongGraphKind, "embed_unipartite needs a unipartite graph");
  }
  EigenDecomposition eig = eigh(normalized_matrix(g, spec, opts), k);
  return {std::move(eig.vectors), std::move(eig.values), std::nullopt};
}

namespace embedding_detail {

inline void check_bipartite_k(const DenseMatrix& a, std::size_t k) {
  const std::size_t limit = std::min(a.rows(), a.cols());
  if (k < 1 || k > limit) {
    throw Error(Errc::KOutOfRange,
                "k=" + std::to_string(k) + " outside [1, " + std::to_string(limit) + "]");
  }
}

}  // namespace embedding_detail

/// Co-clustering through the (M+N)-vertex augmented graph. Works for every
/// objective; the eigenvalues of the augmented normalized matrix come in +-
/// pairs, so k is capped at min(M, N).
inline SpectralEmbedding embed_bipartite_augmented(const DenseMatrix& a, const ObjectiveSpec& spec,
                                                   std::size_t k, const WeightOptions& opts = {}) {
  embedding_detail::check_bipartite_k(a, k);
  const AffinityGraph g = AffinityGraph::bipartite(a);
  EigenDecomposition eig = eigh(normalized_matrix(g, spec, opts), k);
  return {std::move(eig.vectors), std::move(eig.values), a.rows()};
}

/// A_bar = Phi_1^{-1/2} A Phi_2^{-1/2} with feature weights Phi_1 and item
/// weights Phi_2.
///
/// Only the objectives whose augmented affinity keeps the [[0,A],[A^T,0]]
/// block shape reduce to A_bar; GWCuts and RCuts add a diagonal and are
/// rejected here (use the augmented path for them).
inline DenseMatrix normalize_bipartite(const DenseMatrix& a, const ObjectiveSpec& spec,
                                       const WeightOptions& opts = {}) {
  using namespace graph_detail;
  for (double x : a.data()) {
    if (x < 0.0) throw Error(Errc::NegativeEntry, "bipartite data matrix has a negative entry");
  }
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<double> features;
  std::vector<double> items;
  switch (spec.name()) {
    case Objective::GWCuts:
    case Objective::RCuts:
      throw Error(Errc::UnsupportedObjective,
                  std::string(objective_name(spec.name())) +
                      " has no direct bipartite form; use the augmented path");
    case Objective::RAssoc:
      features.assign(m, 1.0);
      items.assign(n, 1.0);
      break;
    case Objective::NAssoc:
    case Objective::NCuts:
      features = row_sums(a);
      items = column_sums(a);
      regularize(features, opts, "feature degree");
      regularize(items, opts, "item degree");
      break;
    case Objective::GWAssoc: {
      const std::vector<double> phi = custom_weights(spec, m + n);
      features.assign(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(m));
      items.assign(phi.begin() + static_cast<std::ptrdiff_t>(m), phi.end());
      break;
    }
  }
  DenseMatrix out(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = a(i, j) / std::sqrt(features[i] * items[j]);
  return out;
}

/// Co-clustering straight from the data matrix: the stacked [u_k; v_k]/sqrt(2)
/// of the top singular pairs of A_bar are unit eigenvectors of the augmented
/// normalized matrix with eigenvalue sigma_k.
inline SpectralEmbedding embed_bipartite_direct(const DenseMatrix& a, const ObjectiveSpec& spec,
                                                std::size_t k, const WeightOptions& opts = {}) {
  embedding_detail::check_bipartite_k(a, k);
  const SvdResult s = svd(normalize_bipartite(a, spec, opts), k);
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const double half = 1.0 / std::sqrt(2.0);
  DenseMatrix stacked(m + n, k);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i = 0; i < m; ++i) stacked(i, c) = s.u(i, c) * half;
    for (std::size_t j = 0; j < n; ++j) stacked(m + j, c) = s.v(j, c) * half;
  }
  return {std::move(stacked), s.sigma, m};
}

/// Separate row (feature) and column (item) embeddings: the top left and
/// right singular vectors of A_bar, i.e. the top eigenvectors of the row and
/// column affinity matrices A_bar A_bar^T and A_bar^T A_bar.
struct RowColEmbedding {
  DenseMatrix rows;
  DenseMatrix cols;
  std::vector<double> values;
};

inline RowColEmbedding row_col_embeddings(const DenseMatrix& a, const ObjectiveSpec& spec,
                                          std::size_t k, const WeightOptions& opts = {}) {
  embedding_detail::check_bipartite_k(a, k);
  SvdResult s = svd(normalize_bipartite(a, spec, opts), k);
  return {std::move(s.u), std::move(s.v), std::move(s.sigma)};
}

struct DirectedSymmetrization {
  DenseMatrix matrix;
  std::vector<double> phi_io;
};

/// Phi_io^{-1/2} (B + B^T) Phi_io^{-1/2}, with Phi_io = sqrt(Phi_in Phi_out)
/// for the normalized objectives. The cut objectives apply their Laplacian
/// transform to B + B^T first.
inline DirectedSymmetrization symmetrize_directed(const DenseMatrix& b, const ObjectiveSpec& spec,
                                                  const WeightOptions& opts = {}) {
  const ObjectivePair pair = objective_pair(AffinityGraph::directed(b), spec, opts);
  DenseMatrix s = scale_symmetric(pair.affinity, pair.phi);
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = i + 1; j < s.cols(); ++j) {
      const double avg = 0.5 * (s(i, j) + s(j, i));
      s(i, j) = avg;
      s(j, i) = avg;
    }
  return {std::move(s), pair.phi};
}

inline SpectralEmbedding embed_directed(const DenseMatrix& b, const ObjectiveSpec& spec,
                                        std::size_t k, const WeightOptions& opts = {}) {
  EigenDecomposition eig = eigh(symmetrize_directed(b, spec, opts).matrix, k);
  return {std::move(eig.vectors), std::move(eig.values), std::nullopt};
}

}  // namespace spectral
