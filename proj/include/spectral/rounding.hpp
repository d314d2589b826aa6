#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "spectral/dense_matrix.hpp"
#include "spectral/embedding.hpp"
#include "spectral/error.hpp"
#include "spectral/graph.hpp"
#include "spectral/random.hpp"

namespace spectral {

struct RoundingConfig {
  std::uint64_t seed = 0;
  std::size_t max_iters = 100;
  std::size_t restarts = 8;
  /// Stop once an iteration improves the within-cluster cost by less than
  /// this fraction.
  double tol = 1e-9;

  void validate() const {
    if (max_iters < 1) throw Error(Errc::InvalidArgument, "max_iters must be >= 1");
    if (restarts < 1) throw Error(Errc::InvalidArgument, "restarts must be >= 1");
    if (!(tol >= 0.0)) throw Error(Errc::InvalidArgument, "tol must be nonnegative");
  }
};

struct KMeansResult {
  Partition partition;
  /// Within-cluster sum of squared distances of `partition`.
  double cost;
  /// Cost after every Lloyd iteration of the winning restart.
  std::vector<double> history;
};

namespace rounding_detail {

inline double squared_distance(std::span<const double> x, std::span<const double> y) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

inline std::size_t distinct_rows(const DenseMatrix& points) {
  std::vector<std::size_t> order(points.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto less = [&](std::size_t a, std::size_t b) {
    const auto ra = points.row(a);
    const auto rb = points.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::sort(order.begin(), order.end(), less);
  std::size_t count = order.empty() ? 0 : 1;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (less(order[i - 1], order[i])) ++count;
  return count;
}

/// Farthest-first traversal from `start`; ties go to the lowest row index.
inline DenseMatrix farthest_first(const DenseMatrix& points, std::size_t k, std::size_t start) {
  const std::size_t n = points.rows();
  DenseMatrix centers(k, points.cols());
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  std::size_t pick = start;
  for (std::size_t c = 0; c < k; ++c) {
    std::copy(points.row(pick).begin(), points.row(pick).end(), centers.row(c).begin());
    for (std::size_t i = 0; i < n; ++i)
      nearest[i] = std::min(nearest[i], squared_distance(points.row(i), centers.row(c)));
    pick = static_cast<std::size_t>(
        std::distance(nearest.begin(), std::max_element(nearest.begin(), nearest.end())));
  }
  return centers;
}

inline std::size_t nearest_center(std::span<const double> x, const DenseMatrix& centers) {
  std::size_t best = 0;
  double best_d = squared_distance(x, centers.row(0));
  for (std::size_t c = 1; c < centers.rows(); ++c) {
    const double d = squared_distance(x, centers.row(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

/// Gives every empty cluster the point farthest from its current centroid
/// (among points whose cluster can spare one).
inline void repair_empty(const DenseMatrix& points, DenseMatrix& centers,
                         std::vector<std::size_t>& label) {
  const std::size_t k = centers.rows();
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t l : label) ++sizes[l];
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] != 0) continue;
    std::size_t far = points.rows();
    double far_d = -1.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
      if (sizes[label[i]] < 2) continue;
      const double d = squared_distance(points.row(i), centers.row(label[i]));
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    --sizes[label[far]];
    label[far] = c;
    sizes[c] = 1;
    std::copy(points.row(far).begin(), points.row(far).end(), centers.row(c).begin());
  }
}

inline double update_centers(const DenseMatrix& points, DenseMatrix& centers,
                             std::span<const std::size_t> label) {
  const std::size_t k = centers.rows();
  const std::size_t dim = points.cols();
  DenseMatrix sums(k, dim);
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t i = 0; i < points.rows(); ++i) {
    ++sizes[label[i]];
    for (std::size_t d = 0; d < dim; ++d) sums(label[i], d) += points(i, d);
  }
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t d = 0; d < dim; ++d) centers(c, d) = sums(c, d) / static_cast<double>(sizes[c]);
  double cost = 0.0;
  for (std::size_t i = 0; i < points.rows(); ++i)
    cost += squared_distance(points.row(i), centers.row(label[i]));
  return cost;
}

struct Run {
  std::vector<std::size_t> label;
  double cost;
  std::vector<double> history;
};

inline Run lloyd(const DenseMatrix& points, std::size_t k, std::size_t start,
                 const RoundingConfig& cfg) {
  DenseMatrix centers = farthest_first(points, k, start);
  std::vector<std::size_t> label(points.rows(), k);
  Run run{{}, std::numeric_limits<double>::infinity(), {}};
  for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
    std::vector<std::size_t> next(points.rows());
    for (std::size_t i = 0; i < points.rows(); ++i) next[i] = nearest_center(points.row(i), centers);
    repair_empty(points, centers, next);
    const bool changed = next != label;
    label = std::move(next);
    const double cost = update_centers(points, centers, label);
    const double previous = run.cost;
    run.cost = cost;
    run.history.push_back(cost);
    if (!changed) break;
    if (std::isfinite(previous) && previous - cost <= cfg.tol * previous) break;
  }
  run.label = std::move(label);
  return run;
}

}  // namespace rounding_detail

/// Seeded K-means over the rows of `points`, best of `cfg.restarts` runs.
/// Each restart seeds with a farthest-first traversal from a random row.
inline KMeansResult kmeans(const DenseMatrix& points, std::size_t k, const RoundingConfig& cfg) {
  using namespace rounding_detail;
  cfg.validate();
  if (k < 1 || k > points.rows()) {
    throw Error(Errc::KOutOfRange, "k=" + std::to_string(k) + " with " +
                                       std::to_string(points.rows()) + " rows");
  }
  if (distinct_rows(points) < k) {
    throw Error(Errc::DegenerateEmbedding, "fewer than k distinct embedding rows");
  }
  Run best{{}, std::numeric_limits<double>::infinity(), {}};
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    SplitMix64 rng(derive_seed(cfg.seed, r));
    const auto start = static_cast<std::size_t>(rng.below(points.rows()));
    Run run = lloyd(points, k, start, cfg);
    if (run.cost < best.cost) best = std::move(run);
  }
  return {Partition(std::move(best.label), k).canonical(), best.cost, std::move(best.history)};
}

/// Hard partition of the embedding rows (rows are vertices).
inline Partition kmeans_rows(const SpectralEmbedding& e, std::size_t k, const RoundingConfig& cfg) {
  return kmeans(e.vectors, k, cfg).partition;
}

/// Mean affinity of vertex `v` to the members of cluster `c` other than
/// itself. Returns 0 for a cluster with no other members.
inline double mean_similarity(const DenseMatrix& w, std::span<const std::size_t> assignment,
                              std::size_t v, std::size_t c) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < assignment.size(); ++j) {
    if (j == v || assignment[j] != c) continue;
    sum += w(v, j);
    ++count;
  }
  return count == 0 ? 0.0 : sum / static_cast<double>(count);
}

struct SweepResult {
  Partition partition;
  std::size_t moves;
};

/// One ascending-vertex pass of the graph-space K-means rule: each vertex
/// joins the cluster of highest mean similarity (lowest id on ties). A vertex
/// never leaves a singleton cluster.
inline SweepResult graph_kmeans_sweep(const AffinityGraph& g, const Partition& p) {
  if (g.kind() != GraphKind::Unipartite) {
    throw Error(Errc::WrongGraphKind, "graph k-means needs a unipartite graph");
  }
  const DenseMatrix& w = g.matrix();
  if (p.size() != w.rows()) {
    throw Error(Errc::DimensionMismatch, "partition does not cover the graph");
  }
  std::vector<std::size_t> label(p.assignment().begin(), p.assignment().end());
  std::vector<std::size_t> sizes(p.k(), 0);
  for (std::size_t l : label) ++sizes[l];
  std::size_t moves = 0;
  for (std::size_t v = 0; v < label.size(); ++v) {
    if (sizes[label[v]] == 1) continue;
    std::size_t best = 0;
    double best_sim = mean_similarity(w, label, v, 0);
    for (std::size_t c = 1; c < p.k(); ++c) {
      const double sim = mean_similarity(w, label, v, c);
      if (sim > best_sim) {
        best_sim = sim;
        best = c;
      }
    }
    if (best != label[v]) {
      --sizes[label[v]];
      ++sizes[best];
      label[v] = best;
      ++moves;
    }
  }
  return {Partition(std::move(label), p.k()), moves};
}

/// Sweeps until no vertex moves or `max_iters` sweeps have run.
inline Partition graph_kmeans_assign(const AffinityGraph& g, const Partition& p,
                                     std::size_t max_iters = 100) {
  Partition current = p;
  for (std::size_t it = 0; it < max_iters; ++it) {
    SweepResult sweep = graph_kmeans_sweep(g, current);
    current = std::move(sweep.partition);
    if (sweep.moves == 0) break;
  }
  return current;
}

}  // namespace spectral
