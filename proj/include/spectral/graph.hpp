#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "spectral/dense_matrix.hpp"
#include "spectral/error.hpp"

namespace spectral {

enum class GraphKind { Unipartite, Bipartite, Directed };

/// Nonnegative affinity matrix tagged with the kind of graph it induces:
/// symmetric W (unipartite), rectangular feature-by-item A (bipartite) or
/// square B (directed). Validated once at construction.
class AffinityGraph {
 public:
  struct Unipartite {
    DenseMatrix w;
  };
  struct Bipartite {
    DenseMatrix a;
  };
  struct Directed {
    DenseMatrix b;
  };

  static AffinityGraph unipartite(DenseMatrix w) {
    check_nonnegative(w);
    if (!w.is_square()) throw Error(Errc::NotSquare, "unipartite affinity must be square");
    if (!is_symmetric(w)) throw Error(Errc::NotSymmetric, "unipartite affinity must be symmetric");
    return AffinityGraph(Unipartite{std::move(w)});
  }

  static AffinityGraph bipartite(DenseMatrix a) {
    check_nonnegative(a);
    return AffinityGraph(Bipartite{std::move(a)});
  }

  static AffinityGraph directed(DenseMatrix b) {
    check_nonnegative(b);
    if (!b.is_square()) throw Error(Errc::NotSquare, "directed affinity must be square");
    return AffinityGraph(Directed{std::move(b)});
  }

  GraphKind kind() const noexcept { return static_cast<GraphKind>(graph_.index()); }

  const DenseMatrix& matrix() const noexcept {
    return std::visit([](const auto& g) -> const DenseMatrix& { return matrix_of(g); }, graph_);
  }

  /// N for unipartite and directed graphs, M + N for bipartite ones.
  std::size_t vertex_count() const noexcept {
    const DenseMatrix& m = matrix();
    return kind() == GraphKind::Bipartite ? m.rows() + m.cols() : m.rows();
  }

  template <typename Visitor>
  decltype(auto) visit(Visitor&& vis) const {
    return std::visit(std::forward<Visitor>(vis), graph_);
  }

 private:
  using Variant = std::variant<Unipartite, Bipartite, Directed>;

  explicit AffinityGraph(Variant g) : graph_(std::move(g)) {}

  static const DenseMatrix& matrix_of(const Unipartite& g) noexcept { return g.w; }
  static const DenseMatrix& matrix_of(const Bipartite& g) noexcept { return g.a; }
  static const DenseMatrix& matrix_of(const Directed& g) noexcept { return g.b; }

  static void check_nonnegative(const DenseMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(i, j) < 0.0) {
          throw Error(Errc::NegativeEntry, "negative affinity at (" + std::to_string(i) + ", " +
                                               std::to_string(j) + ")");
        }
  }

  Variant graph_;
};

enum class Objective { GWAssoc, GWCuts, NAssoc, NCuts, RAssoc, RCuts };

inline constexpr std::string_view objective_name(Objective o) noexcept {
  switch (o) {
    case Objective::GWAssoc: return "gwassoc";
    case Objective::GWCuts: return "gwcuts";
    case Objective::NAssoc: return "nassoc";
    case Objective::NCuts: return "ncuts";
    case Objective::RAssoc: return "rassoc";
    case Objective::RCuts: return "rcuts";
  }
  return "unknown";
}

inline constexpr bool is_general_weighted(Objective o) noexcept {
  return o == Objective::GWAssoc || o == Objective::GWCuts;
}

inline constexpr bool is_cut(Objective o) noexcept {
  return o == Objective::GWCuts || o == Objective::NCuts || o == Objective::RCuts;
}

/// One of the six graph clustering objectives. A custom vertex weight vector
/// is carried exactly when the objective is one of the general weighted ones.
class ObjectiveSpec {
 public:
  explicit ObjectiveSpec(Objective name, std::optional<std::vector<double>> custom_phi = {})
      : name_(name), custom_phi_(std::move(custom_phi)) {
    if (is_general_weighted(name_) != custom_phi_.has_value()) {
      throw Error(Errc::InvalidArgument,
                  std::string(objective_name(name_)) +
                      (custom_phi_ ? " does not take custom weights" : " needs custom weights"));
    }
    if (custom_phi_) {
      for (double x : *custom_phi_) {
        if (!(x > 0.0) || !std::isfinite(x)) {
          throw Error(Errc::NonPositiveWeight, "custom weights must be positive and finite");
        }
      }
    }
  }

  Objective name() const noexcept { return name_; }
  const std::optional<std::vector<double>>& custom_phi() const noexcept { return custom_phi_; }

 private:
  Objective name_;
  std::optional<std::vector<double>> custom_phi_;
};

/// Hard assignment of vertices to clusters 0..k-1, none of them empty.
class Partition {
 public:
  Partition(std::vector<std::size_t> assignment, std::size_t k)
      : assignment_(std::move(assignment)), k_(k) {
    if (k_ == 0) throw Error(Errc::InvalidArgument, "cluster count must be positive");
    std::vector<std::size_t> sizes(k_, 0);
    for (std::size_t c : assignment_) {
      if (c >= k_) {
        throw Error(Errc::InvalidArgument,
                    "cluster id " + std::to_string(c) + " >= k=" + std::to_string(k_));
      }
      ++sizes[c];
    }
    for (std::size_t c = 0; c < k_; ++c) {
      if (sizes[c] == 0) throw Error(Errc::EmptyCluster, "cluster " + std::to_string(c) + " is empty");
    }
  }

  std::size_t k() const noexcept { return k_; }
  std::size_t size() const noexcept { return assignment_.size(); }
  std::size_t operator[](std::size_t vertex) const noexcept { return assignment_[vertex]; }
  std::span<const std::size_t> assignment() const noexcept { return assignment_; }

  std::vector<std::vector<std::size_t>> clusters() const {
    std::vector<std::vector<std::size_t>> out(k_);
    for (std::size_t v = 0; v < assignment_.size(); ++v) out[assignment_[v]].push_back(v);
    return out;
  }

  /// Same grouping, cluster ids renumbered in order of first appearance.
  Partition canonical() const {
    std::vector<std::size_t> relabel(k_, k_);
    std::size_t next = 0;
    std::vector<std::size_t> out(assignment_.size());
    for (std::size_t v = 0; v < assignment_.size(); ++v) {
      std::size_t& r = relabel[assignment_[v]];
      if (r == k_) r = next++;
      out[v] = r;
    }
    return Partition(std::move(out), k_);
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::size_t> assignment_;
  std::size_t k_;
};

/// True when both partitions group the vertices identically.
inline bool same_grouping(const Partition& a, const Partition& b) {
  return a.k() == b.k() && a.size() == b.size() && a.canonical() == b.canonical();
}

/// Weight handling shared by every objective that divides by vertex degrees.
struct WeightOptions {
  /// Replace zero degrees by kDegreeEpsilon instead of failing.
  bool regularize_degrees = false;
};

inline constexpr double kDegreeEpsilon = 1e-10;

/// [[0, A], [A^T, 0]].
inline DenseMatrix build_bipartite_m(const DenseMatrix& a) {
  for (double x : a.data()) {
    if (x < 0.0) throw Error(Errc::NegativeEntry, "bipartite data matrix has a negative entry");
  }
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  DenseMatrix out(m + n, m + n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      out(i, m + j) = a(i, j);
      out(m + j, i) = a(i, j);
    }
  return out;
}

/// Row sums of W.
inline std::vector<double> degree_matrix(const AffinityGraph& g) {
  if (g.kind() != GraphKind::Unipartite) {
    throw Error(Errc::WrongGraphKind, "degree_matrix needs a unipartite graph");
  }
  const DenseMatrix& w = g.matrix();
  std::vector<double> d(w.rows(), 0.0);
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (double x : w.row(i)) d[i] += x;
  return d;
}

/// L = D - W.
inline DenseMatrix laplacian(const AffinityGraph& g) {
  const std::vector<double> d = degree_matrix(g);
  DenseMatrix l = g.matrix();
  for (std::size_t i = 0; i < l.rows(); ++i) {
    for (std::size_t j = 0; j < l.cols(); ++j) l(i, j) = -l(i, j);
    l(i, i) += d[i];
  }
  return l;
}

/// Affinity and diagonal weight that define one objective on one graph.
struct ObjectivePair {
  DenseMatrix affinity;
  std::vector<double> phi;
};

namespace graph_detail {

inline std::vector<double> row_sums(const DenseMatrix& m) {
  std::vector<double> s(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (double x : m.row(i)) s[i] += x;
  return s;
}

inline std::vector<double> column_sums(const DenseMatrix& m) {
  std::vector<double> s(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) s[j] += m(i, j);
  return s;
}

inline void regularize(std::vector<double>& weights, const WeightOptions& opts, std::string_view what) {
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) continue;
    if (!opts.regularize_degrees) {
      throw Error(Errc::ZeroDegreeVertex,
                  "vertex " + std::to_string(i) + " has zero " + std::string(what));
    }
    weights[i] += kDegreeEpsilon;
  }
}

inline std::vector<double> custom_weights(const ObjectiveSpec& spec, std::size_t n) {
  const auto& phi = *spec.custom_phi();
  if (phi.size() != n) {
    throw Error(Errc::DimensionMismatch, "custom weights have length " + std::to_string(phi.size()) +
                                             ", graph has " + std::to_string(n) + " vertices");
  }
  return phi;
}

/// Table of objectives applied to a symmetric affinity `w` whose weight
/// vector (when the objective uses degrees) is `degree_weights`.
inline ObjectivePair apply_objective(DenseMatrix w, const ObjectiveSpec& spec,
                                     std::vector<double> degree_weights) {
  const std::size_t n = w.rows();
  std::vector<double> phi;
  switch (spec.name()) {
    case Objective::GWAssoc:
    case Objective::GWCuts: phi = custom_weights(spec, n); break;
    case Objective::NAssoc:
    case Objective::NCuts: phi = std::move(degree_weights); break;
    case Objective::RAssoc:
    case Objective::RCuts: phi.assign(n, 1.0); break;
  }
  // GWCuts: Phi - L, RCuts: I - L. NCuts' D - L is W itself.
  if (spec.name() == Objective::GWCuts || spec.name() == Objective::RCuts) {
    const std::vector<double> d = row_sums(w);
    for (std::size_t i = 0; i < n; ++i) w(i, i) += phi[i] - d[i];
  }
  return {std::move(w), std::move(phi)};
}

}  // namespace graph_detail

/// In/out combined vertex weight of a directed graph: sqrt(in-degree *
/// out-degree) for the normalized objectives, ones for the ratio ones and the
/// user-supplied diagonal for the general weighted ones.
inline std::vector<double> directed_weights(const DenseMatrix& b, const ObjectiveSpec& spec,
                                            const WeightOptions& opts = {}) {
  using namespace graph_detail;
  const std::size_t n = b.rows();
  switch (spec.name()) {
    case Objective::GWAssoc:
    case Objective::GWCuts: return custom_weights(spec, n);
    case Objective::RAssoc:
    case Objective::RCuts: return std::vector<double>(n, 1.0);
    case Objective::NAssoc:
    case Objective::NCuts: break;
  }
  std::vector<double> in = column_sums(b);
  std::vector<double> out = row_sums(b);
  regularize(in, opts, "in-degree");
  regularize(out, opts, "out-degree");
  std::vector<double> io(n);
  for (std::size_t i = 0; i < n; ++i) io[i] = std::sqrt(in[i] * out[i]);
  return io;
}

/// The (affinity, weight) pair of an objective on any graph kind. Unipartite
/// graphs use W; bipartite graphs use the augmented matrix M = [[0,A],[A^T,0]];
/// directed graphs use B + B^T with the combined in/out weight.
inline ObjectivePair objective_pair(const AffinityGraph& g, const ObjectiveSpec& spec,
                                    const WeightOptions& opts = {}) {
  using namespace graph_detail;
  switch (g.kind()) {
    case GraphKind::Unipartite:
    case GraphKind::Bipartite: {
      DenseMatrix w = g.kind() == GraphKind::Bipartite ? build_bipartite_m(g.matrix()) : g.matrix();
      std::vector<double> d;
      if (spec.name() == Objective::NAssoc || spec.name() == Objective::NCuts) {
        d = row_sums(w);
        regularize(d, opts, "degree");
      }
      return apply_objective(std::move(w), spec, std::move(d));
    }
    case GraphKind::Directed: {
      const DenseMatrix& b = g.matrix();
      std::vector<double> phi = directed_weights(b, spec, opts);
      DenseMatrix w = b;
      for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) w(i, j) = b(i, j) + b(j, i);
      return apply_objective(std::move(w), spec, std::move(phi));
    }
  }
  throw Error(Errc::WrongGraphKind, "unknown graph kind");
}

/// (1/K) sum_k (z_k^T affinity z_k) / (z_k^T Phi z_k) for a raw assignment.
inline double objective_value(const ObjectivePair& pair, std::span<const std::size_t> assignment,
                              std::size_t k) {
  const std::size_t n = pair.affinity.rows();
  if (assignment.size() != n) {
    throw Error(Errc::DimensionMismatch, "partition covers " + std::to_string(assignment.size()) +
                                             " vertices, graph has " + std::to_string(n));
  }
  std::vector<double> within(k, 0.0);
  std::vector<double> weight(k, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ci = assignment[i];
    weight[ci] += pair.phi[i];
    for (std::size_t j = 0; j < n; ++j)
      if (assignment[j] == ci) within[ci] += pair.affinity(i, j);
  }
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    if (weight[c] == 0.0) {
      throw Error(Errc::ZeroClusterWeight, "cluster " + std::to_string(c) + " has zero weight");
    }
    total += within[c] / weight[c];
  }
  return total / static_cast<double>(k);
}

/// Exact discrete objective of a partition.
inline double discrete_objective(const AffinityGraph& g, const ObjectiveSpec& spec,
                                 const Partition& p, const WeightOptions& opts = {}) {
  return objective_value(objective_pair(g, spec, opts), p.assignment(), p.k());
}

}  // namespace spectral
