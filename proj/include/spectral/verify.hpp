#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "spectral/dense_matrix.hpp"
#include "spectral/embedding.hpp"
#include "spectral/error.hpp"
#include "spectral/graph.hpp"
#include "spectral/linalg.hpp"
#include "spectral/oracle.hpp"
#include "spectral/random.hpp"

namespace spectral {

enum class VerifySuite { KyFan, BipartiteEquiv, RowCol, RelaxationGap, All };

struct VerifyOptions {
  VerifySuite suite = VerifySuite::All;
  /// Random orthonormal competitors per trace-maximization check.
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  /// Largest matrix dimension / vertex count used by the suites.
  std::size_t max_n = 6;
  /// Random instances per suite (per vertex count for relaxation-gap).
  std::size_t instances = 20;
};

/// Outcome of one property over all instances: the worst observed value of
/// `metric`, which passes when it does not exceed `tol`.
struct CheckResult {
  std::string name;
  double worst;
  double tol;

  bool passed() const noexcept { return worst <= tol; }
};

namespace verify_detail {

inline constexpr double kTol = 1e-9;

class Checks {
 public:
  CheckResult& add(std::string name, double tol = kTol) {
    results_.push_back({std::move(name), 0.0, tol});
    return results_.back();
  }
  std::vector<CheckResult> results() const { return {results_.begin(), results_.end()}; }

 private:
  // Stable addresses: suites hold references while adding more checks.
  std::deque<CheckResult> results_;
};

inline void observe(CheckResult& c, double value) {
  c.worst = std::isnan(value) ? INFINITY : std::max(c.worst, value);
}

inline std::vector<std::size_t> k_values(std::size_t limit) {
  std::vector<std::size_t> ks{1, 2, limit / 2, limit};
  std::vector<std::size_t> out;
  for (std::size_t k : ks)
    if (k >= 1 && k <= limit && std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  return out;
}

inline void kyfan_suite(const VerifyOptions& o, Checks& checks) {
  auto& sym_eq = checks.add("kyfan.symmetric.trace_equals_eigenvalue_sum");
  auto& sym_dom = checks.add("kyfan.symmetric.dominates_random");
  auto& rect_eq = checks.add("kyfan.rect.trace_equals_singular_sum");
  auto& rect_psi = checks.add("kyfan.rect.psi_route_agrees");
  auto& rect_psi_eig = checks.add("kyfan.rect.psi_eigenvalues_match");
  auto& rect_dom = checks.add("kyfan.rect.dominates_random");
  const std::size_t n = o.max_n;
  for (std::size_t inst = 0; inst < o.instances; ++inst) {
    SplitMix64 rng(derive_seed(o.seed, inst));
    const DenseMatrix h = random_symmetric(n, rng);
    for (std::size_t k : k_values(n)) {
      const auto rep = kyfan_symmetric_check(h, k, o.trials, derive_seed(o.seed ^ 0x5eed, inst * 64 + k));
      observe(sym_eq, std::abs(rep.eigen_trace - rep.eigenvalue_sum));
      observe(sym_dom, rep.max_random_trace - rep.eigen_trace);
    }
    const DenseMatrix r = random_gaussian(n - 1, n - 2, rng);
    for (std::size_t k : k_values(n - 2)) {
      const auto rep = kyfan_rect_check(r, k, o.trials, derive_seed(o.seed ^ 0xfec7, inst * 64 + k));
      observe(rect_eq, std::abs(rep.svd_trace - rep.singular_sum));
      observe(rect_psi, std::abs(rep.psi_trace - rep.svd_trace));
      observe(rect_psi_eig, std::abs(rep.psi_eigenvalue_sum - rep.singular_sum));
      observe(rect_dom, rep.max_random_trace - rep.svd_trace);
    }
  }
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

inline void bipartite_suite(const VerifyOptions& o, Checks& checks) {
  auto& values = checks.add("bipartite.augmented_eigenvalues_equal_singular_values");
  auto& residual = checks.add("bipartite.stacked_vectors_are_eigenvectors");
  const ObjectiveSpec spec(Objective::NAssoc);
  const std::size_t m = o.max_n;
  const std::size_t n = o.max_n - 2;
  for (std::size_t inst = 0; inst < o.instances; ++inst) {
    SplitMix64 rng(derive_seed(o.seed ^ 0xb1, inst));
    const DenseMatrix a = random_nonnegative(m, n, rng);
    const std::size_t k = n;
    const SpectralEmbedding aug = embed_bipartite_augmented(a, spec, k);
    const SpectralEmbedding dir = embed_bipartite_direct(a, spec, k);
    observe(values, max_abs_diff(aug.values, dir.values));
    const DenseMatrix mbar = normalized_matrix(AffinityGraph::bipartite(a), spec);
    for (std::size_t c = 0; c < k; ++c) {
      const std::vector<double> s = dir.vectors.column(c);
      std::vector<double> r = multiply(mbar, s);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] -= dir.values[c] * s[i];
      observe(residual, norm2(r));
    }
  }
}

inline void rowcol_suite(const VerifyOptions& o, Checks& checks) {
  auto& gram_rows = checks.add("rowcol.sigma_squared_matches_row_gram");
  auto& gram_cols = checks.add("rowcol.sigma_squared_matches_column_gram");
  auto& traces = checks.add("rowcol.traces_equal_sum_sigma_squared");
  auto& cross = checks.add("rowcol.cross_derived_columns_match");
  const ObjectiveSpec spec(Objective::NAssoc);
  const std::size_t m = o.max_n - 1;
  const std::size_t n = o.max_n - 2;
  for (std::size_t inst = 0; inst < o.instances; ++inst) {
    SplitMix64 rng(derive_seed(o.seed ^ 0xc0, inst));
    const DenseMatrix a = random_nonnegative(m, n, rng);
    const std::size_t k = n;
    const RowColEmbedding rc = row_col_embeddings(a, spec, k);
    const DenseMatrix abar = normalize_bipartite(a, spec);
    const DenseMatrix row_gram = multiply(abar, transpose(abar));
    const DenseMatrix col_gram = multiply_at_b(abar, abar);
    const auto er = eigh(row_gram, k);
    const auto ec = eigh(col_gram, k);
    const double scale = std::max(1.0, er.values[0]);
    double sum_sq = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double s2 = rc.values[c] * rc.values[c];
      sum_sq += s2;
      observe(gram_rows, std::abs(s2 - er.values[c]) / scale);
      observe(gram_cols, std::abs(s2 - ec.values[c]) / scale);
    }
    observe(traces, std::abs(bilinear_trace(rc.rows, row_gram, rc.rows) - sum_sq));
    observe(traces, std::abs(bilinear_trace(rc.cols, col_gram, rc.cols) - sum_sq));
    for (std::size_t c = 0; c < k; ++c) {
      const bool simple = rc.values[c] > 1e-6 && (c == 0 || rc.values[c - 1] - rc.values[c] > 1e-6) &&
                          (c + 1 == k || rc.values[c] - rc.values[c + 1] > 1e-6);
      if (!simple) continue;
      std::vector<double> y = multiply(transpose(abar), rc.rows.column(c));
      double plus = 0.0;
      double minus = 0.0;
      for (std::size_t j = 0; j < y.size(); ++j) {
        y[j] /= rc.values[c];
        plus += std::pow(y[j] - rc.cols(j, c), 2);
        minus += std::pow(y[j] + rc.cols(j, c), 2);
      }
      observe(cross, std::sqrt(std::min(plus, minus)));
    }
  }
}

inline void relaxation_suite(const VerifyOptions& o, Checks& checks) {
  auto& gap = checks.add("relaxation.relaxed_bounds_discrete_optimum");
  WeightOptions weights;
  weights.regularize_degrees = true;
  for (std::size_t n = 3; n <= o.max_n; ++n) {
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) phi[i] = 1.0 + 0.25 * static_cast<double>(i);
    for (std::size_t inst = 0; inst < o.instances; ++inst) {
      SplitMix64 rng(derive_seed(o.seed ^ 0x9a, n * 1000 + inst));
      DenseMatrix w(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (rng.uniform() <= 0.5) w(i, j) = w(j, i) = 1.0;
      const AffinityGraph g = AffinityGraph::unipartite(w);
      for (Objective obj : {Objective::GWAssoc, Objective::GWCuts, Objective::NAssoc,
                            Objective::NCuts, Objective::RAssoc, Objective::RCuts}) {
        const ObjectiveSpec spec = is_general_weighted(obj) ? ObjectiveSpec(obj, phi) : ObjectiveSpec(obj);
        for (std::size_t k : {std::size_t{2}, std::size_t{3}}) {
          if (k > n) continue;
          observe(gap, -relaxation_gap(g, spec, k, weights).gap);
        }
      }
    }
  }
}

}  // namespace verify_detail

/// Runs the selected property suites over seeded random instances.
inline std::vector<CheckResult> run_verify(const VerifyOptions& o) {
  using namespace verify_detail;
  if (o.max_n > kMaxEnumerationVertices) {
    throw Error(Errc::TooLarge, "--max-n " + std::to_string(o.max_n) + " exceeds " +
                                    std::to_string(kMaxEnumerationVertices));
  }
  if (o.max_n < 3) throw Error(Errc::InvalidArgument, "--max-n must be at least 3");
  if (o.instances < 1) throw Error(Errc::InvalidArgument, "--instances must be positive");
  Checks checks;
  const bool all = o.suite == VerifySuite::All;
  if (all || o.suite == VerifySuite::KyFan) kyfan_suite(o, checks);
  if (all || o.suite == VerifySuite::BipartiteEquiv) bipartite_suite(o, checks);
  if (all || o.suite == VerifySuite::RowCol) rowcol_suite(o, checks);
  if (all || o.suite == VerifySuite::RelaxationGap) relaxation_suite(o, checks);
  return checks.results();
}

/// One "PASS|FAIL <name> worst=<value> tol=<tol>" line per check.
inline bool print_verify(const std::vector<CheckResult>& results, std::ostream& out) {
  bool ok = true;
  for (const auto& r : results) {
    char line[256];
    std::snprintf(line, sizeof line, "%s %s worst=%.3e tol=%.1e\n", r.passed() ? "PASS" : "FAIL",
                  r.name.c_str(), r.worst, r.tol);
    out << line;
    ok = ok && r.passed();
  }
  return ok;
}

}  // namespace spectral
