#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "spectral/dense_matrix.hpp"
#include "spectral/embedding.hpp"
#include "spectral/graph.hpp"
#include "spectral/io.hpp"
#include "spectral/linalg.hpp"
#include "spectral/oracle.hpp"
#include "spectral/pipeline.hpp"
#include "spectral/random.hpp"

using namespace spectral;

namespace {

struct Outcome {
  double worst = 0.0;
  bool ok = true;
  std::string note;

  void observe(double v, double tol) {
    if (!(v <= tol)) ok = false;
    if (std::isnan(v) || v > worst) worst = v;
  }
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (note.empty()) note = what;
    }
  }
};

bool report(int id, const std::string& name, double tol, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.note = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.ok && in_time;
  std::printf("%s %d %s worst=%.3e tol=%.1e time=%.2fs limit=%.0fs%s%s\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), o.worst, tol, secs, budget_s, in_time ? "" : " (over time)",
              o.note.empty() ? "" : (" " + o.note).c_str());
  std::fflush(stdout);
  return pass;
}

std::vector<double> row_sums(const DenseMatrix& a) {
  std::vector<double> s(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s[i] += a(i, j);
  return s;
}

std::vector<double> col_sums(const DenseMatrix& a) {
  std::vector<double> s(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s[j] += a(i, j);
  return s;
}

// D_r^{-1/2} A D_c^{-1/2} with degrees taken from A itself.
DenseMatrix hand_normalized(const DenseMatrix& a) {
  const auto r = row_sums(a);
  const auto c = col_sums(a);
  DenseMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) / std::sqrt(r[i] * c[j]);
  return out;
}

double column_residual(const DenseMatrix& h, const std::vector<double>& x, double lambda) {
  std::vector<double> r = multiply(h, x);
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += (r[i] - lambda * x[i]) * (r[i] - lambda * x[i]);
  return std::sqrt(s);
}

std::string run_cli(const std::string& cli, const std::string& args, int& code) {
  const std::string cmd = "'" + cli + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) {
    code = -1;
    return {};
  }
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

void write_file(const std::filesystem::path& p, MatrixKind kind, const DenseMatrix& m) {
  std::ofstream out(p);
  write_matrix(out, kind, m, EntryLayout::Coordinate);
}

Outcome kyfan_symmetric() {
  Outcome o;
  for (std::uint64_t inst = 0; inst < 100; ++inst) {
    SplitMix64 rng(derive_seed(1, inst));
    const DenseMatrix h = random_symmetric(8, rng);
    for (std::size_t k : {1u, 2u, 4u}) {
      const auto r = kyfan_symmetric_check(h, k, 10000, derive_seed(101, inst * 8 + k));
      o.observe(std::abs(r.eigen_trace - r.eigenvalue_sum), 1e-9);
      o.observe(std::max(0.0, r.max_random_trace - r.eigen_trace), 1e-9);
    }
  }
  return o;
}

Outcome bipartite_equivalence() {
  Outcome o;
  const ObjectiveSpec spec(Objective::NAssoc);
  for (std::uint64_t inst = 0; inst < 100; ++inst) {
    SplitMix64 rng(derive_seed(2, inst));
    const DenseMatrix a = random_nonnegative(6, 4, rng);
    // Augmented normalized matrix built by hand.
    const DenseMatrix m = build_bipartite_m(a);
    const auto deg = row_sums(m);
    DenseMatrix h(10, 10);
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 10; ++j) h(i, j) = m(i, j) / std::sqrt(deg[i] * deg[j]);
    const SvdResult s = svd(hand_normalized(a), 4);
    const auto eig = eigh(h, 4);
    for (std::size_t c = 0; c < 4; ++c) o.observe(std::abs(eig.values[c] - s.sigma[c]), 1e-9);
    for (std::size_t c = 0; c < 4; ++c) {
      std::vector<double> z(10);
      for (std::size_t i = 0; i < 6; ++i) z[i] = s.u(i, c) / std::sqrt(2.0);
      for (std::size_t j = 0; j < 4; ++j) z[6 + j] = s.v(j, c) / std::sqrt(2.0);
      o.observe(column_residual(h, z, s.sigma[c]), 1e-9);
    }
    // The library's own embeddings must agree with the hand-built spectrum.
    const auto direct = embed_bipartite_direct(a, spec, 4);
    for (std::size_t c = 0; c < 4; ++c) {
      o.observe(std::abs(direct.values[c] - s.sigma[c]), 1e-9);
      o.observe(column_residual(h, direct.vectors.column(c), direct.values[c]), 1e-9);
    }
  }
  return o;
}

Outcome row_column_grams() {
  Outcome o;
  const ObjectiveSpec spec(Objective::NAssoc);
  std::size_t simple = 0;
  for (std::uint64_t inst = 0; inst < 100; ++inst) {
    SplitMix64 rng(derive_seed(3, inst));
    const std::size_t rows = 4 + inst % 4;
    const std::size_t cols = 3 + inst % 3;
    const DenseMatrix a = random_nonnegative(rows, cols, rng);
    const std::size_t k = std::min(rows, cols);
    const DenseMatrix abar = hand_normalized(a);
    const auto rc = row_col_embeddings(a, spec, k);
    const auto er = eigh(multiply(abar, transpose(abar)), k);
    const auto ec = eigh(multiply(transpose(abar), abar), k);
    for (std::size_t c = 0; c < k; ++c) {
      const double s2 = rc.values[c] * rc.values[c];
      o.observe(std::abs(s2 - er.values[c]) / std::max(std::abs(er.values[c]), 1e-12), 1e-9);
      o.observe(std::abs(s2 - ec.values[c]) / std::max(std::abs(ec.values[c]), 1e-12), 1e-9);
    }
    for (std::size_t c = 0; c < k; ++c) {
      const double sc = rc.values[c];
      const bool gap_before = c == 0 || rc.values[c - 1] - sc > 1e-6;
      const bool gap_after = c + 1 == k || sc - rc.values[c + 1] > 1e-6;
      if (sc <= 1e-6 || !gap_before || !gap_after) continue;
      ++simple;
      std::vector<double> y = multiply(transpose(abar), rc.rows.column(c));
      for (double& v : y) v /= sc;
      double plus = 0.0;
      double minus = 0.0;
      for (std::size_t j = 0; j < y.size(); ++j) {
        plus += (y[j] - ec.vectors(j, c)) * (y[j] - ec.vectors(j, c));
        minus += (y[j] + ec.vectors(j, c)) * (y[j] + ec.vectors(j, c));
      }
      o.observe(std::sqrt(std::min(plus, minus)), 1e-9);
    }
  }
  o.require(simple > 0, "no simple spectra sampled");
  return o;
}

Outcome dual_proof() {
  Outcome o;
  for (std::uint64_t inst = 0; inst < 100; ++inst) {
    SplitMix64 rng(derive_seed(4, inst));
    const DenseMatrix r = random_gaussian(5, 4, rng);
    const std::size_t k = 1 + inst % 4;
    const auto rep = kyfan_rect_check(r, k, 10000, derive_seed(104, inst));
    o.observe(std::abs(rep.svd_trace - rep.psi_trace), 1e-9);
    o.observe(std::abs(rep.svd_trace - rep.singular_sum), 1e-9);
    o.observe(std::abs(rep.psi_eigenvalue_sum - rep.singular_sum), 1e-9);
    o.observe(std::max(0.0, rep.max_random_trace - rep.svd_trace), 1e-9);
  }
  return o;
}

bool connected(const DenseMatrix& w) {
  const std::size_t n = w.rows();
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t u = 0; u < n; ++u)
      if (w(v, u) > 0.0 && !seen[u]) {
        seen[u] = true;
        ++count;
        stack.push_back(u);
      }
  }
  return count == n;
}

Outcome relaxation_bound() {
  Outcome o;
  WeightOptions weights;
  weights.regularize_degrees = true;
  std::size_t graphs = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) phi[i] = 1.0 + 0.25 * static_cast<double>(i);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs.size()); ++mask) {
      DenseMatrix w(n, n);
      for (std::size_t e = 0; e < pairs.size(); ++e)
        if (mask >> e & 1U) w(pairs[e].first, pairs[e].second) = w(pairs[e].second, pairs[e].first) = 1.0;
      if (!connected(w)) continue;
      ++graphs;
      const AffinityGraph g = AffinityGraph::unipartite(w);
      for (Objective obj : {Objective::GWAssoc, Objective::GWCuts, Objective::NAssoc, Objective::NCuts,
                            Objective::RAssoc, Objective::RCuts}) {
        const ObjectiveSpec spec = is_general_weighted(obj) ? ObjectiveSpec(obj, phi) : ObjectiveSpec(obj);
        for (std::size_t k : {2u, 3u}) {
          if (k > n) continue;
          o.observe(std::max(0.0, -relaxation_gap(g, spec, k, weights).gap), 1e-9);
        }
      }
    }
  }
  o.note = "graphs=" + std::to_string(graphs);
  return o;
}

Outcome directed_symmetrization() {
  Outcome o;
  for (std::uint64_t inst = 0; inst < 100; ++inst) {
    SplitMix64 rng(derive_seed(6, inst));
    const std::size_t n = 3 + inst % 6;
    DenseMatrix b = random_nonnegative(n, n, rng);
    for (std::size_t i = 0; i < n; ++i) b(i, i) = 0.0;
    for (Objective obj : {Objective::NAssoc, Objective::RAssoc, Objective::NCuts}) {
      const auto s = symmetrize_directed(b, ObjectiveSpec(obj)).matrix;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) o.require(s(i, j) == s(j, i), "asymmetric output");
    }
    DenseMatrix sym = b;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) sym(i, j) = sym(j, i);
    const auto s = symmetrize_directed(sym, ObjectiveSpec(Objective::RAssoc)).matrix;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) o.observe(std::abs(s(i, j) - 2.0 * sym(i, j)), 1e-12);
  }
  const auto worked = symmetrize_directed(DenseMatrix{{0, 2}, {1, 0}}, ObjectiveSpec(Objective::NAssoc)).matrix;
  o.observe(std::abs(worked(0, 1) - 3.0 / std::sqrt(2.0)), 1e-12);
  o.observe(std::abs(worked(1, 0) - 3.0 / std::sqrt(2.0)), 1e-12);
  o.observe(std::abs(worked(0, 0)), 1e-12);
  return o;
}

DenseMatrix two_cliques() {
  DenseMatrix w(8, 8);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j)
      if (i != j && i / 4 == j / 4) w(i, j) = 1.0;
  return w;
}

DenseMatrix block_bipartite() {
  DenseMatrix a(6, 6);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 6; ++j)
      if (i / 3 == j / 3) a(i, j) = 1.0;
  return a;
}

DenseMatrix two_cycles() {
  DenseMatrix b(6, 6);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < 3; ++i) b(3 * c + i, 3 * c + (i + 1) % 3) = 1.0;
  return b;
}

Outcome planted_recovery(const std::filesystem::path& work) {
  Outcome o;
  write_file(work / "cliques.txt", MatrixKind::Unipartite, two_cliques());
  write_file(work / "blocks.txt", MatrixKind::Bipartite, block_bipartite());
  write_file(work / "cycles.txt", MatrixKind::Directed, two_cycles());
  struct Case {
    std::string file;
    ClusterPath path;
    Objective objective;
    Partition planted;
  };
  const std::vector<Case> cases{
      {"cliques.txt", ClusterPath::Unipartite, Objective::NAssoc, Partition({0, 0, 0, 0, 1, 1, 1, 1}, 2)},
      {"blocks.txt", ClusterPath::BipartiteDirect, Objective::NAssoc,
       Partition({0, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 1}, 2)},
      {"cycles.txt", ClusterPath::Directed, Objective::RAssoc, Partition({0, 0, 0, 1, 1, 1}, 2)},
  };
  std::size_t misses = 0;
  for (const Case& c : cases) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      ClusterOptions opts;
      opts.input = (work / c.file).string();
      opts.path = c.path;
      opts.objective = c.objective;
      opts.k = 2;
      opts.seed = seed;
      const RunReport r = run_cluster(opts);
      if (!same_grouping(r.assignments, c.planted)) ++misses;
    }
  }
  o.worst = static_cast<double>(misses);
  o.require(misses == 0, "misses=" + std::to_string(misses));
  return o;
}

Outcome determinism(const std::string& cli, const std::filesystem::path& work) {
  Outcome o;
  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    SplitMix64 rng(derive_seed(8, inst));
    const DenseMatrix h = random_symmetric(9, rng);
    const DenseMatrix a = random_gaussian(7, 5, rng);
    const auto e1 = eigh(h, 5);
    const auto e2 = eigh(h, 5);
    const auto s1 = svd(a, 4);
    const auto s2 = svd(a, 4);
    o.require(e1.values == e2.values && e1.vectors == e2.vectors, "eigh not bit-identical");
    o.require(s1.sigma == s2.sigma && s1.u == s2.u && s1.v == s2.v, "svd not bit-identical");
  }
  SplitMix64 rng(derive_seed(8, 1000));
  DenseMatrix w = random_nonnegative(10, 10, rng);
  for (std::size_t i = 0; i < 10; ++i) {
    w(i, i) = 0.0;
    for (std::size_t j = 0; j < i; ++j) w(i, j) = w(j, i);
  }
  write_file(work / "random_uni.txt", MatrixKind::Unipartite, w);
  write_file(work / "blocks.txt", MatrixKind::Bipartite, block_bipartite());
  const std::vector<std::string> runs{
      "cluster --input '" + (work / "random_uni.txt").string() + "' --kind uni --objective ncuts --k 3 --seed 5",
      "cluster --input '" + (work / "random_uni.txt").string() +
          "' --kind uni --objective rassoc --k 2 --seed 9 --format tsv",
      "cluster --input '" + (work / "blocks.txt").string() + "' --kind bi --objective nassoc --k 2 --seed 3",
  };
  for (const std::string& args : runs) {
    int c1 = 0;
    int c2 = 0;
    const std::string a = run_cli(cli, args, c1);
    const std::string b = run_cli(cli, args, c2);
    o.require(c1 == 0 && c2 == 0, "cli exit " + std::to_string(c1) + "/" + std::to_string(c2));
    o.require(!a.empty() && a == b, "cli output differs");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <cli> <work-dir>\n");
    return 2;
  }
  const std::string cli = argv[1];
  const std::filesystem::path work = argv[2];
  std::filesystem::create_directories(work);

  bool all = true;
  all &= report(1, "kyfan_symmetric", 1e-9, 30, kyfan_symmetric);
  all &= report(2, "bipartite_augmented_equals_svd", 1e-9, 10, bipartite_equivalence);
  all &= report(3, "row_column_gram_spectra", 1e-9, 10, row_column_grams);
  all &= report(4, "rectangular_trace_dual_routes", 1e-9, 60, dual_proof);
  all &= report(5, "relaxation_bounds_discrete_optimum", 1e-9, 300, relaxation_bound);
  all &= report(6, "directed_symmetrization", 1e-12, 60, directed_symmetrization);
  all &= report(7, "planted_partition_recovery", 0, 10, [&] { return planted_recovery(work); });
  all &= report(8, "determinism", 0, 60, [&] { return determinism(cli, work); });
  return all ? 0 : 1;
}
