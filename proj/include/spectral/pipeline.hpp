#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spectral/embedding.hpp"
#include "spectral/error.hpp"
#include "spectral/graph.hpp"
#include "spectral/io.hpp"
#include "spectral/kernels.hpp"
#include "spectral/rounding.hpp"

namespace spectral {

/// Which relaxation a clustering run uses.
enum class ClusterPath {
  Unipartite,
  /// Generic bipartite: the direct SVD path, or the kernel (indirect) path
  /// when a kernel is requested.
  Bipartite,
  BipartiteDirect,
  BipartiteAugmented,
  Directed,
};

inline constexpr std::string_view cluster_path_name(ClusterPath p) noexcept {
  switch (p) {
    case ClusterPath::Unipartite: return "uni";
    case ClusterPath::Bipartite: return "bi";
    case ClusterPath::BipartiteDirect: return "bi-direct";
    case ClusterPath::BipartiteAugmented: return "bi-augmented";
    case ClusterPath::Directed: return "dir";
  }
  return "uni";
}

struct ClusterResult {
  Partition partition;
  SpectralEmbedding embedding;
  double relaxed_value;
  double discrete_value;
};

/// Embed, round and score one graph. Bipartite paths cluster all M + N
/// vertices (features first); the discrete score is taken on the graph the
/// relaxation came from.
inline ClusterResult cluster_graph(const AffinityGraph& g, const ObjectiveSpec& spec, std::size_t k,
                                   ClusterPath path, const WeightOptions& weights,
                                   const RoundingConfig& rounding) {
  const auto expect = [&](GraphKind kind) {
    if (g.kind() != kind) {
      throw Error(Errc::WrongGraphKind,
                  "path '" + std::string(cluster_path_name(path)) + "' does not match the graph");
    }
  };
  SpectralEmbedding e = [&] {
    switch (path) {
      case ClusterPath::Unipartite:
        expect(GraphKind::Unipartite);
        return embed_unipartite(g, spec, k, weights);
      case ClusterPath::Bipartite:
      case ClusterPath::BipartiteDirect:
        expect(GraphKind::Bipartite);
        return embed_bipartite_direct(g.matrix(), spec, k, weights);
      case ClusterPath::BipartiteAugmented:
        expect(GraphKind::Bipartite);
        return embed_bipartite_augmented(g.matrix(), spec, k, weights);
      case ClusterPath::Directed:
        expect(GraphKind::Directed);
        return embed_directed(g.matrix(), spec, k, weights);
    }
    throw Error(Errc::InvalidArgument, "unknown path");
  }();
  Partition p = kmeans_rows(e, k, rounding);
  const double discrete = discrete_objective(g, spec, p, weights);
  const double relaxed = relaxed_value(e);
  return {std::move(p), std::move(e), relaxed, discrete};
}

enum class ReportFormat { Json, Tsv };

struct ClusterOptions {
  std::string input;
  ClusterPath path = ClusterPath::Unipartite;
  Objective objective = Objective::NAssoc;
  std::size_t k = 2;
  std::uint64_t seed = 0;
  std::optional<std::string> phi_path;
  std::optional<KernelSpec> kernel;
  bool regularize_degrees = false;
  bool clamp_negative_kernel = false;
  bool symmetric_completion = false;
  bool timings = false;
};

struct RunReport {
  Partition assignments;
  std::string objective_name;
  std::string kind;
  std::size_t k;
  double relaxed_value;
  double discrete_value;
  std::vector<double> values;
  /// First item row for co-clustering runs.
  std::optional<std::size_t> row_split;
  /// Off-diagonal kernel pairs clamped to zero (kernel runs only).
  std::optional<std::size_t> clamped_pairs;
  /// Per-stage wall time; only filled when requested since it breaks
  /// byte-identical output.
  std::vector<std::pair<std::string, double>> timings_ms;
  std::uint64_t seed;
};

namespace pipeline_detail {

class StageClock {
 public:
  explicit StageClock(bool on) : on_(on), last_(std::chrono::steady_clock::now()) {}

  void mark(std::vector<std::pair<std::string, double>>& out, std::string stage) {
    const auto now = std::chrono::steady_clock::now();
    if (on_) {
      out.emplace_back(std::move(stage),
                       std::chrono::duration<double, std::milli>(now - last_).count());
    }
    last_ = now;
  }

 private:
  bool on_;
  std::chrono::steady_clock::time_point last_;
};

inline void check_file_kind(MatrixKind file, ClusterPath path, bool kernel) {
  if (file == MatrixKind::Dense) return;
  bool ok = false;
  switch (path) {
    case ClusterPath::Unipartite: ok = file == MatrixKind::Unipartite; break;
    case ClusterPath::Bipartite: ok = file == MatrixKind::Bipartite; break;
    case ClusterPath::BipartiteDirect:
    case ClusterPath::BipartiteAugmented: ok = file == MatrixKind::Bipartite && !kernel; break;
    case ClusterPath::Directed: ok = file == MatrixKind::Directed; break;
  }
  if (!ok) {
    throw Error(Errc::WrongGraphKind, std::string(matrix_kind_name(file)) +
                                          " file cannot be clustered with --kind " +
                                          std::string(cluster_path_name(path)));
  }
}

}  // namespace pipeline_detail

/// Rejects flag combinations that name two different pipelines.
inline void validate_cluster_options(const ClusterOptions& opts) {
  if (opts.kernel && opts.path != ClusterPath::Bipartite) {
    throw Error(Errc::InvalidArgument, "--kernel selects the indirect bipartite path; use --kind bi");
  }
  if (opts.clamp_negative_kernel && !opts.kernel) {
    throw Error(Errc::InvalidArgument, "--clamp-negative-kernel needs --kernel");
  }
  if (opts.phi_path.has_value() != is_general_weighted(opts.objective)) {
    throw Error(Errc::InvalidArgument, opts.phi_path ? "--phi only applies to gwassoc/gwcuts"
                                                     : "gwassoc/gwcuts need --phi");
  }
  if (opts.k < 1) throw Error(Errc::KOutOfRange, "--k must be positive");
}

/// The batch clustering command: load, build the objective, embed, round and
/// score.
inline RunReport run_cluster(const ClusterOptions& opts) {
  using namespace pipeline_detail;
  validate_cluster_options(opts);
  RunReport report{Partition({0}, 1), std::string(objective_name(opts.objective)),
                   std::string(cluster_path_name(opts.path)), opts.k, 0.0, 0.0, {}, {}, {}, {},
                   opts.seed};
  StageClock clock(opts.timings);

  ParseOptions parse_opts;
  parse_opts.symmetric_completion = opts.symmetric_completion;
  ParsedMatrix parsed = parse_matrix_file(opts.input, parse_opts);
  check_file_kind(parsed.header.kind, opts.path, opts.kernel.has_value());
  std::optional<std::vector<double>> phi;
  if (opts.phi_path) phi = parse_vector_file(*opts.phi_path);
  const ObjectiveSpec spec(opts.objective, std::move(phi));
  clock.mark(report.timings_ms, "load");

  ClusterPath path = opts.path;
  std::optional<AffinityGraph> graph;
  if (opts.kernel) {
    KernelAffinity ka = build_affinity(*opts.kernel, parsed.matrix, opts.clamp_negative_kernel);
    report.clamped_pairs = ka.clamped_pairs;
    report.kind = "bi-kernel";
    graph = std::move(ka.graph);
    path = ClusterPath::Unipartite;
  } else {
    switch (path) {
      case ClusterPath::Unipartite: graph = AffinityGraph::unipartite(parsed.matrix); break;
      case ClusterPath::Directed: graph = AffinityGraph::directed(parsed.matrix); break;
      default: graph = AffinityGraph::bipartite(parsed.matrix); break;
    }
  }
  clock.mark(report.timings_ms, "graph");

  WeightOptions weights;
  weights.regularize_degrees = opts.regularize_degrees;
  RoundingConfig rounding;
  rounding.seed = opts.seed;
  ClusterResult result = cluster_graph(*graph, spec, opts.k, path, weights, rounding);
  clock.mark(report.timings_ms, "cluster");

  report.assignments = std::move(result.partition);
  report.relaxed_value = result.relaxed_value;
  report.discrete_value = result.discrete_value;
  report.values = std::move(result.embedding.values);
  report.row_split = result.embedding.row_split;
  return report;
}

/// JSON (keys sorted, so byte-stable) or TSV rendering of a report.
inline std::string render_report(const RunReport& r, ReportFormat format) {
  if (format == ReportFormat::Json) {
    nlohmann::json j;
    j["assignments"] = std::vector<std::size_t>(r.assignments.assignment().begin(),
                                                r.assignments.assignment().end());
    j["clusters"] = r.assignments.clusters();
    j["discrete_value"] = r.discrete_value;
    j["k"] = r.k;
    j["kind"] = r.kind;
    j["objective"] = r.objective_name;
    j["relaxed_value"] = r.relaxed_value;
    j["seed"] = r.seed;
    j["values"] = r.values;
    if (r.row_split) j["row_split"] = *r.row_split;
    if (r.clamped_pairs) j["kernel_clamped_pairs"] = *r.clamped_pairs;
    if (!r.timings_ms.empty()) {
      nlohmann::json t = nlohmann::json::object();
      for (const auto& [stage, ms] : r.timings_ms) t[stage] = ms;
      j["timings_ms"] = t;
    }
    return j.dump(2) + "\n";
  }

  using io_detail::format_real;
  std::string out;
  const auto meta = [&](std::string_view key, const std::string& value) {
    out += "# ";
    out += key;
    out += '\t';
    out += value;
    out += '\n';
  };
  meta("objective", r.objective_name);
  meta("kind", r.kind);
  meta("k", std::to_string(r.k));
  meta("seed", std::to_string(r.seed));
  meta("relaxed_value", format_real(r.relaxed_value));
  meta("discrete_value", format_real(r.discrete_value));
  std::string values;
  for (std::size_t i = 0; i < r.values.size(); ++i) values += (i ? "," : "") + format_real(r.values[i]);
  meta("values", values);
  if (r.row_split) meta("row_split", std::to_string(*r.row_split));
  if (r.clamped_pairs) meta("kernel_clamped_pairs", std::to_string(*r.clamped_pairs));
  for (const auto& [stage, ms] : r.timings_ms) meta("timing_ms." + stage, format_real(ms));
  out += "vertex\tcluster\tside\n";
  for (std::size_t v = 0; v < r.assignments.size(); ++v) {
    const char* side = "vertex";
    if (r.row_split) side = v < *r.row_split ? "feature" : "item";
    if (r.clamped_pairs) side = "item";
    out += std::to_string(v) + '\t' + std::to_string(r.assignments[v]) + '\t' + side + '\n';
  }
  return out;
}

}  // namespace spectral
