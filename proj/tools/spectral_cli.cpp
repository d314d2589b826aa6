// spectral: batch K-way spectral clustering of unipartite, bipartite and
// directed graphs, plus the property verifier.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spectral/error.hpp"
#include "spectral/kernels.hpp"
#include "spectral/pipeline.hpp"
#include "spectral/verify.hpp"

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

template <typename T>
std::vector<std::string> keys_of(const std::map<std::string, T>& m) {
  std::vector<std::string> out;
  for (const auto& [key, value] : m) out.push_back(key);
  return out;
}

std::string exit_code_table() {
  std::ostringstream out;
  out << "Exit codes:\n"
      << "  0  success\n"
      << "  1  verify: at least one property failed\n"
      << "  2  usage error (bad or conflicting flags)\n"
      << "  3  unexpected internal error\n";
  for (int c = 10; c <= 31; ++c) {
    out << "  " << c << " " << spectral::errc_name(static_cast<spectral::Errc>(c)) << "\n";
  }
  return out.str();
}

std::vector<double> parse_params(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw spectral::Error(spectral::Errc::InvalidArgument, "bad kernel parameter '" + item + "'");
    }
  }
  return out;
}

spectral::KernelSpec make_kernel(const std::string& name, const std::optional<std::string>& params) {
  const std::vector<double> p = params ? parse_params(*params) : std::vector<double>{};
  const auto expect = [&](std::size_t n) {
    if (params && p.size() != n) {
      throw spectral::Error(spectral::Errc::InvalidArgument,
                            name + " takes " + std::to_string(n) + " kernel parameter(s)");
    }
  };
  if (name == "poly") {
    expect(2);
    spectral::PolynomialKernel k{1.0, 2};
    if (params) {
      k.c = p[0];
      k.d = static_cast<int>(p[1]);
      if (static_cast<double>(k.d) != p[1]) {
        throw spectral::Error(spectral::Errc::InvalidArgument, "polynomial degree must be an integer");
      }
    }
    return k;
  }
  if (name == "gauss") {
    expect(1);
    return spectral::GaussianKernel{params ? p[0] : 1.0};
  }
  expect(2);
  return spectral::SigmoidKernel{params ? p[0] : 1.0, params ? p[1] : 0.0};
}

void write_output(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw spectral::Error(spectral::Errc::IoError, "cannot write '" + path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"K-way spectral clustering for unipartite, bipartite and directed graphs"};
  app.footer(exit_code_table());
  app.require_subcommand(1);

  spectral::ClusterOptions copts;
  std::string kernel_name;
  std::optional<std::string> kernel_params;
  std::optional<std::string> phi_path;
  std::string output = "-";
  std::string kind_name;
  std::string objective_label;
  std::string format_name = "json";
  std::string suite_name = "all";

  const std::map<std::string, spectral::ClusterPath> kinds{
      {"uni", spectral::ClusterPath::Unipartite},
      {"bi", spectral::ClusterPath::Bipartite},
      {"bi-direct", spectral::ClusterPath::BipartiteDirect},
      {"bi-augmented", spectral::ClusterPath::BipartiteAugmented},
      {"dir", spectral::ClusterPath::Directed}};
  const std::map<std::string, spectral::Objective> objectives{
      {"gwassoc", spectral::Objective::GWAssoc}, {"gwcuts", spectral::Objective::GWCuts},
      {"nassoc", spectral::Objective::NAssoc},   {"ncuts", spectral::Objective::NCuts},
      {"rassoc", spectral::Objective::RAssoc},   {"rcuts", spectral::Objective::RCuts}};
  const std::map<std::string, spectral::ReportFormat> formats{
      {"json", spectral::ReportFormat::Json}, {"tsv", spectral::ReportFormat::Tsv}};

  auto* cluster = app.add_subcommand("cluster", "embed, round and report one graph");
  cluster->add_option("--input", copts.input, "matrix file")->required()->check(CLI::ExistingFile);
  cluster->add_option("--kind", kind_name, "relaxation path; bi means bi-direct unless --kernel is given")
      ->required()
      ->check(CLI::IsMember(keys_of(kinds)))
      ->option_text("{uni,bi,bi-direct,bi-augmented,dir} REQUIRED");
  cluster->add_option("--objective", objective_label, "objective to maximize")
      ->required()
      ->check(CLI::IsMember(keys_of(objectives)))
      ->option_text("{gwassoc,gwcuts,nassoc,ncuts,rassoc,rcuts} REQUIRED");
  cluster->add_option("--k", copts.k, "cluster count")->required()->check(CLI::PositiveNumber);
  cluster->add_option("--seed", copts.seed, "rounding seed")->default_val(0);
  cluster->add_option("--phi", phi_path, "vertex weight file (gwassoc/gwcuts only)")
      ->check(CLI::ExistingFile);
  auto* kernel_opt = cluster->add_option("--kernel", kernel_name, "item kernel; selects the indirect bipartite path")
                         ->check(CLI::IsMember({"poly", "gauss", "sigmoid"}));
  cluster->add_option("--kernel-params", kernel_params,
                      "comma separated: poly c,d [1,2]  gauss alpha [1]  sigmoid c,theta [1,0]")
      ->needs(kernel_opt);
  cluster->add_flag("--regularize-degrees", copts.regularize_degrees,
                    "add 1e-10 to zero vertex weights instead of failing");
  cluster->add_flag("--clamp-negative-kernel", copts.clamp_negative_kernel,
                    "clamp negative kernel values to zero instead of failing");
  cluster->add_flag("--symmetric-completion", copts.symmetric_completion,
                    "mirror each coordinate entry of a unipartite file");
  cluster->add_flag("--timings", copts.timings, "include per-stage timings (breaks byte determinism)");
  cluster->add_option("--output", output, "report path, '-' for stdout")->default_val("-");
  cluster->add_option("--format", format_name, "report format")
      ->check(CLI::IsMember(keys_of(formats)))
      ->option_text("{json,tsv} [json]");

  spectral::VerifyOptions vopts;
  const std::map<std::string, spectral::VerifySuite> suites{
      {"kyfan", spectral::VerifySuite::KyFan},
      {"bipartite-equiv", spectral::VerifySuite::BipartiteEquiv},
      {"rowcol", spectral::VerifySuite::RowCol},
      {"relaxation-gap", spectral::VerifySuite::RelaxationGap},
      {"all", spectral::VerifySuite::All}};
  auto* verify = app.add_subcommand("verify", "check the trace-maximization properties on random instances");
  verify->add_option("--suite", suite_name, "property suite to run")
      ->check(CLI::IsMember(keys_of(suites)))
      ->option_text("{kyfan,bipartite-equiv,rowcol,relaxation-gap,all} [all]");
  verify->add_option("--trials", vopts.trials, "random competitors per check")->default_val(1000);
  verify->add_option("--seed", vopts.seed, "instance seed")->default_val(0);
  verify->add_option("--max-n", vopts.max_n, "largest dimension / vertex count (3..12)")->default_val(6);
  verify->add_option("--instances", vopts.instances, "random instances per suite")->default_val(20);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*cluster) {
      copts.path = kinds.at(kind_name);
      copts.objective = objectives.at(objective_label);
      copts.phi_path = phi_path;
      try {
        if (!kernel_name.empty()) copts.kernel = make_kernel(kernel_name, kernel_params);
        spectral::validate_cluster_options(copts);
      } catch (const spectral::Error& e) {
        if (e.code() == spectral::Errc::InvalidArgument) {
          std::cerr << "usage error: " << e.what() << "\n";
          return kExitUsage;
        }
        throw;
      }
      const spectral::RunReport report = spectral::run_cluster(copts);
      write_output(output, spectral::render_report(report, formats.at(format_name)));
      return 0;
    }
    vopts.suite = suites.at(suite_name);
    const auto results = spectral::run_verify(vopts);
    return spectral::print_verify(results, std::cout) ? 0 : kExitVerifyFailed;
  } catch (const spectral::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
