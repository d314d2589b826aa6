#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "spectral/dense_matrix.hpp"
#include "spectral/error.hpp"
#include "spectral/graph.hpp"

namespace spectral {

struct PolynomialKernel {
  double c = 0.0;
  int d = 1;
};

struct GaussianKernel {
  double alpha = 1.0;
};

struct SigmoidKernel {
  double c = 1.0;
  double theta = 0.0;
};

class KernelSpec {
 public:
  using Kind = std::variant<PolynomialKernel, GaussianKernel, SigmoidKernel>;

  KernelSpec(PolynomialKernel k) : kind_(k) {
    if (k.d < 1) throw Error(Errc::InvalidArgument, "polynomial degree must be >= 1");
    if (!std::isfinite(k.c)) throw Error(Errc::InvalidArgument, "polynomial offset must be finite");
  }
  KernelSpec(GaussianKernel k) : kind_(k) {
    if (!(k.alpha > 0.0) || !std::isfinite(k.alpha)) {
      throw Error(Errc::InvalidArgument, "gaussian width must be positive");
    }
  }
  KernelSpec(SigmoidKernel k) : kind_(k) {
    if (!std::isfinite(k.c) || !std::isfinite(k.theta)) {
      throw Error(Errc::InvalidArgument, "sigmoid parameters must be finite");
    }
  }

  const Kind& kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

namespace kernel_detail {

inline double squared_distance(std::span<const double> x, std::span<const double> y) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    s += d * d;
  }
  return s;
}

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace kernel_detail

inline double kernel_value(const KernelSpec& spec, std::span<const double> x,
                           std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(Errc::DimensionMismatch, "kernel arguments differ in length");
  }
  using kernel_detail::overloaded;
  return std::visit(
      overloaded{
          [&](const PolynomialKernel& k) { return std::pow(dot(x, y) + k.c, k.d); },
          [&](const GaussianKernel& k) {
            return std::exp(-kernel_detail::squared_distance(x, y) / (2.0 * k.alpha * k.alpha));
          },
          [&](const SigmoidKernel& k) { return std::tanh(k.c * dot(x, y) + k.theta); },
      },
      spec.kind());
}

struct KernelAffinity {
  AffinityGraph graph;
  /// Number of off-diagonal pairs whose negative kernel value was clamped.
  std::size_t clamped_pairs = 0;
};

/// Item-by-item affinity V of a feature-by-item data matrix: V_ij is the
/// kernel of columns i and j for i != j, and the diagonal is zero.
inline KernelAffinity build_affinity(const KernelSpec& spec, const DenseMatrix& data,
                                     bool clamp_negative = true) {
  const std::size_t n = data.cols();
  if (n < 2) throw Error(Errc::InvalidDimensions, "kernel affinity needs at least two items");
  std::vector<std::vector<double>> columns;
  columns.reserve(n);
  for (std::size_t j = 0; j < n; ++j) columns.push_back(data.column(j));

  DenseMatrix v(n, n);
  std::size_t clamped = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double kij = kernel_value(spec, columns[i], columns[j]);
      if (!std::isfinite(kij)) {
        throw Error(Errc::NonFiniteEntry, "kernel value overflowed for items " +
                                              std::to_string(i) + ", " + std::to_string(j));
      }
      if (kij < 0.0) {
        if (!clamp_negative) {
          throw Error(Errc::NegativeAffinity, "kernel value " + std::to_string(kij) +
                                                  " for items " + std::to_string(i) + ", " +
                                                  std::to_string(j));
        }
        kij = 0.0;
        ++clamped;
      }
      v(i, j) = kij;
      v(j, i) = kij;
    }
  }
  return {AffinityGraph::unipartite(std::move(v)), clamped};
}

}  // namespace spectral
