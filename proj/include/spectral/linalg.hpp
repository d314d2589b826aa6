#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "spectral/dense_matrix.hpp"
#include "spectral/error.hpp"

namespace spectral {

/// Top eigenpairs of a symmetric matrix. `values` are sorted descending by
/// algebraic value; column k of `vectors` is the unit eigenvector of
/// `values[k]`, signed so that its first entry with magnitude above 1e-12 is
/// positive.
struct EigenDecomposition {
  std::vector<double> values;
  DenseMatrix vectors;
};

/// Top singular triplets: A v_k = sigma_k u_k with sigma descending and the
/// eigenvector sign convention applied to the columns of `u`.
struct SvdResult {
  DenseMatrix u;
  std::vector<double> sigma;
  DenseMatrix v;
};

namespace linalg_detail {

inline constexpr double kSignThreshold = 1e-12;
inline constexpr double kJacobiTolerance = 1e-13;
inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kRankTolerance = 1e-12;

inline bool needs_flip(const DenseMatrix& m, std::size_t col) noexcept {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double x = m(i, col);
    if (std::abs(x) > kSignThreshold) return x < 0.0;
  }
  return false;
}

inline void flip_column(DenseMatrix& m, std::size_t col) noexcept {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, col) = -m(i, col);
}

inline double off_diagonal_norm(const DenseMatrix& a) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

/// Cyclic Jacobi over the full spectrum. Input must already be validated as
/// square; it is symmetrized by averaging before rotating.
inline EigenDecomposition jacobi_full(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
  DenseMatrix v = DenseMatrix::identity(n);

  const double tol = kJacobiTolerance * frobenius_norm(a);
  bool converged = false;
  for (int sweep = 0; sweep <= kJacobiMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= tol) {
      converged = true;
      break;
    }
    if (sweep == kJacobiMaxSweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(tau) > 1e150) {
          t = 0.5 / tau;
        } else {
          t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    throw Error(Errc::NoConvergence,
                "Jacobi sweeps exceeded " + std::to_string(kJacobiMaxSweeps));
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenDecomposition out{std::vector<double>(n), DenseMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    if (needs_flip(out.vectors, k)) flip_column(out.vectors, k);
  }
  return out;
}

/// Orthogonalizes `w` against the first `count` columns of `basis` (two
/// passes of modified Gram-Schmidt) and returns its remaining norm.
inline double orthogonalize(std::vector<double>& w, const DenseMatrix& basis, std::size_t count) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t c = 0; c < count; ++c) {
      double proj = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) proj += basis(i, c) * w[i];
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= proj * basis(i, c);
    }
  }
  return norm2(w);
}

/// Fills column `col` with the first standard basis vector that survives
/// orthogonalization against the columns before it.
inline void complete_column(DenseMatrix& basis, std::size_t col) {
  const std::size_t n = basis.rows();
  for (std::size_t e = 0; e < n; ++e) {
    std::vector<double> w(n, 0.0);
    w[e] = 1.0;
    const double r = orthogonalize(w, basis, col);
    if (r > 1e-6) {
      for (std::size_t i = 0; i < n; ++i) basis(i, col) = w[i] / r;
      return;
    }
  }
  throw Error(Errc::KOutOfRange, "cannot complete orthonormal basis");
}

inline void check_k(std::size_t k, std::size_t limit) {
  if (k < 1 || k > limit) {
    throw Error(Errc::KOutOfRange,
                "k=" + std::to_string(k) + " outside [1, " + std::to_string(limit) + "]");
  }
}

}  // namespace linalg_detail

/// The `k` algebraically largest eigenpairs of a symmetric matrix.
///
/// Selection is by signed value, which is the right reading of the trace
/// maximization for indefinite matrices (affinity matrices usually are).
inline EigenDecomposition eigh(const DenseMatrix& m, std::size_t k) {
  if (!m.is_square()) throw Error(Errc::NotSquare, "eigh needs a square matrix");
  if (!is_symmetric(m)) {
    throw Error(Errc::NotSymmetric,
                "asymmetry " + std::to_string(max_asymmetry(m)) + " exceeds tolerance");
  }
  linalg_detail::check_k(k, m.rows());
  EigenDecomposition full = linalg_detail::jacobi_full(m);
  full.values.resize(k);
  return {std::move(full.values), leading_columns(full.vectors, k)};
}

/// Top-`k` singular triplets via the eigendecomposition of the Gram matrix of
/// the thinner side; the other factor is recovered as A v / sigma (or
/// A^T u / sigma). Directions with sigma <= 1e-12 sigma_1 are completed by
/// Gram-Schmidt.
inline SvdResult svd(const DenseMatrix& a, std::size_t k) {
  using namespace linalg_detail;
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  check_k(k, std::min(m, n));

  // op maps the eigenvector side onto the recovered side; its Gram matrix
  // op^T op is the one we diagonalize.
  const bool from_right = n <= m;
  const DenseMatrix op = from_right ? a : transpose(a);
  const EigenDecomposition eig = jacobi_full(multiply_at_b(op, op));

  SvdResult out{DenseMatrix(m, k), std::vector<double>(k), DenseMatrix(n, k)};
  DenseMatrix& known = from_right ? out.v : out.u;
  DenseMatrix& recovered = from_right ? out.u : out.v;

  const double top = std::sqrt(std::max(eig.values[0], 0.0));
  for (std::size_t j = 0; j < k; ++j) {
    const double sigma = std::sqrt(std::max(eig.values[j], 0.0));
    out.sigma[j] = sigma;
    const std::vector<double> x = eig.vectors.column(j);
    known.set_column(j, x);
    if (sigma > 0.0 && sigma > kRankTolerance * top) {
      std::vector<double> y = multiply(op, x);
      for (double& yi : y) yi /= sigma;
      const double r = orthogonalize(y, recovered, j);
      for (double& yi : y) yi /= r;
      recovered.set_column(j, y);
    } else {
      complete_column(recovered, j);
    }
    if (needs_flip(out.u, j)) {
      flip_column(out.u, j);
      flip_column(out.v, j);
    }
  }
  return out;
}

/// U_K Sigma_K V_K^T.
inline DenseMatrix truncated_reconstruction(const SvdResult& s) {
  DenseMatrix out(s.u.rows(), s.v.rows());
  for (std::size_t k = 0; k < s.sigma.size(); ++k) {
    for (std::size_t i = 0; i < s.u.rows(); ++i) {
      const double ui = s.u(i, k) * s.sigma[k];
      if (ui == 0.0) continue;
      for (std::size_t j = 0; j < s.v.rows(); ++j) out(i, j) += ui * s.v(j, k);
    }
  }
  return out;
}

/// Phi^{-1/2} M Phi^{-1/2} for a positive diagonal Phi.
inline DenseMatrix scale_symmetric(const DenseMatrix& m, std::span<const double> phi_diag) {
  if (!m.is_square()) throw Error(Errc::NotSquare, "scale_symmetric needs a square matrix");
  if (phi_diag.size() != m.rows()) {
    throw Error(Errc::DimensionMismatch, "weight vector length differs from matrix order");
  }
  for (std::size_t i = 0; i < phi_diag.size(); ++i) {
    if (!(phi_diag[i] > 0.0)) {
      throw Error(Errc::NonPositiveWeight, "weight " + std::to_string(i) + " is not positive");
    }
  }
  DenseMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(i, j) = m(i, j) / std::sqrt(phi_diag[i] * phi_diag[j]);
  return out;
}

}  // namespace spectral
