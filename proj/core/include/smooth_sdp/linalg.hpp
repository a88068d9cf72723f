#pragma once

#include <cstdint>
#include <functional>

#include "smooth_sdp/types.hpp"

namespace smooth_sdp::linalg {

struct PseudoInverse {
  RealMatrix pinv;
  Index rank = 0;
  /// True when the input had no off-diagonal entries; pinv is then diagonal.
  bool diagonal = false;
};

/// Moore-Penrose pseudo-inverse of a symmetric PSD matrix through its
/// eigendecomposition. Eigenvalues at or below rank_tol * lambda_max are
/// treated as zero. Diagonal inputs take an elementwise path with the same
/// thresholding rule.
PseudoInverse psd_pseudo_inverse(const RealMatrix& g, double rank_tol);

/// Smallest eigenvalue of a self-adjoint matrix (dense eigensolver).
double lambda_min(const SelfAdjointMatrix& s);

/// Dense threshold below which operator_norm uses a full eigensolve.
inline constexpr Index kDenseNormLimit = 500;

/// ||M||_op = max |lambda_i(M)|. Dense eigensolve for n <= kDenseNormLimit,
/// otherwise a seeded power iteration stopped at relative change tol.
double operator_norm(const SelfAdjointMatrix& m, std::uint64_t seed,
                     double tol = 1e-8);

/// Singular values of a rectangular matrix in decreasing order.
RealVector singular_values(const Matrix& y);

/// Linear operator on matrices, self-adjoint for the real inner product.
using MatrixOperator = std::function<Matrix(const Matrix&)>;

struct LanczosOptions {
  /// Krylov dimension per cycle.
  int krylov_dim = 100;
  /// Restart cycles; each keeps the `thick_restart` lowest Ritz vectors.
  int max_restarts = 10;
  int thick_restart = 10;
  /// Converged when ||A v - theta v|| <= residual_tol * spectral scale.
  double residual_tol = 1e-10;
};

struct LanczosResult {
  double value = 0.0;
  Matrix vector;
  double residual = 0.0;
  int operator_applications = 0;
  bool converged = false;
};

/// Smallest eigenpair of a self-adjoint operator on the space reachable from
/// `start`: Lanczos with full reorthogonalization, Rayleigh-Ritz on the stored
/// images A V and thick restarts. The returned value is a Ritz value, hence
/// an upper bound on the true minimum; `residual` is ||A x - theta x||.
LanczosResult lanczos_smallest(const MatrixOperator& op, const Matrix& start,
                               const LanczosOptions& options);

}  // namespace smooth_sdp::linalg
