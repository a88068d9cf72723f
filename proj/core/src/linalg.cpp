#include "smooth_sdp/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <vector>

#include "smooth_sdp/random.hpp"

namespace smooth_sdp::linalg {

namespace {

bool is_diagonal(const RealMatrix& g) {
  for (Index j = 0; j < g.cols(); ++j) {
    for (Index i = 0; i < g.rows(); ++i) {
      if (i != j && g(i, j) != 0.0) return false;
    }
  }
  return true;
}

}  // namespace

PseudoInverse psd_pseudo_inverse(const RealMatrix& g, double rank_tol) {
  if (g.rows() != g.cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "pseudo-inverse of non-square");
  }
  const Index m = g.rows();
  PseudoInverse out;
  out.pinv = RealMatrix::Zero(m, m);
  if (m == 0) return out;

  if (is_diagonal(g)) {
    out.diagonal = true;
    const double lmax = g.diagonal().maxCoeff();
    if (!(lmax > 0.0)) return out;
    const double cut = rank_tol * lmax;
    for (Index i = 0; i < m; ++i) {
      if (g(i, i) > cut) {
        out.pinv(i, i) = 1.0 / g(i, i);
        ++out.rank;
      }
    }
    return out;
  }

  const RealMatrix sym = 0.5 * (g + g.transpose());
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(sym);
  const RealVector& lam = eig.eigenvalues();
  const double lmax = lam.maxCoeff();
  if (!(lmax > 0.0)) return out;
  const double cut = rank_tol * lmax;
  RealVector inv = RealVector::Zero(m);
  for (Index i = 0; i < m; ++i) {
    if (lam(i) > cut) {
      inv(i) = 1.0 / lam(i);
      ++out.rank;
    }
  }
  const RealMatrix& u = eig.eigenvectors();
  out.pinv = u * inv.asDiagonal() * u.transpose();
  out.pinv = 0.5 * (out.pinv + out.pinv.transpose()).eval();
  return out;
}

double lambda_min(const SelfAdjointMatrix& s) {
  if (s.dim() == 0) return 0.0;
  if (s.field() == FieldTag::kReal) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(s.matrix().real(),
                                                  Eigen::EigenvaluesOnly);
    return eig.eigenvalues()(0);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(s.matrix(),
                                            Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(0);
}

double operator_norm(const SelfAdjointMatrix& m, std::uint64_t seed,
                     double tol) {
  const Index n = m.dim();
  if (n == 0) return 0.0;
  if (n <= kDenseNormLimit) {
    RealVector lam;
    if (m.field() == FieldTag::kReal) {
      lam = Eigen::SelfAdjointEigenSolver<RealMatrix>(
                m.matrix().real(), Eigen::EigenvaluesOnly)
                .eigenvalues();
    } else {
      lam = Eigen::SelfAdjointEigenSolver<Matrix>(m.matrix(),
                                                  Eigen::EigenvaluesOnly)
                .eigenvalues();
    }
    return std::max(std::abs(lam(0)), std::abs(lam(n - 1)));
  }

  // ||M x|| for the normalized iterate converges to the dominant |lambda|
  // even when +lambda and -lambda tie; both estimates below are lower bounds.
  Rng rng(seed);
  CVector x(n);
  for (Index i = 0; i < n; ++i) x(i) = rng.field_normal(m.field());
  x.normalize();
  double estimate = 0.0;
  const int max_iters = 10000;
  for (int it = 0; it < max_iters; ++it) {
    CVector y = m.matrix() * x;
    const double norm_y = y.norm();
    if (norm_y == 0.0) return 0.0;
    const double next = norm_y;
    x = y / norm_y;
    if (it > 0 && std::abs(next - estimate) <= tol * next) {
      estimate = next;
      break;
    }
    estimate = next;
  }
  const double rayleigh = std::abs((x.adjoint() * m.matrix() * x)(0).real());
  return std::max(estimate, rayleigh);
}

RealVector singular_values(const Matrix& y) {
  if (y.size() == 0) return RealVector(0);
  if (std::min(y.rows(), y.cols()) <= 64) {
    return Eigen::JacobiSVD<Matrix>(y).singularValues();
  }
  return Eigen::BDCSVD<Matrix>(y).singularValues();
}

namespace {

// A complex matrix viewed as its interleaved real coordinates; the real dot
// product of two such views is Re Tr(A^* B).
Eigen::Map<const RealVector> flat(const Matrix& m) {
  return {reinterpret_cast<const double*>(m.data()), 2 * m.size()};
}

}  // namespace

LanczosResult lanczos_smallest(const MatrixOperator& op, const Matrix& start,
                               const LanczosOptions& options) {
  LanczosResult best;
  best.vector = Matrix::Zero(start.rows(), start.cols());
  const double start_norm = std::sqrt(inner(start, start));
  if (start_norm == 0.0 || options.krylov_dim < 1) {
    best.converged = true;
    return best;
  }
  const Index rows = start.rows();
  const Index cols = start.cols();
  const Index len = 2 * start.size();
  const Index max_dim = options.krylov_dim;
  const Index keep = std::clamp<Index>(options.thick_restart, 1, std::max<Index>(1, max_dim - 1));

  // Basis V and its image W = A V, one column per vector; the projected
  // matrix is V^T W.
  RealMatrix v(len, max_dim);
  RealMatrix w(len, max_dim);
  Index nv = 1;  // columns of V
  Index nw = 0;  // columns of W
  v.col(0) = flat(start) / start_norm;
  Matrix buffer(rows, cols);
  double scale = 0.0;

  for (int cycle = 0; cycle <= options.max_restarts; ++cycle) {
    bool invariant = false;
    while (nw < nv) {
      Eigen::Map<RealVector>(reinterpret_cast<double*>(buffer.data()), len) = v.col(nw);
      const Matrix image = op(buffer);
      ++best.operator_applications;
      w.col(nw) = flat(image);
      ++nw;
      scale = std::max(scale, w.col(nw - 1).norm());
      if (nv == max_dim) break;
      // Two passes of classical Gram-Schmidt against the full basis.
      RealVector z = w.col(nw - 1);
      for (int pass = 0; pass < 2; ++pass) {
        const RealVector c = v.leftCols(nv).transpose() * z;
        z.noalias() -= v.leftCols(nv) * c;
      }
      const double b = z.norm();
      if (b <= 1e-14 * std::max(scale, 1e-300)) {
        invariant = true;
        break;
      }
      v.col(nv++) = z / b;
    }

    const Index dim = nw;
    const RealMatrix vw = v.leftCols(dim).transpose() * w.leftCols(dim);
    const RealMatrix t = 0.5 * (vw + vw.transpose());
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(t);
    const RealVector& theta = eig.eigenvalues();
    const RealMatrix& s = eig.eigenvectors();
    scale = std::max(scale, theta.cwiseAbs().maxCoeff());

    RealVector x = v.leftCols(dim) * s.col(0);
    RealVector resid = w.leftCols(dim) * s.col(0) - theta(0) * x;
    const double residual = invariant ? 0.0 : resid.norm();

    // Keeping x in the basis makes the Ritz values non-increasing.
    best.value = theta(0);
    best.residual = residual;
    best.vector.resize(rows, cols);
    Eigen::Map<RealVector>(reinterpret_cast<double*>(best.vector.data()), len) = x;
    const bool small = residual <= options.residual_tol * std::max(scale, 1e-300);
    if (invariant || small || cycle == options.max_restarts) {
      best.converged = invariant || small;
      break;
    }

    // Thick restart: keep the lowest Ritz pairs and continue from the
    // residual, which is orthogonal to the current basis.
    const Index p = std::min(keep, dim);
    const RealMatrix kept_v = v.leftCols(dim) * s.leftCols(p);
    const RealMatrix kept_w = w.leftCols(dim) * s.leftCols(p);
    v.leftCols(p) = kept_v;
    w.leftCols(p) = kept_w;
    nv = nw = p;
    for (int pass = 0; pass < 2; ++pass) {
      const RealVector c = v.leftCols(nv).transpose() * resid;
      resid.noalias() -= v.leftCols(nv) * c;
    }
    const double rn = resid.norm();
    if (!(rn > 0.0)) {
      best.converged = true;
      break;
    }
    v.col(nv++) = resid / rn;
  }
  return best;
}

}  // namespace smooth_sdp::linalg
