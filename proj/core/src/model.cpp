#include "smooth_sdp/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

#include "smooth_sdp/linalg.hpp"

namespace smooth_sdp {

struct ConstraintOperator::Impl {
  ConstraintKind kind = ConstraintKind::kDense;
  Index n = 0;
  FieldTag field = FieldTag::kReal;
  std::vector<SelfAdjointMatrix> dense;  // empty for kRowNorm
};

namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

bool is_unit_diagonal_selector(const Matrix& a, Index i) {
  for (Index c = 0; c < a.cols(); ++c) {
    for (Index r = 0; r < a.rows(); ++r) {
      const Complex expected = (r == i && c == i) ? Complex(1.0) : Complex(0.0);
      if (a(r, c) != expected) return false;
    }
  }
  return true;
}

}  // namespace

ConstraintOperator::ConstraintOperator()
    : impl_(std::make_shared<const Impl>()) {}

ConstraintOperator::ConstraintOperator(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

ConstraintOperator ConstraintOperator::dense(
    std::vector<SelfAdjointMatrix> matrices) {
  require(!matrices.empty(), ErrorCode::kInvalidArgument,
          "at least one constraint is required");
  auto impl = std::make_shared<Impl>();
  impl->kind = ConstraintKind::kDense;
  impl->n = matrices.front().dim();
  impl->field = matrices.front().field();
  for (const auto& a : matrices) {
    require(a.dim() == impl->n, ErrorCode::kDimensionMismatch,
            "constraint matrices must share one dimension");
    require(a.field() == impl->field, ErrorCode::kInvalidArgument,
            "constraint matrices must share one field");
  }
  impl->dense = std::move(matrices);
  return ConstraintOperator(std::move(impl));
}

ConstraintOperator ConstraintOperator::row_norm(Index n, FieldTag field) {
  require(n >= 1, ErrorCode::kInvalidArgument, "row-norm constraints need n >= 1");
  auto impl = std::make_shared<Impl>();
  impl->kind = ConstraintKind::kRowNorm;
  impl->n = n;
  impl->field = field;
  return ConstraintOperator(std::move(impl));
}

ConstraintOperator ConstraintOperator::from_matrices(
    std::vector<SelfAdjointMatrix> matrices) {
  ConstraintOperator op = dense(std::move(matrices));
  const auto& list = op.impl_->dense;
  if (static_cast<Index>(list.size()) != op.n()) return op;
  for (Index i = 0; i < op.n(); ++i) {
    if (!is_unit_diagonal_selector(list[static_cast<std::size_t>(i)].matrix(), i)) {
      return op;
    }
  }
  return row_norm(op.n(), op.field());
}

ConstraintKind ConstraintOperator::kind() const { return impl_->kind; }
Index ConstraintOperator::n() const { return impl_->n; }
FieldTag ConstraintOperator::field() const { return impl_->field; }

Index ConstraintOperator::m() const {
  return impl_->kind == ConstraintKind::kRowNorm
             ? impl_->n
             : static_cast<Index>(impl_->dense.size());
}

SelfAdjointMatrix ConstraintOperator::matrix(Index i) const {
  require(i >= 0 && i < m(), ErrorCode::kInvalidArgument,
          "constraint index out of range");
  if (impl_->kind == ConstraintKind::kDense) {
    return impl_->dense[static_cast<std::size_t>(i)];
  }
  Matrix a = Matrix::Zero(n(), n());
  a(i, i) = 1.0;
  return SelfAdjointMatrix(a, field());
}

RealVector ConstraintOperator::apply(const Matrix& x) const {
  require(x.rows() == n() && x.cols() == n(), ErrorCode::kDimensionMismatch,
          "constraint operator input must be n x n");
  if (impl_->kind == ConstraintKind::kRowNorm) {
    return x.diagonal().real();
  }
  RealVector out(m());
  for (Index i = 0; i < m(); ++i) {
    out(i) = inner(impl_->dense[static_cast<std::size_t>(i)].matrix(), x);
  }
  return out;
}

Matrix ConstraintOperator::adjoint(const RealVector& mu) const {
  require(mu.size() == m(), ErrorCode::kDimensionMismatch,
          "multiplier length must equal m");
  if (impl_->kind == ConstraintKind::kRowNorm) {
    return mu.cast<Complex>().asDiagonal();
  }
  Matrix out = Matrix::Zero(n(), n());
  for (Index i = 0; i < m(); ++i) {
    out += mu(i) * impl_->dense[static_cast<std::size_t>(i)].matrix();
  }
  return out;
}

RealVector ConstraintOperator::pair_with_factor(const Matrix& y,
                                                const Matrix& z) const {
  require(y.rows() == n() && z.rows() == n() && y.cols() == z.cols(),
          ErrorCode::kDimensionMismatch, "factor shapes must match n x k");
  if (impl_->kind == ConstraintKind::kRowNorm) {
    return (y.real().cwiseProduct(z.real()) + y.imag().cwiseProduct(z.imag()))
        .rowwise()
        .sum();
  }
  RealVector out(m());
  for (Index i = 0; i < m(); ++i) {
    const Matrix ay = impl_->dense[static_cast<std::size_t>(i)].matrix() * y;
    out(i) = inner(ay, z);
  }
  return out;
}

Matrix ConstraintOperator::adjoint_times(const RealVector& mu,
                                         const Matrix& y) const {
  require(mu.size() == m(), ErrorCode::kDimensionMismatch,
          "multiplier length must equal m");
  require(y.rows() == n(), ErrorCode::kDimensionMismatch,
          "factor must have n rows");
  if (impl_->kind == ConstraintKind::kRowNorm) {
    return mu.asDiagonal() * y;
  }
  Matrix out = Matrix::Zero(n(), y.cols());
  for (Index i = 0; i < m(); ++i) {
    if (mu(i) != 0.0) {
      out += mu(i) * (impl_->dense[static_cast<std::size_t>(i)].matrix() * y);
    }
  }
  return out;
}

RealMatrix ConstraintOperator::gram(const Matrix& y) const {
  require(y.rows() == n(), ErrorCode::kDimensionMismatch,
          "factor must have n rows");
  if (impl_->kind == ConstraintKind::kRowNorm) {
    RealMatrix g = RealMatrix::Zero(n(), n());
    for (Index i = 0; i < n(); ++i) g(i, i) = y.row(i).squaredNorm();
    return g;
  }
  std::vector<Matrix> ay;
  ay.reserve(static_cast<std::size_t>(m()));
  for (const auto& a : impl_->dense) ay.push_back(a.matrix() * y);
  RealMatrix g(m(), m());
  for (Index i = 0; i < m(); ++i) {
    for (Index j = i; j < m(); ++j) {
      g(i, j) = g(j, i) = inner(ay[static_cast<std::size_t>(i)],
                                ay[static_cast<std::size_t>(j)]);
    }
  }
  return g;
}

RealMatrix ConstraintOperator::constraint_gram() const {
  if (impl_->kind == ConstraintKind::kRowNorm) {
    return RealMatrix::Identity(n(), n());
  }
  RealMatrix h(m(), m());
  for (Index i = 0; i < m(); ++i) {
    for (Index j = i; j < m(); ++j) {
      h(i, j) = h(j, i) = inner(impl_->dense[static_cast<std::size_t>(i)].matrix(),
                                impl_->dense[static_cast<std::size_t>(j)].matrix());
    }
  }
  return h;
}

SdpProblem::SdpProblem(SelfAdjointMatrix cost, ConstraintOperator constraints,
                       RealVector b, double trace_bound,
                       double projector_bound,
                       bool projector_bound_is_estimate) {
  require(cost.dim() == constraints.n(), ErrorCode::kDimensionMismatch,
          "cost and constraints must share dimension n");
  require(b.size() == constraints.m(), ErrorCode::kDimensionMismatch,
          "right-hand side length must equal m");
  require(constraints.m() >= 1 || cost.dim() == 0, ErrorCode::kInvalidArgument,
          "at least one constraint is required");
  require(std::isfinite(trace_bound) && trace_bound > 0.0,
          ErrorCode::kInvalidArgument, "trace bound R must be finite and positive");
  require(std::isfinite(projector_bound) && projector_bound > 0.0,
          ErrorCode::kInvalidArgument,
          "projector bound K must be finite and positive");
  if (cost.dim() > 0) {
    require(cost.field() == constraints.field(), ErrorCode::kInvalidArgument,
            "cost and constraints must share one field");
  }
  data_ = std::make_shared<const Data>(Data{std::move(cost), std::move(constraints),
                                            std::move(b), trace_bound,
                                            projector_bound,
                                            projector_bound_is_estimate});
}

SdpProblem SdpProblem::with_cost(SelfAdjointMatrix cost) const {
  return SdpProblem(std::move(cost), constraints(), b(), trace_bound(),
                    projector_bound(), projector_bound_is_estimate());
}

bool SdpProblem::has_row_norm_constraints() const {
  return constraints().kind() == ConstraintKind::kRowNorm &&
         (b().array() > 0.0).all();
}

RealVector FactorPoint::apply_gram_pinv(const RealVector& v) const {
  if (gram_diagonal_) return gram_pinv_.diagonal().cwiseProduct(v);
  return gram_pinv_ * v;
}

RealVector apply_constraint_operator(const SdpProblem& problem,
                                     const SelfAdjointMatrix& x) {
  require(x.dim() == problem.n(), ErrorCode::kDimensionMismatch,
          "X must be n x n");
  return problem.constraints().apply(x.matrix());
}

SelfAdjointMatrix apply_adjoint(const SdpProblem& problem,
                                const RealVector& mu) {
  return SelfAdjointMatrix(problem.constraints().adjoint(mu), problem.field());
}

RealMatrix gram_matrix(const SdpProblem& problem, const Matrix& y) {
  return problem.constraints().gram(y);
}

RealMatrix gram_pseudo_inverse(const RealMatrix& g, double rank_tol) {
  return linalg::psd_pseudo_inverse(g, rank_tol).pinv;
}

double feasibility_residual(const SdpProblem& problem, const Matrix& y) {
  return (problem.constraints().pair_with_factor(y, y) - problem.b()).norm();
}

FactorPoint build_factor_point(const SdpProblem& problem,
                               const SelfAdjointMatrix& cost, const Matrix& y,
                               double rank_tol) {
  require(cost.dim() == problem.n(), ErrorCode::kDimensionMismatch,
          "cost must be n x n");
  require(y.rows() == problem.n() && y.cols() >= 1,
          ErrorCode::kDimensionMismatch, "Y must be n x k with k >= 1");
  const ConstraintOperator& ops = problem.constraints();

  FactorPoint p;
  p.problem_ = problem;
  p.cost_ = cost;
  p.y_ = y;
  p.cy_ = cost.matrix() * y;
  p.objective_ = inner(p.cy_, y);
  p.gram_ = ops.gram(y);
  linalg::PseudoInverse pinv = linalg::psd_pseudo_inverse(p.gram_, rank_tol);
  p.gram_pinv_ = std::move(pinv.pinv);
  p.gram_rank_ = pinv.rank;
  p.gram_diagonal_ = pinv.diagonal;
  // A(C Y Y^*)_i = <A_i Y, C Y>.
  p.mu_ = p.apply_gram_pinv(ops.pair_with_factor(y, p.cy_));

  Matrix s = cost.matrix();
  if (ops.kind() == ConstraintKind::kRowNorm) {
    s.diagonal() -= p.mu_.cast<Complex>();
  } else {
    s -= ops.adjoint(p.mu_);
  }
  p.s_ = SelfAdjointMatrix(s, cost.field());
  p.feas_residual_ = (ops.pair_with_factor(y, y) - problem.b()).norm();
  return p;
}

double projector_operator_norm(const ConstraintOperator& constraints,
                               const Matrix& y, double rank_tol) {
  const RealMatrix g = constraints.gram(y);
  const linalg::PseudoInverse pinv = linalg::psd_pseudo_inverse(g, rank_tol);
  if (constraints.kind() == ConstraintKind::kRowNorm) {
    // H = I, so the norm is the largest entry of the diagonal G^+.
    return pinv.rank == 0 ? 0.0 : pinv.pinv.diagonal().maxCoeff();
  }
  // A^* G^+ A has the nonzero spectrum of (G^+)^{1/2} H (G^+)^{1/2}.
  Eigen::SelfAdjointEigenSolver<RealMatrix> eig(pinv.pinv);
  const RealVector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const RealMatrix sqrt_pinv =
      eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
  const RealMatrix core = sqrt_pinv * constraints.constraint_gram() * sqrt_pinv;
  Eigen::SelfAdjointEigenSolver<RealMatrix> top(0.5 * (core + core.transpose()),
                                                Eigen::EigenvaluesOnly);
  return std::max(0.0, top.eigenvalues()(top.eigenvalues().size() - 1));
}

ProjectorBoundEstimate estimate_projector_bound(
    const ConstraintOperator& constraints, std::span<const Matrix> samples,
    double rank_tol) {
  require(!samples.empty(), ErrorCode::kInvalidArgument,
          "projector bound estimation needs at least one sample");
  ProjectorBoundEstimate est;
  for (const Matrix& y : samples) {
    est.value = std::max(est.value, projector_operator_norm(constraints, y, rank_tol));
    ++est.samples;
  }
  return est;
}

}  // namespace smooth_sdp
