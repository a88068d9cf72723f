#include "smooth_sdp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace smooth_sdp {

namespace {

void check_shape(const FactorPoint& point, const Matrix& v) {
  if (v.rows() != point.y().rows() || v.cols() != point.y().cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "tangent candidate must have the shape of Y");
  }
}

}  // namespace

double tangency_violation(const FactorPoint& point, const Matrix& v) {
  check_shape(point, v);
  const ConstraintOperator& ops = point.problem().constraints();
  const RealVector pairs = ops.pair_with_factor(point.y(), v);
  // ||A_i Y||^2 is the diagonal of G.
  const RealVector ay_norm = point.gram().diagonal().cwiseMax(0.0).cwiseSqrt();
  const double v_norm = std::sqrt(inner(v, v));
  double worst = 0.0;
  for (Index i = 0; i < pairs.size(); ++i) {
    const double scale = ay_norm(i) * v_norm;
    if (scale > 0.0) worst = std::max(worst, std::abs(pairs(i)) / scale);
  }
  return worst;
}

TangentVector tangent_project(const FactorPoint& point, const Matrix& z) {
  check_shape(point, z);
  const ConstraintOperator& ops = point.problem().constraints();
  const RealVector nu = point.apply_gram_pinv(ops.pair_with_factor(point.y(), z));
  return TangentVector(z - ops.adjoint_times(nu, point.y()));
}

double objective(const SelfAdjointMatrix& cost, const Matrix& y) {
  if (cost.dim() != y.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "objective: Y must have n rows");
  }
  return inner(Matrix(cost.matrix() * y), y);
}

TangentVector riemannian_gradient(const FactorPoint& point) {
  return TangentVector(2.0 * (point.s().matrix() * point.y()));
}

TangentVector riemannian_hessian_apply(const FactorPoint& point,
                                       const TangentVector& v) {
  const double violation = tangency_violation(point, v.matrix());
  if (violation > kTangentTol) {
    throw Error(ErrorCode::kNotTangent,
                "Hessian argument violates tangency: relative violation " + std::to_string(violation / kTangentTol) + " x tolerance");
  }
  const TangentVector projected =
      tangent_project(point, point.s().matrix() * v.matrix());
  return 2.0 * projected;
}

Matrix row_normalize(const Matrix& y, const Matrix& v, const RealVector& b) {
  if (y.rows() != v.rows() || y.cols() != v.cols() || b.size() != y.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "row normalization shapes");
  }
  Matrix out = y + v;
  for (Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      throw Error(ErrorCode::kRetractionFailure,
                  "row " + std::to_string(i) + " of Y + V is zero");
    }
    out.row(i) *= std::sqrt(b(i)) / norm;
  }
  return out;
}

Matrix retract(const FactorPoint& point, const Matrix& v,
               const Retraction& retraction) {
  check_shape(point, v);
  if (retraction.kind() == RetractionKind::kUserSupplied) {
    if (!retraction.function()) {
      throw Error(ErrorCode::kInvalidArgument, "empty user-supplied retraction");
    }
    Matrix out = retraction.function()(point.y(), v);
    check_shape(point, out);
    return out;
  }
  if (!point.problem().has_row_norm_constraints()) {
    throw Error(ErrorCode::kUnsupportedConstraints,
                "row normalization requires row-norm constraints");
  }
  if (v.isZero(0.0)) return point.y();
  return row_normalize(point.y(), v, point.problem().b());
}

Index tangent_space_dimension(const FactorPoint& point) {
  const Index ambient = field_dimension(point.problem().field()) *
                        point.y().rows() * point.y().cols();
  return ambient - point.gram_rank();
}

}  // namespace smooth_sdp
