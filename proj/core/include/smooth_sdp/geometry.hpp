#pragma once

#include <functional>

#include "smooth_sdp/model.hpp"

namespace smooth_sdp {

/// Relative tolerance for membership in the tangent space.
inline constexpr double kTangentTol = 1e-10;

/// An n x k matrix meant to lie in T_Y M at some factor point. Tangency is
/// checked where it matters (Hessian application), not at construction.
class TangentVector {
 public:
  TangentVector() = default;
  explicit TangentVector(Matrix v) : v_(std::move(v)) {}

  const Matrix& matrix() const { return v_; }
  double norm() const { return std::sqrt(inner(v_, v_)); }

  TangentVector operator+(const TangentVector& o) const { return TangentVector(v_ + o.v_); }
  TangentVector operator-(const TangentVector& o) const { return TangentVector(v_ - o.v_); }
  TangentVector operator*(double c) const { return TangentVector(v_ * c); }
  friend TangentVector operator*(double c, const TangentVector& t) { return t * c; }

 private:
  Matrix v_;
};

inline double inner(const TangentVector& a, const TangentVector& b) {
  return inner(a.matrix(), b.matrix());
}

/// Largest violation max_i |<A_i Y, V>| / ||A_i Y|| relative to ||V||.
double tangency_violation(const FactorPoint& point, const Matrix& v);

/// Proj_Y Z = Z - A^*(G^+ A(Z Y^*)) Y.
TangentVector tangent_project(const FactorPoint& point, const Matrix& z);

/// g(Y) = <C Y, Y>.
double objective(const SelfAdjointMatrix& cost, const Matrix& y);

/// grad g(Y) = 2 S Y.
TangentVector riemannian_gradient(const FactorPoint& point);

/// Hess g(Y)[V] = 2 Proj_Y(S V). Throws kNotTangent when V is not tangent
/// to kTangentTol.
TangentVector riemannian_hessian_apply(const FactorPoint& point,
                                       const TangentVector& v);

enum class RetractionKind { kRowNormalize, kUserSupplied };

/// Maps (Y, V) to a point of M. Row normalization is exact for row-norm
/// constraints; any other feasible set needs a user-supplied map.
class Retraction {
 public:
  using Function = std::function<Matrix(const Matrix& y, const Matrix& v)>;

  static Retraction row_normalize() { return Retraction(RetractionKind::kRowNormalize, {}); }
  static Retraction user_supplied(Function f) {
    return Retraction(RetractionKind::kUserSupplied, std::move(f));
  }

  RetractionKind kind() const { return kind_; }
  const Function& function() const { return fn_; }

 private:
  Retraction(RetractionKind kind, Function fn) : kind_(kind), fn_(std::move(fn)) {}
  RetractionKind kind_;
  Function fn_;
};

/// Throws kUnsupportedConstraints for row normalization on other
/// constraints, kRetractionFailure when a row of Y + V vanishes.
Matrix retract(const FactorPoint& point, const Matrix& v,
               const Retraction& retraction);

/// Row normalization without a factor point: row i of Y + V rescaled to
/// norm sqrt(b_i).
Matrix row_normalize(const Matrix& y, const Matrix& v, const RealVector& b);

/// Real dimension of the tangent space: dim_R K^{n x k} - rank G.
Index tangent_space_dimension(const FactorPoint& point);

}  // namespace smooth_sdp
