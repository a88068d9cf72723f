#pragma once

#include <Eigen/Dense>

#include <complex>
#include <memory>

#include "smooth_sdp/error.hpp"

namespace smooth_sdp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class FieldTag { kReal, kComplex };

/// Real dimension of one scalar of the field.
constexpr int field_dimension(FieldTag field) {
  return field == FieldTag::kReal ? 1 : 2;
}

/// <A, B> = Re Tr(A^* B), the real inner product used throughout.
inline double inner(const Matrix& a, const Matrix& b) {
  return a.real().cwiseProduct(b.real()).sum() +
         a.imag().cwiseProduct(b.imag()).sum();
}

inline double inner(const CVector& a, const CVector& b) {
  return a.real().dot(b.real()) + a.imag().dot(b.imag());
}

/// Immutable self-adjoint matrix. Construction mirrors the upper triangle
/// onto the lower one and drops the imaginary part of the diagonal, so the
/// stored value is exactly self-adjoint. Copies share storage.
class SelfAdjointMatrix {
 public:
  SelfAdjointMatrix() : SelfAdjointMatrix(Matrix(0, 0), FieldTag::kReal) {}

  /// Only the upper triangle of `upper` is read. For the real field any
  /// nonzero imaginary part in that triangle is rejected.
  SelfAdjointMatrix(const Matrix& upper, FieldTag field);

  static SelfAdjointMatrix zero(Index n, FieldTag field) {
    return SelfAdjointMatrix(Matrix::Zero(n, n), field);
  }
  static SelfAdjointMatrix identity(Index n, FieldTag field) {
    return SelfAdjointMatrix(Matrix::Identity(n, n), field);
  }

  const Matrix& matrix() const { return *data_; }
  FieldTag field() const { return field_; }
  Index dim() const { return data_->rows(); }

  SelfAdjointMatrix operator+(const SelfAdjointMatrix& other) const;
  SelfAdjointMatrix operator-(const SelfAdjointMatrix& other) const;
  SelfAdjointMatrix scaled(double c) const;

 private:
  struct Trusted {};
  SelfAdjointMatrix(Matrix exact, FieldTag field, Trusted)
      : data_(std::make_shared<const Matrix>(std::move(exact))),
        field_(field) {}

  std::shared_ptr<const Matrix> data_;
  FieldTag field_;
};

inline SelfAdjointMatrix::SelfAdjointMatrix(const Matrix& upper,
                                             FieldTag field)
    : field_(field) {
  if (upper.rows() != upper.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "self-adjoint matrix must be square");
  }
  const Index n = upper.rows();
  Matrix m(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < j; ++i) {
      Complex v = upper(i, j);
      if (field == FieldTag::kReal && v.imag() != 0.0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "real-field matrix has an imaginary entry");
      }
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
    if (field == FieldTag::kReal && upper(j, j).imag() != 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "real-field matrix has an imaginary entry");
    }
    m(j, j) = Complex(upper(j, j).real(), 0.0);
  }
  data_ = std::make_shared<const Matrix>(std::move(m));
}

inline SelfAdjointMatrix SelfAdjointMatrix::operator+(
    const SelfAdjointMatrix& other) const {
  if (dim() != other.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "self-adjoint sum");
  }
  const FieldTag f = (field_ == FieldTag::kComplex ||
                      other.field_ == FieldTag::kComplex)
                         ? FieldTag::kComplex
                         : FieldTag::kReal;
  // Entrywise sums of exactly self-adjoint matrices stay exactly self-adjoint.
  return SelfAdjointMatrix(matrix() + other.matrix(), f, Trusted{});
}

inline SelfAdjointMatrix SelfAdjointMatrix::operator-(
    const SelfAdjointMatrix& other) const {
  return *this + other.scaled(-1.0);
}

inline SelfAdjointMatrix SelfAdjointMatrix::scaled(double c) const {
  return SelfAdjointMatrix(matrix() * c, field_, Trusted{});
}

}  // namespace smooth_sdp
