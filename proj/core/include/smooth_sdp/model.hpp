#pragma once

#include <memory>
#include <span>
#include <vector>

#include "smooth_sdp/types.hpp"

namespace smooth_sdp {

/// Default relative eigenvalue cut for the Gram pseudo-inverse.
inline constexpr double kDefaultRankTol = 1e-10;

enum class ConstraintKind {
  kDense,
  /// A_i = e_i e_i^* for i = 1..n: each row of Y has a prescribed norm.
  kRowNorm,
};

/// The linear map X -> (<A_1, X>, ..., <A_m, X>) and its adjoint.
///
/// Dense constraint lists are stored as given. The row-norm structure
/// (PhaseCut, Max-Cut, angular synchronization) is stored implicitly so that
/// n in the thousands stays tractable; both representations expose the same
/// operations and agree exactly on the same constraints.
class ConstraintOperator {
 public:
  ConstraintOperator();

  static ConstraintOperator dense(std::vector<SelfAdjointMatrix> matrices);
  static ConstraintOperator row_norm(Index n, FieldTag field);
  /// Like dense(), but recognizes A_i = e_i e_i^* (i = 1..n) and switches to
  /// the row-norm representation.
  static ConstraintOperator from_matrices(std::vector<SelfAdjointMatrix> matrices);

  ConstraintKind kind() const;
  Index n() const;
  Index m() const;
  FieldTag field() const;

  /// Materializes A_i.
  SelfAdjointMatrix matrix(Index i) const;

  /// (<A_i, X>)_i for any square X; always real.
  RealVector apply(const Matrix& x) const;
  /// sum_i mu_i A_i.
  Matrix adjoint(const RealVector& mu) const;
  /// (<A_i Y, Z>)_i, which equals A(Z Y^*) without forming Z Y^*.
  RealVector pair_with_factor(const Matrix& y, const Matrix& z) const;
  /// A^*(mu) Y.
  Matrix adjoint_times(const RealVector& mu, const Matrix& y) const;
  /// G_ij = <A_i Y, A_j Y>.
  RealMatrix gram(const Matrix& y) const;
  /// H_ij = <A_i, A_j>, the Gram matrix of the constraints themselves.
  RealMatrix constraint_gram() const;

 private:
  struct Impl;
  explicit ConstraintOperator(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// min <C, X> s.t. A(X) = b, X psd, together with its compactness constants:
/// trace_bound R >= Tr X on the feasible set and projector_bound K >=
/// ||A^* o G^+ o A||_op on the factorized feasible set.
class SdpProblem {
 public:
  SdpProblem(SelfAdjointMatrix cost, ConstraintOperator constraints,
             RealVector b, double trace_bound, double projector_bound,
             bool projector_bound_is_estimate = false);

  const SelfAdjointMatrix& cost() const { return data_->cost; }
  const ConstraintOperator& constraints() const { return data_->constraints; }
  const RealVector& b() const { return data_->b; }
  FieldTag field() const { return data_->cost.field(); }
  Index n() const { return data_->constraints.n(); }
  Index m() const { return data_->constraints.m(); }
  double trace_bound() const { return data_->trace_bound; }
  double projector_bound() const { return data_->projector_bound; }
  bool projector_bound_is_estimate() const {
    return data_->projector_bound_is_estimate;
  }

  /// Same constraints and constants with a different cost matrix.
  SdpProblem with_cost(SelfAdjointMatrix cost) const;

  /// True when every row of Y is constrained to a fixed positive norm.
  bool has_row_norm_constraints() const;

 private:
  struct Data {
    SelfAdjointMatrix cost;
    ConstraintOperator constraints;
    RealVector b;
    double trace_bound;
    double projector_bound;
    bool projector_bound_is_estimate;
  };
  std::shared_ptr<const Data> data_;
};

/// Y together with every quantity derived from it for a given cost:
/// G, G^+, mu = G^+ A(C Y Y^*), S = C - A^*(mu) and the feasibility residual.
/// All caches are filled at construction.
class FactorPoint {
 public:
  const SdpProblem& problem() const { return problem_; }
  const SelfAdjointMatrix& cost() const { return cost_; }
  const Matrix& y() const { return y_; }
  const RealMatrix& gram() const { return gram_; }
  const RealMatrix& gram_pinv() const { return gram_pinv_; }
  Index gram_rank() const { return gram_rank_; }
  bool gram_is_diagonal() const { return gram_diagonal_; }
  const RealVector& mu() const { return mu_; }
  const SelfAdjointMatrix& s() const { return s_; }
  double feas_residual() const { return feas_residual_; }
  /// g(Y) = <C Y, Y>.
  double objective() const { return objective_; }
  /// C Y, reused by the gradient and the identity checks.
  const Matrix& cost_times_y() const { return cy_; }

  /// G^+ v, with the diagonal fast path when G is diagonal.
  RealVector apply_gram_pinv(const RealVector& v) const;

 private:
  friend FactorPoint build_factor_point(const SdpProblem&,
                                        const SelfAdjointMatrix&,
                                        const Matrix&, double);
  FactorPoint() = default;

  SdpProblem problem_{SelfAdjointMatrix(), ConstraintOperator(),
                      RealVector(), 1.0, 1.0};
  SelfAdjointMatrix cost_;
  Matrix y_;
  Matrix cy_;
  RealMatrix gram_;
  RealMatrix gram_pinv_;
  Index gram_rank_ = 0;
  bool gram_diagonal_ = false;
  RealVector mu_;
  SelfAdjointMatrix s_;
  double feas_residual_ = 0.0;
  double objective_ = 0.0;
};

RealVector apply_constraint_operator(const SdpProblem& problem,
                                     const SelfAdjointMatrix& x);
SelfAdjointMatrix apply_adjoint(const SdpProblem& problem,
                                const RealVector& mu);
RealMatrix gram_matrix(const SdpProblem& problem, const Matrix& y);
RealMatrix gram_pseudo_inverse(const RealMatrix& g,
                               double rank_tol = kDefaultRankTol);
/// ||A(Y Y^*) - b||_2.
double feasibility_residual(const SdpProblem& problem, const Matrix& y);

/// `cost` is the active objective matrix, possibly a perturbation of
/// problem.cost().
FactorPoint build_factor_point(const SdpProblem& problem,
                               const SelfAdjointMatrix& cost, const Matrix& y,
                               double rank_tol = kDefaultRankTol);

/// ||A^* o G^+ o A||_op at Y, as an operator on self-adjoint matrices.
double projector_operator_norm(const ConstraintOperator& constraints,
                               const Matrix& y,
                               double rank_tol = kDefaultRankTol);

struct ProjectorBoundEstimate {
  double value = 0.0;
  Index samples = 0;
  /// Always true: a maximum over samples only lower-bounds the supremum.
  bool is_estimate = true;
};

/// Max of projector_operator_norm over user-supplied feasible points.
ProjectorBoundEstimate estimate_projector_bound(
    const ConstraintOperator& constraints, std::span<const Matrix> samples,
    double rank_tol = kDefaultRankTol);

}  // namespace smooth_sdp
