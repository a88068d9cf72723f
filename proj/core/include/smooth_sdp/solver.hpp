#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "smooth_sdp/geometry.hpp"

namespace smooth_sdp {

/// Quantities of Definitions of approximate first and second order
/// stationarity, measured at one point.
struct SospReport {
  /// ||2 S Y||.
  double grad_norm = 0.0;
  /// Estimate of min over unit tangent V of <V, S V>, i.e. half the smallest
  /// eigenvalue of the Riemannian Hessian on T_Y M. Zero when T_Y M = {0}.
  double hess_lower_bound = 0.0;
  /// k-th singular value of Y.
  double sigma_k = 0.0;
  double feas_residual = 0.0;
  /// Real dimension of T_Y M.
  Index tangent_dim = 0;
  /// Lanczos residual of the reported Ritz pair and whether it met tolerance.
  double lanczos_residual = 0.0;
  bool lanczos_converged = true;
};

enum class TcgReason { kNegativeCurvature, kTrustBoundary, kSmallResidual, kMaxIters };

const char* to_string(TcgReason reason);

struct IterationRecord {
  int iteration = 0;
  double objective = 0.0;
  double grad_norm = 0.0;
  double radius = 0.0;
  double rho = 0.0;
  /// f(Y_new) - f(Y), evaluated as <C (Y_new - Y), Y_new + Y>.
  double objective_change = 0.0;
  double model_decrease = 0.0;
  bool accepted = false;
  /// True when the negative-curvature eigenstep beat the tCG step.
  bool eigenstep = false;
  TcgReason tcg_reason = TcgReason::kSmallResidual;
  int tcg_iterations = 0;
  double feas_residual = 0.0;
};

struct SolverOptions {
  /// Absolute gradient-norm target; default 1e-6 * max(1, ||C~||_op sqrt(R)).
  std::optional<double> eps_g;
  /// Hessian target on <V, S V>; default 1e-6 * max(1, ||C~||_op).
  std::optional<double> eps_H;
  int max_outer_iters = 1000;
  /// Default 0.1 sqrt(R).
  std::optional<double> initial_trust_radius;
  /// Default sqrt(R).
  std::optional<double> max_trust_radius;
  int tcg_max_iters = 1000;
  double tcg_kappa = 0.1;
  double tcg_theta = 1.0;
  double rho_accept = 0.1;
  std::uint64_t seed = 0;
  bool second_order = true;
  /// Krylov dimension cap for the Hessian eigenvalue estimate; default 100.
  std::optional<int> lanczos_iters;
  double rank_tol = kDefaultRankTol;
  /// Default: row normalization.
  std::optional<Retraction> retraction;
  std::function<void(const IterationRecord&)> observer;
  bool record_trace = false;
};

struct SolveResult {
  Matrix y;
  double objective_value = 0.0;
  SospReport sosp;
  int outer_iterations = 0;
  double wall_time = 0.0;
  bool converged = false;
  /// Thresholds actually used, after defaults were resolved.
  double eps_g = 0.0;
  double eps_H = 0.0;
  int hessian_applications = 0;
  std::vector<IterationRecord> trace;
};

struct TcgOptions {
  int max_iters = 1000;
  double kappa = 0.1;
  double theta = 1.0;
};

struct TcgResult {
  TangentVector step;
  /// Hess[step], kept so the model value needs no extra product.
  TangentVector hess_step;
  TcgReason reason = TcgReason::kSmallResidual;
  int iterations = 0;
  int hessian_applications = 0;
};

/// m(V) = <grad, V> + 1/2 <V, Hess V>.
double model_value(const TangentVector& grad, const TangentVector& v,
                   const TangentVector& hess_v);

/// Steihaug-Toint truncated conjugate gradient on the trust-region model.
TcgResult truncated_cg(const FactorPoint& point, const TangentVector& grad,
                       double radius, const TcgOptions& options);

/// Lanczos Krylov dimension actually used at a point: min(dim T, cap) further
/// limited by a fixed memory budget for the basis.
int lanczos_krylov_dim(Index tangent_dim, Index n, Index k, int cap);

struct SospMeasurement {
  SospReport report;
  /// Unit tangent Ritz vector attaining hess_lower_bound (empty if dim T = 0).
  Matrix eigenvector;
  int hessian_applications = 0;
};

SospMeasurement measure_sosp_at(const FactorPoint& point, int lanczos_iters,
                                std::uint64_t seed);

/// lanczos_iters <= 0 selects the default cap of 100.
SospReport measure_sosp(const SdpProblem& problem, const SelfAdjointMatrix& cost,
                        const Matrix& y, int lanczos_iters, std::uint64_t seed,
                        double rank_tol = kDefaultRankTol);

/// Gaussian rows rescaled to norm sqrt(b_i). Row-norm constraints only.
Matrix random_feasible_point(const SdpProblem& problem, Index k,
                             std::uint64_t seed);

/// Riemannian trust-region method on {Y : A(Y Y^*) = b} for g(Y) = <cost Y, Y>.
SolveResult solve(const SdpProblem& problem, const SelfAdjointMatrix& cost,
                  Index k, const std::optional<Matrix>& y0,
                  const SolverOptions& options);

/// Defaults that depend on the problem, given ||cost||_op.
double default_eps_g(double cost_norm, double trace_bound);
double default_eps_h(double cost_norm);

}  // namespace smooth_sdp
