#include "smooth_sdp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "smooth_sdp/linalg.hpp"
#include "smooth_sdp/random.hpp"

namespace smooth_sdp {

namespace {

constexpr int kDefaultLanczosCap = 100;
// Upper limit on the memory held by one Lanczos basis and its image.
constexpr double kLanczosBasisBytes = 512.0 * 1024.0 * 1024.0;

TangentVector half_hessian(const FactorPoint& point, const TangentVector& v) {
  return 0.5 * riemannian_hessian_apply(point, v);
}

}  // namespace

const char* to_string(TcgReason reason) {
  switch (reason) {
    case TcgReason::kNegativeCurvature: return "negative_curvature";
    case TcgReason::kTrustBoundary: return "trust_boundary";
    case TcgReason::kSmallResidual: return "small_residual";
    case TcgReason::kMaxIters: return "max_iters";
  }
  return "unknown";
}

double default_eps_g(double cost_norm, double trace_bound) {
  return 1e-6 * std::max(1.0, cost_norm * std::sqrt(trace_bound));
}

double default_eps_h(double cost_norm) { return 1e-6 * std::max(1.0, cost_norm); }

double model_value(const TangentVector& grad, const TangentVector& v,
                   const TangentVector& hess_v) {
  return inner(grad, v) + 0.5 * inner(v, hess_v);
}

TcgResult truncated_cg(const FactorPoint& point, const TangentVector& grad,
                       double radius, const TcgOptions& options) {
  if (!(radius > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "trust radius must be positive");
  }
  const Matrix zero = Matrix::Zero(point.y().rows(), point.y().cols());
  TcgResult out;
  out.step = TangentVector(zero);
  out.hess_step = TangentVector(zero);

  // 2 S Y is tangent only up to absolute roundoff, which is large relative
  // to ||grad|| near a critical point.
  TangentVector r = tangent_project(point, grad.matrix());
  double r_r = inner(r, r);
  const double norm_r0 = std::sqrt(r_r);
  if (norm_r0 == 0.0) {
    out.reason = TcgReason::kSmallResidual;
    return out;
  }
  const double target =
      norm_r0 * std::min(std::pow(norm_r0, options.theta), options.kappa);
  const double radius_sq = radius * radius;

  TangentVector delta = -1.0 * r;
  // Norms and cross terms in the (unpreconditioned) metric.
  double e_e = 0.0;
  double e_d = 0.0;
  double d_d = r_r;

  out.reason = TcgReason::kMaxIters;
  for (int j = 0; j < options.max_iters; ++j) {
    const TangentVector h_delta = riemannian_hessian_apply(point, delta);
    ++out.hessian_applications;
    out.iterations = j + 1;
    const double d_hd = inner(delta, h_delta);
    const double alpha = r_r / d_hd;
    const double e_e_new = e_e + 2.0 * alpha * e_d + alpha * alpha * d_d;

    if (d_hd <= 0.0 || e_e_new >= radius_sq) {
      const double tau =
          (-e_d + std::sqrt(e_d * e_d + d_d * (radius_sq - e_e))) / d_d;
      out.step = out.step + tau * delta;
      out.hess_step = out.hess_step + tau * h_delta;
      out.reason = d_hd <= 0.0 ? TcgReason::kNegativeCurvature
                               : TcgReason::kTrustBoundary;
      return out;
    }

    out.step = out.step + alpha * delta;
    out.hess_step = out.hess_step + alpha * h_delta;
    e_e = e_e_new;

    // Re-project so roundoff never pushes the residual off T_Y M.
    r = tangent_project(point, (r + alpha * h_delta).matrix());
    const double r_r_new = inner(r, r);
    if (std::sqrt(r_r_new) <= target) {
      out.reason = TcgReason::kSmallResidual;
      return out;
    }
    const double beta = r_r_new / r_r;
    r_r = r_r_new;
    delta = beta * delta - r;
    e_d = beta * (e_d + alpha * d_d);
    d_d = r_r + beta * beta * d_d;
  }
  return out;
}

int lanczos_krylov_dim(Index tangent_dim, Index n, Index k, int cap) {
  if (tangent_dim <= 0) return 0;
  const double vector_bytes =
      32.0 * static_cast<double>(n) * static_cast<double>(std::max<Index>(k, 1));
  const double by_memory = std::floor(kLanczosBasisBytes / vector_bytes);
  double dim = std::min<double>(static_cast<double>(tangent_dim), cap);
  dim = std::min(dim, std::max(2.0, by_memory));
  return static_cast<int>(std::max(1.0, dim));
}

SospMeasurement measure_sosp_at(const FactorPoint& point, int lanczos_iters,
                                std::uint64_t seed) {
  SospMeasurement out;
  const Matrix& y = point.y();
  const TangentVector grad = riemannian_gradient(point);
  out.report.grad_norm = grad.norm();
  out.report.feas_residual = point.feas_residual();
  const RealVector sv = linalg::singular_values(y);
  out.report.sigma_k = y.cols() <= sv.size() ? sv(y.cols() - 1) : 0.0;
  out.report.tangent_dim = tangent_space_dimension(point);

  const int cap = lanczos_iters > 0 ? lanczos_iters : kDefaultLanczosCap;
  const int krylov =
      lanczos_krylov_dim(out.report.tangent_dim, y.rows(), y.cols(), cap);
  if (krylov == 0) {
    out.report.hess_lower_bound = 0.0;
    return out;
  }

  Rng rng(seed);
  const Matrix start =
      tangent_project(point, rng.field_matrix(y.rows(), y.cols(),
                                              point.problem().field()))
          .matrix();
  linalg::LanczosOptions lopts;
  lopts.krylov_dim = krylov;
  // Krylov vectors lose tangency slowly through cancellation; projecting the
  // input keeps the operator exactly Proj S Proj.
  const linalg::MatrixOperator op = [&point](const Matrix& v) {
    return half_hessian(point, tangent_project(point, v)).matrix();
  };
  const linalg::LanczosResult lz = linalg::lanczos_smallest(op, start, lopts);
  out.hessian_applications = lz.operator_applications;
  out.report.hess_lower_bound = lz.value;
  out.report.lanczos_residual = lz.residual;
  out.report.lanczos_converged = lz.converged;
  Matrix v = tangent_project(point, lz.vector).matrix();
  const double v_norm = std::sqrt(inner(v, v));
  if (v_norm > 0.0) v /= v_norm;
  out.eigenvector = std::move(v);
  return out;
}

SospReport measure_sosp(const SdpProblem& problem, const SelfAdjointMatrix& cost,
                        const Matrix& y, int lanczos_iters, std::uint64_t seed,
                        double rank_tol) {
  const FactorPoint point = build_factor_point(problem, cost, y, rank_tol);
  return measure_sosp_at(point, lanczos_iters, seed).report;
}

Matrix random_feasible_point(const SdpProblem& problem, Index k,
                             std::uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "rank k must be >= 1");
  if (!problem.has_row_norm_constraints()) {
    throw Error(ErrorCode::kUnsupportedConstraints,
                "random feasible points need row-norm constraints; supply Y0");
  }
  Rng rng(seed);
  const Matrix g = rng.field_matrix(problem.n(), k, problem.field());
  return row_normalize(g, Matrix::Zero(g.rows(), g.cols()), problem.b());
}

SolveResult solve(const SdpProblem& problem, const SelfAdjointMatrix& cost,
                  Index k, const std::optional<Matrix>& y0,
                  const SolverOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "rank k must be >= 1");
  if (cost.dim() != problem.n()) {
    throw Error(ErrorCode::kDimensionMismatch, "cost must be n x n");
  }
  if (!(options.rho_accept > 0.0 && options.rho_accept < 0.25)) {
    throw Error(ErrorCode::kInvalidArgument, "rho_accept must lie in (0, 0.25)");
  }
  if (!(options.tcg_kappa > 0.0 && options.tcg_kappa < 1.0) ||
      !(options.tcg_theta >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tCG parameters out of range");
  }

  SolveResult result;
  const double sqrt_r = std::sqrt(problem.trace_bound());
  if (options.eps_g && options.eps_H) {
    result.eps_g = *options.eps_g;
    result.eps_H = *options.eps_H;
  } else {
    const double cost_norm = linalg::operator_norm(cost, options.seed);
    result.eps_g = options.eps_g.value_or(default_eps_g(cost_norm, problem.trace_bound()));
    result.eps_H = options.eps_H.value_or(default_eps_h(cost_norm));
  }
  if (!(result.eps_g > 0.0) || !(result.eps_H > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "eps_g and eps_H must be positive");
  }
  const double max_radius = options.max_trust_radius.value_or(sqrt_r);
  double radius = options.initial_trust_radius.value_or(0.1 * sqrt_r);
  if (!(radius > 0.0) || !(max_radius >= radius)) {
    throw Error(ErrorCode::kInvalidArgument,
                "need 0 < initial trust radius <= max trust radius");
  }
  const Retraction retraction =
      options.retraction.value_or(Retraction::row_normalize());
  const int lanczos_cap = options.lanczos_iters.value_or(kDefaultLanczosCap);

  Matrix y;
  if (y0) {
    if (y0->rows() != problem.n() || y0->cols() != k) {
      throw Error(ErrorCode::kDimensionMismatch, "Y0 must be n x k");
    }
    y = *y0;
  } else {
    y = random_feasible_point(problem, k, options.seed);
  }

  FactorPoint point = build_factor_point(problem, cost, y, options.rank_tol);
  TangentVector grad = riemannian_gradient(point);
  std::optional<SospReport> final_report;

  TcgOptions tcg;
  tcg.kappa = options.tcg_kappa;
  tcg.theta = options.tcg_theta;

  // Negative-curvature direction measured at the current point; kept across
  // rejected steps since Y does not change.
  std::optional<Matrix> eigen_direction;
  int iter = 0;
  for (;; ++iter) {
    const double grad_norm = grad.norm();
    if (grad_norm <= result.eps_g && !eigen_direction) {
      if (!options.second_order) {
        result.converged = true;
        break;
      }
      SospMeasurement m = measure_sosp_at(point, lanczos_cap, options.seed);
      result.hessian_applications += m.hessian_applications;
      if (m.report.hess_lower_bound >= -result.eps_H) {
        result.converged = true;
        final_report = m.report;
        break;
      }
      eigen_direction = std::move(m.eigenvector);
    }
    if (iter >= options.max_outer_iters) break;

    const Index tangent_dim = tangent_space_dimension(point);
    tcg.max_iters = static_cast<int>(
        std::max<Index>(1, std::min<Index>(options.tcg_max_iters, tangent_dim)));
    TcgResult inner_result = truncated_cg(point, grad, radius, tcg);
    result.hessian_applications += inner_result.hessian_applications;

    IterationRecord rec;
    rec.iteration = iter;
    rec.objective = point.objective();
    rec.grad_norm = grad_norm;
    rec.radius = radius;
    rec.tcg_reason = inner_result.reason;
    rec.tcg_iterations = inner_result.iterations;

    TangentVector step = inner_result.step;
    double model_decrease = -model_value(grad, step, inner_result.hess_step);
    bool to_boundary = inner_result.reason == TcgReason::kNegativeCurvature ||
                       inner_result.reason == TcgReason::kTrustBoundary;

    if (eigen_direction) {
      TangentVector v(*eigen_direction);
      const double v_norm = v.norm();
      if (v_norm > 0.0) {
        v = (1.0 / v_norm) * v;
        if (inner(grad, v) > 0.0) v = -1.0 * v;
        const TangentVector e = radius * v;
        const TangentVector he = riemannian_hessian_apply(point, e);
        ++result.hessian_applications;
        const double e_decrease = -model_value(grad, e, he);
        if (e_decrease > model_decrease) {
          step = e;
          model_decrease = e_decrease;
          to_boundary = true;
          rec.eigenstep = true;
        }
      }
    }

    const Matrix y_new = retract(point, step.matrix(), retraction);
    // Difference of quadratic forms, accurate to the size of the step.
    const double delta_f =
        inner(Matrix(cost.matrix() * (y_new - point.y())), Matrix(y_new + point.y()));
    const double rho = model_decrease > 0.0
                           ? -delta_f / model_decrease
                           : -std::numeric_limits<double>::infinity();
    const bool accepted = model_decrease > 0.0 && rho > options.rho_accept;

    if (rho < 0.25) {
      radius *= 0.25;
    } else if (rho > 0.75 && to_boundary) {
      radius = std::min(2.0 * radius, max_radius);
    }

    rec.rho = rho;
    rec.objective_change = delta_f;
    rec.model_decrease = model_decrease;
    rec.accepted = accepted;
    if (accepted) {
      point = build_factor_point(problem, cost, y_new, options.rank_tol);
      grad = riemannian_gradient(point);
      eigen_direction.reset();
    }
    rec.feas_residual = point.feas_residual();
    if (options.observer) options.observer(rec);
    if (options.record_trace) result.trace.push_back(rec);
  }

  result.outer_iterations = iter;
  if (!final_report) {
    SospMeasurement m = measure_sosp_at(point, lanczos_cap, options.seed);
    result.hessian_applications += m.hessian_applications;
    final_report = m.report;
  }
  result.sosp = *final_report;
  result.y = point.y();
  result.objective_value = point.objective();
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

}  // namespace smooth_sdp
