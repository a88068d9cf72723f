#include "smooth_sdp/phasecut.hpp"

#include <Eigen/SVD>

#include <cmath>

#include "smooth_sdp/random.hpp"

namespace smooth_sdp::phasecut {

namespace {

Eigen::BDCSVD<Matrix> thin_svd(const Matrix& a) {
  return Eigen::BDCSVD<Matrix>(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

}  // namespace

Index measurement_count(Index d, double oversampling) {
  const double x = oversampling * static_cast<double>(d);
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, x)) return static_cast<Index>(r);
  return static_cast<Index>(std::ceil(x));
}

PhasecutInstance generate_instance(Index d, double oversampling,
                                   double noise_sigma, std::uint64_t seed) {
  if (d < 1) throw Error(ErrorCode::kInvalidArgument, "d must be >= 1");
  if (!(oversampling >= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "oversampling must be >= 1");
  }
  if (!(noise_sigma >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise_sigma must be >= 0");
  }
  PhasecutInstance inst;
  inst.d = d;
  inst.n = measurement_count(d, oversampling);
  inst.noise_sigma = noise_sigma;
  inst.seed = seed;

  Rng rng(seed);
  CVector z(d);
  for (Index i = 0; i < d; ++i) z(i) = rng.complex_normal();
  inst.a = rng.field_matrix(inst.n, d, FieldTag::kComplex);
  const RealVector magnitudes = (inst.a * z).cwiseAbs();
  inst.b.resize(inst.n);
  for (Index i = 0; i < inst.n; ++i) {
    const double eps = noise_sigma * rng.normal();
    inst.b(i) = std::max(magnitudes(i) + eps, kMeasurementFloor);
  }
  inst.z_true = std::move(z);
  return inst;
}

PhasecutInstance generate_floor_inactive_instance(Index d, double oversampling,
                                                  std::uint64_t seed,
                                                  int max_retries) {
  for (int t = 0; t < max_retries; ++t) {
    PhasecutInstance inst =
        generate_instance(d, oversampling, 0.0, seed + static_cast<std::uint64_t>(t));
    if ((inst.a * *inst.z_true).cwiseAbs().minCoeff() > kMeasurementFloor) {
      return inst;
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              "no floor-inactive instance within the retry budget");
}

SelfAdjointMatrix build_cost(const PhasecutInstance& inst, double pinv_tol) {
  if (inst.a.rows() != inst.b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "A must have one row per measurement");
  }
  const auto svd = thin_svd(inst.a);
  const RealVector& sv = svd.singularValues();
  if (sv.size() == 0 || !(sv(sv.size() - 1) > pinv_tol * sv(0))) {
    throw Error(ErrorCode::kRankDeficient, "sensing matrix lacks full column rank");
  }
  // A A^+ = U U^* for the thin SVD of a full-column-rank A.
  const Matrix& u = svd.matrixU();
  Matrix c = -(u * u.adjoint());
  c.diagonal().array() += 1.0;
  const CVector bc = inst.b.cast<Complex>();
  c = bc.asDiagonal() * c * bc.asDiagonal();
  return SelfAdjointMatrix(c, FieldTag::kComplex);
}

SdpProblem build_sdp(const PhasecutInstance& inst, SelfAdjointMatrix cost) {
  const Index n = inst.b.size();
  return SdpProblem(std::move(cost),
                    ConstraintOperator::row_norm(n, FieldTag::kComplex),
                    RealVector::Ones(n), static_cast<double>(n), 1.0);
}

SdpProblem build_sdp(const PhasecutInstance& inst, double pinv_tol) {
  return build_sdp(inst, build_cost(inst, pinv_tol));
}

Index default_rank(Index n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  auto k = static_cast<Index>(std::sqrt(static_cast<double>(n)));
  while (k * k < n) ++k;
  while (k > 1 && (k - 1) * (k - 1) >= n) --k;
  return k;
}

PhasecutSolution round_solution(const PhasecutInstance& inst,
                                const SelfAdjointMatrix& cost, const Matrix& y) {
  if (y.rows() != inst.b.size() || cost.dim() != y.rows()) {
    throw Error(ErrorCode::kDimensionMismatch, "Y must have n rows");
  }
  PhasecutSolution sol;
  const Eigen::BDCSVD<Matrix> svd(y, Eigen::ComputeThinV);
  const CVector proj = y * svd.matrixV().col(0);
  sol.u.resize(proj.size());
  for (Index i = 0; i < proj.size(); ++i) {
    const double mag = std::abs(proj(i));
    sol.u(i) = mag > 0.0 ? proj(i) / mag : Complex(1.0, 0.0);
  }
  const CVector target = inst.b.cast<Complex>().cwiseProduct(sol.u);
  sol.z_hat = thin_svd(inst.a).solve(target);
  sol.objective = (sol.u.adjoint() * (cost.matrix() * sol.u))(0).real();
  if (inst.z_true) sol.relative_error = recovery_error(sol.z_hat, *inst.z_true);
  return sol;
}

PhasecutSolution round_solution(const PhasecutInstance& inst, const Matrix& y) {
  return round_solution(inst, build_cost(inst), y);
}

double recovery_error(const CVector& z_hat, const CVector& z_true) {
  if (z_hat.size() != z_true.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "signals must have equal length");
  }
  const double norm_true = z_true.norm();
  if (!(norm_true > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "z_true must be nonzero");
  }
  const Complex c = z_hat.dot(z_true);  // z_hat^* z_true
  const Complex theta = std::abs(c) > 0.0 ? c / std::abs(c) : Complex(1.0, 0.0);
  return (theta * z_hat - z_true).norm() / norm_true;
}

}  // namespace smooth_sdp::phasecut
