#pragma once

#include <cstdint>
#include <optional>

#include "smooth_sdp/model.hpp"

namespace smooth_sdp::phasecut {

/// Measurements are floored at this value after noise is added.
inline constexpr double kMeasurementFloor = 0.01;
inline constexpr double kDefaultPinvTol = 1e-10;

struct PhasecutInstance {
  Index d = 0;
  Index n = 0;
  /// n x d sensing matrix.
  Matrix a;
  std::optional<CVector> z_true;
  RealVector b;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

struct PhasecutSolution {
  /// Unit-modulus phases.
  CVector u;
  CVector z_hat;
  /// u^* C u.
  double objective = 0.0;
  std::optional<double> relative_error;
};

/// ceil(oversampling * d), ignoring representation error of the product.
Index measurement_count(Index d, double oversampling);

/// z and A have i.i.d. standard complex Gaussian entries (drawn in that
/// order, A row-major), then b = max(|Az| + eps, 0.01) with eps of length n.
PhasecutInstance generate_instance(Index d, double oversampling,
                                   double noise_sigma, std::uint64_t seed);

/// Noiseless instance whose floor never binds: min |Az| > 0.01. Seeds
/// seed, seed + 1, ... are tried; the returned instance records the one used.
PhasecutInstance generate_floor_inactive_instance(Index d, double oversampling,
                                                  std::uint64_t seed,
                                                  int max_retries = 100);

/// diag(b) (I - A A^+) diag(b). Throws kRankDeficient when
/// sigma_min(A) <= pinv_tol * sigma_max(A).
SelfAdjointMatrix build_cost(const PhasecutInstance& inst,
                             double pinv_tol = kDefaultPinvTol);

/// diag(X) = 1 over the complex field, R = n, K = 1.
SdpProblem build_sdp(const PhasecutInstance& inst, double pinv_tol = kDefaultPinvTol);
SdpProblem build_sdp(const PhasecutInstance& inst, SelfAdjointMatrix cost);

/// ceil(sqrt(n)).
Index default_rank(Index n);

/// Phases of Y v for the leading right singular vector v of Y, the
/// least-squares signal A^+ (b .* u) and the objective u^* C u.
PhasecutSolution round_solution(const PhasecutInstance& inst,
                                const SelfAdjointMatrix& cost, const Matrix& y);
PhasecutSolution round_solution(const PhasecutInstance& inst, const Matrix& y);

/// min over |theta| = 1 of ||theta z_hat - z_true|| / ||z_true||.
double recovery_error(const CVector& z_hat, const CVector& z_true);

}  // namespace smooth_sdp::phasecut
