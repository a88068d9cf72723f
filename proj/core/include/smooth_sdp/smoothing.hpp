#pragma once

#include <cstdint>
#include <utility>

#include "smooth_sdp/types.hpp"

namespace smooth_sdp {

struct WignerSpec {
  Index n = 0;
  /// Entry standard deviation.
  double sigma_w = 0.0;
  FieldTag field = FieldTag::kComplex;
  std::uint64_t seed = 0;
};

/// Gaussian Wigner matrix. Entries on and above the diagonal are drawn in
/// row-major order; off-diagonal complex entries split the variance sigma_w^2
/// evenly between real and imaginary parts, diagonal entries are real with
/// variance sigma_w^2.
SelfAdjointMatrix sample_wigner(const WignerSpec& spec);

/// ||W||_op <= 3 sigma_w sqrt(n).
bool wigner_norm_event(const SelfAdjointMatrix& w, double sigma_w, Index n);

/// R K (||C||_op + 3 sigma_w sqrt(n)).
double kappa(double trace_bound, double projector_bound, double cost_norm,
             double n, double sigma_w);

struct SmoothedParams {
  double trace_bound = 0.0;
  double projector_bound = 0.0;
  double cost_norm = 0.0;
  double n = 0.0;
  double m = 0.0;
  double sigma_w = 0.0;
  /// In (0, 1]; delta = 1 drops the confidence term.
  double delta = 0.0;
  /// Universal constant; its true value is unknown.
  double c0 = 1.0;
};

/// 3 [log n + sqrt(log(1/delta)) + sqrt(m log(1 + 6 kappa sqrt(c0 n) / sigma_w))].
double min_rank_rhs(const SmoothedParams& params);
/// Ceiling of min_rank_rhs. Throws for sigma_w = 0.
Index min_rank(const SmoothedParams& params);

/// c0 n K (2 + K R)^2 (||C||_op + 3 sigma_w sqrt(n))
///   / (9 m sigma_w^2 log(1 + 6 kappa sqrt(c0 n) / sigma_w)).
double eta(const SmoothedParams& params);

/// (eps_g / sigma_w) sqrt(c0 n) / k.
double fosp_sigma_bound(double eps_g, double sigma_w, double n, Index k, double c0);

struct PerturbedCost {
  SelfAdjointMatrix cost;
  SelfAdjointMatrix wigner;
};

/// C + W with W = sample_wigner(spec).
PerturbedCost perturb_cost(const SelfAdjointMatrix& cost, const WignerSpec& spec);

}  // namespace smooth_sdp
