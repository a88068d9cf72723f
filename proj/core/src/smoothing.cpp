#include "smooth_sdp/smoothing.hpp"

#include <cmath>

#include "smooth_sdp/linalg.hpp"
#include "smooth_sdp/random.hpp"

namespace smooth_sdp {

namespace {

void validate(const SmoothedParams& p) {
  if (!(p.sigma_w > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "sigma_w must be positive; the bound diverges at 0");
  }
  if (!(p.delta > 0.0 && p.delta <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must lie in (0, 1]");
  }
  if (!(p.trace_bound > 0.0) || !(p.projector_bound > 0.0) ||
      !(p.cost_norm >= 0.0) || !(p.n >= 1.0) || !(p.m >= 1.0) || !(p.c0 > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "smoothed-analysis parameters out of range");
  }
}

double log_term(const SmoothedParams& p) {
  const double k = kappa(p.trace_bound, p.projector_bound, p.cost_norm, p.n, p.sigma_w);
  return std::log1p(6.0 * k * std::sqrt(p.c0 * p.n) / p.sigma_w);
}

}  // namespace

SelfAdjointMatrix sample_wigner(const WignerSpec& spec) {
  if (spec.n < 0 || !(spec.sigma_w >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "Wigner spec needs n >= 0, sigma_w >= 0");
  }
  Rng rng(spec.seed);
  const double var = spec.sigma_w * spec.sigma_w;
  Matrix upper = Matrix::Zero(spec.n, spec.n);
  for (Index i = 0; i < spec.n; ++i) {
    upper(i, i) = spec.sigma_w * rng.normal();
    for (Index j = i + 1; j < spec.n; ++j) {
      upper(i, j) = spec.field == FieldTag::kReal
                        ? Complex(spec.sigma_w * rng.normal(), 0.0)
                        : rng.complex_normal(var);
    }
  }
  return SelfAdjointMatrix(upper, spec.field);
}

bool wigner_norm_event(const SelfAdjointMatrix& w, double sigma_w, Index n) {
  return linalg::operator_norm(w, 0) <= 3.0 * sigma_w * std::sqrt(static_cast<double>(n));
}

double kappa(double trace_bound, double projector_bound, double cost_norm,
             double n, double sigma_w) {
  return trace_bound * projector_bound * (cost_norm + 3.0 * sigma_w * std::sqrt(n));
}

double min_rank_rhs(const SmoothedParams& params) {
  validate(params);
  return 3.0 * (std::log(params.n) + std::sqrt(std::log(1.0 / params.delta)) +
                std::sqrt(params.m * log_term(params)));
}

Index min_rank(const SmoothedParams& params) {
  return static_cast<Index>(std::ceil(min_rank_rhs(params)));
}

double eta(const SmoothedParams& params) {
  validate(params);
  const double kr = 2.0 + params.projector_bound * params.trace_bound;
  const double num = params.c0 * params.n * params.projector_bound * kr * kr *
                     (params.cost_norm + 3.0 * params.sigma_w * std::sqrt(params.n));
  const double den =
      9.0 * params.m * params.sigma_w * params.sigma_w * log_term(params);
  return num / den;
}

double fosp_sigma_bound(double eps_g, double sigma_w, double n, Index k, double c0) {
  if (!(sigma_w > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "sigma_w must be positive");
  }
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  return eps_g / sigma_w * std::sqrt(c0 * n) / static_cast<double>(k);
}

PerturbedCost perturb_cost(const SelfAdjointMatrix& cost, const WignerSpec& spec) {
  if (spec.n != cost.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "Wigner dimension must match the cost");
  }
  if (spec.field != cost.field()) {
    throw Error(ErrorCode::kInvalidArgument, "Wigner field must match the cost");
  }
  SelfAdjointMatrix w = sample_wigner(spec);
  return {cost + w, w};
}

}  // namespace smooth_sdp
