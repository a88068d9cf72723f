#pragma once

#include "smooth_sdp/model.hpp"

namespace smooth_sdp {

/// Smallest eigenvalue of S(Y), dense eigensolver.
double lambda_min_S(const FactorPoint& point);

/// K (2 + K R)^2.
double zeta(double projector_bound, double trace_bound);

/// -eps_H - zeta(K, R) ||C~||_op sigma_k^2. At any (eps_g, eps_H)-SOSP,
/// lambda_min(S) is at least this value.
double sosp_eigenvalue_bound(double eps_h, double sigma_k, double cost_norm,
                             double projector_bound, double trace_bound);

/// -min(0, lambda_min) R + (eps_g / 2) sqrt(R): an upper bound on
/// g(Y) - f* whenever ||2 S Y|| <= eps_g.
double deterministic_gap_bound(double lambda_min, double eps_g, double trace_bound);
double deterministic_gap_bound(const FactorPoint& point, double eps_g,
                               double trace_bound);

/// <mu, b> + min(0, lambda_min) R, a lower bound on f* of the active cost.
double dual_lower_bound(double lambda_min, const FactorPoint& point,
                        double trace_bound);
double dual_lower_bound(const FactorPoint& point, double trace_bound);

/// (eps_H + eps_g^2 eta) R + (eps_g / 2) sqrt(R). Depends on c0 through eta,
/// so it is not a rigorous certificate.
double theorem_gap_bound(double eps_g, double eps_h, double eta, double trace_bound);

/// eps_f + 2 ||W||_op R: gap on the unperturbed cost given the gap eps_f on
/// the perturbed one.
double unperturbed_gap_bound(double perturbed_gap, double w_norm, double trace_bound);

struct CertificateInputs {
  double eps_g = 0.0;
  double eps_h = 0.0;
  double sigma_k = 0.0;
  double trace_bound = 0.0;
  double projector_bound = 0.0;
  double cost_norm = 0.0;
};

struct Certificate {
  double objective = 0.0;
  double lambda_min_S = 0.0;
  double dual_lower_bound = 0.0;
  /// deterministic_gap_bound with inputs.eps_g.
  double gap_upper_bound = 0.0;
  double zeta = 0.0;
  /// sosp_eigenvalue_bound with the echoed inputs.
  double eigenvalue_bound = 0.0;
  CertificateInputs inputs;
};

Certificate certify(const FactorPoint& point, const CertificateInputs& inputs);

}  // namespace smooth_sdp
