#include "smooth_sdp/certify.hpp"

#include <algorithm>
#include <cmath>

#include "smooth_sdp/linalg.hpp"

namespace smooth_sdp {

double lambda_min_S(const FactorPoint& point) {
  return linalg::lambda_min(point.s());
}

double zeta(double projector_bound, double trace_bound) {
  const double t = 2.0 + projector_bound * trace_bound;
  return projector_bound * t * t;
}

double sosp_eigenvalue_bound(double eps_h, double sigma_k, double cost_norm,
                             double projector_bound, double trace_bound) {
  return -eps_h -
         zeta(projector_bound, trace_bound) * cost_norm * sigma_k * sigma_k;
}

double deterministic_gap_bound(double lambda_min, double eps_g,
                               double trace_bound) {
  return -std::min(0.0, lambda_min) * trace_bound +
         0.5 * eps_g * std::sqrt(trace_bound);
}

double deterministic_gap_bound(const FactorPoint& point, double eps_g,
                               double trace_bound) {
  return deterministic_gap_bound(lambda_min_S(point), eps_g, trace_bound);
}

double dual_lower_bound(double lambda_min, const FactorPoint& point,
                        double trace_bound) {
  return point.mu().dot(point.problem().b()) +
         std::min(0.0, lambda_min) * trace_bound;
}

double dual_lower_bound(const FactorPoint& point, double trace_bound) {
  return dual_lower_bound(lambda_min_S(point), point, trace_bound);
}

double theorem_gap_bound(double eps_g, double eps_h, double eta,
                         double trace_bound) {
  return (eps_h + eps_g * eps_g * eta) * trace_bound +
         0.5 * eps_g * std::sqrt(trace_bound);
}

double unperturbed_gap_bound(double perturbed_gap, double w_norm,
                             double trace_bound) {
  return perturbed_gap + 2.0 * w_norm * trace_bound;
}

Certificate certify(const FactorPoint& point, const CertificateInputs& inputs) {
  Certificate c;
  c.inputs = inputs;
  c.objective = point.objective();
  c.lambda_min_S = lambda_min_S(point);
  c.dual_lower_bound = dual_lower_bound(c.lambda_min_S, point, inputs.trace_bound);
  c.gap_upper_bound =
      deterministic_gap_bound(c.lambda_min_S, inputs.eps_g, inputs.trace_bound);
  c.zeta = zeta(inputs.projector_bound, inputs.trace_bound);
  c.eigenvalue_bound =
      sosp_eigenvalue_bound(inputs.eps_h, inputs.sigma_k, inputs.cost_norm,
                            inputs.projector_bound, inputs.trace_bound);
  return c;
}

}  // namespace smooth_sdp
