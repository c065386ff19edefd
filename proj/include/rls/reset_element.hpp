#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "rls/lti.hpp"

namespace rls {

/// Unified first-order reset element: A_R = -w_alpha, B_R = w_beta,
/// C_R = 1, D_R = 0, jump x+ = gamma x.
///
/// w_alpha = 0, w_beta = 1 is the generalized Clegg integrator;
/// w_alpha = w_beta > 0 is the FORE.
struct GeneralizedFore {
  double omega_alpha = 0.0;
  double omega_beta = 1.0;
  double gamma = 0.0;

  bool is_clegg() const { return omega_alpha == 0.0; }
};

/// Validating constructor; throws std::invalid_argument when w_alpha < 0,
/// w_beta <= 0 or gamma is outside the open interval (-1, 1).
GeneralizedFore build_generalized_fore(double omega_alpha, double omega_beta,
                                       double gamma);

inline GeneralizedFore clegg_integrator(double gamma = 0.0) {
  return build_generalized_fore(0.0, 1.0, gamma);
}
inline GeneralizedFore fore(double omega_r, double gamma) {
  return build_generalized_fore(omega_r, omega_r, gamma);
}

/// Hybrid reset controller in matrix form. Only the first `reset_dim` states
/// are scaled by the jump; the rest pass through unchanged.
struct ResetElement {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
  double D = 0.0;
  double gamma = 0.0;
  int reset_dim = 1;

  int order() const { return static_cast<int>(A.rows()); }
  /// diag(gamma I_reset_dim, I)
  Eigen::MatrixXd jump_matrix() const;
};

ResetElement to_reset_element(const GeneralizedFore& el);

/// Base-linear controller w_beta/(s + w_alpha). Independent of gamma.
RationalTransferFunction base_linear(const GeneralizedFore& el);

/// 50 log-spaced reset intervals between 1e-5 s and 1 s.
std::vector<double> default_reset_interval_probes();

/// Spectral radius of A_rho exp(A_R delta) below one for every probed delta.
bool open_loop_stability(const ResetElement& el, std::span<const double> probes);

/// Scalar element: |gamma| e^{-w_alpha delta} < 1 for all delta > 0, which
/// always holds for a valid element. The probe grid is checked as well.
bool open_loop_stability(const GeneralizedFore& el,
                         std::span<const double> probes);

/// Open-loop assembly: e -> reset element -> pre_gain -> C_alpha -> P,
/// with C_s forming the reset-trigger signal from e.
struct ShapedOpenLoop {
  GeneralizedFore reset;
  RationalTransferFunction c_alpha = RationalTransferFunction::unity();
  RationalTransferFunction shaping = RationalTransferFunction::unity();
  RationalTransferFunction plant = RationalTransferFunction::unity();
  double pre_gain = 1.0;

  /// Same assembly with C_s = 1.
  ShapedOpenLoop unshaped() const;
};

/// Checks the open-loop assumptions: the shaping filter is Hurwitz and
/// C_alpha has no right-half-plane poles (simple integrators are allowed,
/// since every PID-type C_alpha carries one). Throws std::invalid_argument
/// naming the offending block.
void validate(const ShapedOpenLoop& sys);

}  // namespace rls
