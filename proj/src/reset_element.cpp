#include "rls/reset_element.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace rls {

GeneralizedFore build_generalized_fore(double omega_alpha, double omega_beta,
                                       double gamma) {
  if (!std::isfinite(omega_alpha) || omega_alpha < 0.0)
    throw std::invalid_argument("w_alpha must be finite and >= 0");
  if (!std::isfinite(omega_beta) || !(omega_beta > 0.0))
    throw std::invalid_argument("w_beta must be finite and > 0");
  if (!(gamma > -1.0 && gamma < 1.0)) {
    std::ostringstream os;
    os << "gamma must lie in (-1, 1), got " << gamma;
    throw std::invalid_argument(os.str());
  }
  return {omega_alpha, omega_beta, gamma};
}

Eigen::MatrixXd ResetElement::jump_matrix() const {
  Eigen::MatrixXd M = Eigen::MatrixXd::Identity(order(), order());
  for (int i = 0; i < reset_dim && i < order(); ++i) M(i, i) = gamma;
  return M;
}

ResetElement to_reset_element(const GeneralizedFore& el) {
  ResetElement out;
  out.A = Eigen::MatrixXd::Constant(1, 1, -el.omega_alpha);
  out.B = Eigen::VectorXd::Constant(1, el.omega_beta);
  out.C = Eigen::RowVectorXd::Constant(1, 1.0);
  out.D = 0.0;
  out.gamma = el.gamma;
  out.reset_dim = 1;
  return out;
}

RationalTransferFunction base_linear(const GeneralizedFore& el) {
  return {{el.omega_beta}, {el.omega_alpha, 1.0}};
}

std::vector<double> default_reset_interval_probes() {
  std::vector<double> out(50);
  for (int i = 0; i < 50; ++i) out[i] = std::pow(10.0, -5.0 + 5.0 * i / 49.0);
  return out;
}

bool open_loop_stability(const ResetElement& el,
                         std::span<const double> probes) {
  if (probes.empty()) throw std::invalid_argument("probe list is empty");
  const Eigen::MatrixXd M = el.jump_matrix();
  for (double delta : probes) {
    if (!(delta > 0.0)) throw std::invalid_argument("probe durations must be positive");
    const Eigen::MatrixXd flow = (el.A * delta).exp();
    const Eigen::MatrixXd Md = M * flow;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(Md, false);
    const double radius = solver.eigenvalues().cwiseAbs().maxCoeff();
    if (!(radius < 1.0)) return false;
  }
  return true;
}

bool open_loop_stability(const GeneralizedFore& el,
                         std::span<const double> probes) {
  // |gamma| < 1 and w_alpha >= 0 bound the scalar radius for every delta.
  const bool analytic = std::abs(el.gamma) < 1.0 && el.omega_alpha >= 0.0;
  return analytic && open_loop_stability(to_reset_element(el), probes);
}

ShapedOpenLoop ShapedOpenLoop::unshaped() const {
  ShapedOpenLoop out = *this;
  out.shaping = RationalTransferFunction::unity();
  return out;
}

void validate(const ShapedOpenLoop& sys) {
  if (!is_hurwitz(sys.shaping))
    throw std::invalid_argument("shaping filter C_s is not Hurwitz");
  if (!is_marginally_stable(sys.c_alpha))
    throw std::invalid_argument("C_alpha has unstable or repeated imaginary-axis poles");
  if (!sys.shaping.is_proper())
    throw std::invalid_argument("shaping filter C_s must be proper");
}

}  // namespace rls
