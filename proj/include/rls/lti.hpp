#pragma once

// Continuous-time SISO rational transfer functions, their state-space
// realizations and the LTI building blocks used by the controller assemblies.

#include <complex>
#include <vector>

#include <Eigen/Core>

namespace rls {

using Complex = std::complex<double>;

/// Dense polynomial in s, coefficients in ascending powers.
using Polynomial = std::vector<double>;

Complex evaluate(const Polynomial& p, Complex s);
Polynomial multiply(const Polynomial& a, const Polynomial& b);

/// num(s)/den(s) with ascending coefficients. Trailing (highest-order) zero
/// coefficients are trimmed on construction; the denominator must keep a
/// nonzero leading coefficient and every coefficient must be finite.
class RationalTransferFunction {
 public:
  RationalTransferFunction(Polynomial num, Polynomial den);

  static RationalTransferFunction unity() { return {{1.0}, {1.0}}; }
  static RationalTransferFunction gain(double k) { return {{k}, {1.0}}; }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }

  int num_degree() const { return static_cast<int>(num_.size()) - 1; }
  int den_degree() const { return static_cast<int>(den_.size()) - 1; }
  int relative_degree() const { return den_degree() - num_degree(); }
  bool is_proper() const { return relative_degree() >= 0; }
  bool is_strictly_proper() const { return relative_degree() > 0; }

  /// num(s)/den(s) at an arbitrary complex point.
  Complex operator()(Complex s) const;

  /// Roots of the denominator (companion-matrix eigenvalues).
  std::vector<Complex> poles() const;

 private:
  Polynomial num_;
  Polynomial den_;
};

/// Frequency response at omega [rad/s]. Throws PoleOnAxisError when the
/// denominator vanishes at j*omega.
Complex eval_response(const RationalTransferFunction& tf, double omega);

/// Principal phase in (-pi, pi] of the frequency response.
double phase(const RationalTransferFunction& tf, double omega);
double magnitude(const RationalTransferFunction& tf, double omega);

/// Polynomial product of numerators and denominators; no cancellation.
RationalTransferFunction series(const RationalTransferFunction& a,
                                const RationalTransferFunction& b);
RationalTransferFunction operator*(const RationalTransferFunction& a,
                                   const RationalTransferFunction& b);
RationalTransferFunction operator*(double k, const RationalTransferFunction& a);

/// All denominator roots strictly in the open left half-plane.
bool is_hurwitz(const RationalTransferFunction& tf);
/// No roots in the open right half-plane and only simple roots at the
/// origin (integrators). Roots elsewhere on the imaginary axis fail.
bool is_marginally_stable(const RationalTransferFunction& tf);

// ---------------------------------------------------------------------------
// Builders. Corner frequencies are in rad/s and must be strictly positive.
// ---------------------------------------------------------------------------

/// 1/s
RationalTransferFunction make_integrator();
/// (s + w_i)/s raised to `order`
RationalTransferFunction make_pi(double w_i, int order = 1);
/// (s/w_d + 1)/(s/w_t + 1)
RationalTransferFunction make_lead(double w_d, double w_t);
/// 1/(s/w_f + 1)
RationalTransferFunction make_lowpass(double w_f);
/// s + w_z (improper on its own; only meaningful in series with a lag)
RationalTransferFunction make_zero(double w_z);

/// k_p (s + w_i)/s (s/w_d + 1)/(s/w_t + 1)
RationalTransferFunction make_pid(double k_p, double w_i, double w_d,
                                  double w_t);
/// k_p ((s + w_i)/s)^2 (s/w_d + 1)/(s/w_t + 1) 1/(s/w_f + 1)
RationalTransferFunction make_pi2d(double k_p, double w_i, double w_d,
                                   double w_t, double w_f);

/// Phase-lead shaping filter (s/w_zeta + 1)/(s/w_eta + 1) * 1/(s/w_psi + 1).
/// Requires w_psi > w_eta.
RationalTransferFunction make_shaping_filter(double w_zeta, double w_eta,
                                             double w_psi);

/// 6.615e5 / (83.57 s^2 + 279.4 s + 5.837e5), the identified stage model.
RationalTransferFunction spider_stage_plant();

// ---------------------------------------------------------------------------

/// Strictly increasing list of positive angular frequencies [rad/s].
class FrequencyGrid {
 public:
  explicit FrequencyGrid(std::vector<double> points);

  /// Logarithmic grid from w_lo to w_hi (both included).
  static FrequencyGrid logspace(double w_lo, double w_hi,
                                int points_per_decade = 200);

  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  double operator[](std::size_t i) const { return points_[i]; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

 private:
  std::vector<double> points_;
};

/// A, B, C, D of a SISO realization.
struct StateSpaceRealization {
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::RowVectorXd C;
  double D = 0.0;

  int order() const { return static_cast<int>(A.rows()); }
  /// C (sI - A)^{-1} B + D
  Complex response(Complex s) const;
};

/// Controllable canonical realization. The transfer function must be proper.
StateSpaceRealization realize(const RationalTransferFunction& tf);

struct GainCapReport {
  bool passes = true;
  double worst_omega = 0.0;  // rad/s, where |C_s| peaks on the grid
  double worst_gain = 0.0;   // linear magnitude at worst_omega
};

/// Checks |C_s(w)| < delta_n on a log grid from w_c to 1000 w_c.
GainCapReport check_gain_cap(const RationalTransferFunction& cs, double w_c,
                             double delta_n);

}  // namespace rls
