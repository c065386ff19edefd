#pragma once

// Admissible phase sets for the shaping filter: the bandwidth interval that
// guarantees phase lead, and the off-bandwidth sets that keep the harmonic
// gains within a relative band sigma of the unshaped element.

#include <optional>
#include <string>
#include <vector>

#include "rls/lti.hpp"
#include "rls/reset_element.hpp"

namespace rls {

/// Interval of angles in radians, lo <= hi, both inside [-pi, pi].
struct AngleInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = false;
  bool hi_closed = false;

  /// Membership of a principal angle (the argument is wrapped first).
  bool contains(double angle) const;
  /// Angular distance from `angle` to the nearest endpoint.
  double distance(double angle) const;
};

using IntervalSet = std::vector<AngleInterval>;

bool contains(const IntervalSet& set, double angle);

/// Reduces an interval of width < 2 pi to principal values, splitting it at
/// +/- pi when it wraps. An empty interval (hi < lo) yields nothing.
IntervalSet wrap_interval(double lo, double hi, bool lo_closed, bool hi_closed);

/// pi/2 - atan(pi (1+gamma)/(4 (1-gamma))) for w_alpha = 0, otherwise
/// pi/2 - atan(w_c / w_alpha). Radians.
double lemma1_upper_bound(const GeneralizedFore& el, double omega_c);

/// The k = 0 and k = -1 branches: (0, U) and (-pi, U - pi).
IntervalSet lemma1_interval(const GeneralizedFore& el, double omega_c);

struct EtaBounds {
  AngleInterval eta1;  // (-acos(1-sigma), acos(1-sigma))
  AngleInterval eta2;  // (acos(-1+sigma), pi]
  AngleInterval eta3;  // [-pi, -acos(-1+sigma))

  IntervalSet all() const { return {eta1, eta2, eta3}; }
};

/// Off-bandwidth set for w_alpha = 0. Throws unless sigma is in (0, 1).
EtaBounds theorem1_bounds(double sigma);

struct BetaBounds {
  double theta_alpha = 0.0;  // w_alpha / w
  double theta_gamma = 0.0;  // (1 - sigma)/sqrt(1 + theta_alpha^2)
  double theta_eta = 0.0;    // (1 + sigma)/sqrt(1 + theta_alpha^2)
  /// theta_eta > 1: the acos(theta_eta) endpoints saturate at atan(theta_alpha)
  /// and become closed, since kappa_alpha cannot exceed 1 + sigma there.
  bool saturated = false;
  /// theta_gamma > 1: every family is empty.
  bool empty = false;

  // Unreduced endpoints in radians, beta3 = beta1 + pi, beta2 = beta4 - pi.
  double beta1_lo = 0.0, beta1_hi = 0.0;
  double beta4_lo = 0.0, beta4_hi = 0.0;

  IntervalSet beta1, beta2, beta3, beta4;  // principal, possibly split

  IntervalSet all() const;
};

/// Off-bandwidth set for w_alpha > 0 at frequency w.
BetaBounds theorem2_bounds(const GeneralizedFore& el, double sigma,
                           double omega);

/// Off-bandwidth admissible set at w for either element kind.
IntervalSet off_bandwidth_bounds(const GeneralizedFore& el, double sigma,
                                 double omega, bool* saturated = nullptr);

/// |cos phi_s + sin phi_s w_alpha / w|
double kappa_alpha(const GeneralizedFore& el, double cs_phase, double omega);
/// sqrt(1 + theta_alpha^2) |cos(phi_s - atan theta_alpha)|
double kappa_alpha_rewritten(const GeneralizedFore& el, double cs_phase,
                             double omega);
/// e^{j phi_s}[cos phi_s + (w_alpha / w) sin phi_s]; |.| equals kappa_alpha.
Complex delta_alpha(const GeneralizedFore& el, double cs_phase, double omega);

/// Bandwidth interval plus per-frequency off-bandwidth sets.
struct PhaseBoundSet {
  GeneralizedFore element;
  double sigma = 0.1;
  double omega_c = 0.0;
  IntervalSet at_bandwidth;
  std::vector<double> grid;
  std::vector<IntervalSet> off_bandwidth;
  std::vector<bool> saturated;
};

PhaseBoundSet build_phase_bound_set(const GeneralizedFore& el, double sigma,
                                    double omega_c, const FrequencyGrid& grid);

struct BoundViolation {
  double omega = 0.0;
  double angle = 0.0;          // radians
  AngleInterval nearest;
};

struct BoundRow {
  double omega = 0.0;
  double cs_phase = 0.0;  // radians
  double kappa = 0.0;
  bool in_bounds = false;
  bool saturated = false;
  IntervalSet bounds;
};

struct FilterCheckReport {
  double omega_c = 0.0;
  double cs_phase_at_wc = 0.0;
  IntervalSet at_bandwidth;
  bool bandwidth_ok = false;
  std::vector<BoundRow> rows;
  std::vector<BoundViolation> violations;
  GainCapReport gain_cap;
  int saturated_points = 0;

  /// Phase conditions only; the gain cap is reported separately.
  bool phase_ok() const { return bandwidth_ok && violations.empty(); }
};

/// Analysis range used when no grid is given: [1, 1000] Hz.
FrequencyGrid default_analysis_grid();

/// Checks arg C_s against the bandwidth interval at w_c and the off-bandwidth
/// sets on every grid point, and runs the |C_s| < delta_n cap above w_c.
/// When omega_c is not supplied it is the first-harmonic crossover of the
/// system searched over the grid range.
FilterCheckReport validate_filter(const ShapedOpenLoop& sys, double sigma,
                                  const FrequencyGrid& grid,
                                  double delta_n = 1.5,
                                  std::optional<double> omega_c = std::nullopt);

std::string describe(const AngleInterval& interval);  // degrees, with brackets

}  // namespace rls
