#pragma once

// Higher-order sinusoidal-input describing functions of the shaped
// generalized FORE, open-loop harmonic responses, bandwidth extraction and
// phase-lead bookkeeping.

#include <functional>
#include <vector>

#include "rls/lti.hpp"
#include "rls/reset_element.hpp"

namespace rls {

/// Default highest harmonic order considered in sweeps.
inline constexpr int kDefaultMaxOrder = 15;

struct HosidfIntermediates {
  double lambda = 0.0;   // w^2 + w_alpha^2
  double theta = 0.0;    // exp(-pi w_alpha / w), in (0, 1]
  double omega_gain = 0.0;  // (1 - gamma)(1 + theta)/(1 + gamma theta)
  Complex alpha;         // e^{j phi_s}(w cos phi_s + w_alpha sin phi_s)
  Complex psi;           // 2 j w Omega alpha / (pi Lambda)
};

HosidfIntermediates hosidf_intermediates(const GeneralizedFore& el,
                                         double cs_phase, double omega);

/// C_n(w) for the reset element whose trigger leads its input by cs_phase.
/// Even orders return exactly zero. Throws for w <= 0 or n < 1.
Complex hosidf(const GeneralizedFore& el, double cs_phase, int n, double omega);

/// L_n(w) = pre_gain C_n(w) C_alpha(n w) P(n w), with cs_phase = arg C_s(jw).
Complex open_loop_harmonic(const ShapedOpenLoop& sys, int n, double omega);

/// Odd-order values over a grid. Even orders are identically zero and are
/// not stored.
struct HarmonicSpectrum {
  std::vector<double> grid;
  std::vector<int> orders;
  std::vector<std::vector<Complex>> values;  // values[order index][grid index]

  const std::vector<Complex>& at_order(int n) const;
};

/// Controller spectrum C_n over the grid.
HarmonicSpectrum controller_spectrum(const ShapedOpenLoop& sys,
                                     const FrequencyGrid& grid,
                                     const std::vector<int>& orders);
/// Open-loop spectrum L_n over the grid.
HarmonicSpectrum open_loop_spectrum(const ShapedOpenLoop& sys,
                                    const FrequencyGrid& grid,
                                    const std::vector<int>& orders);

struct BandwidthReport {
  double omega_c = 0.0;       // rad/s
  double phase_margin = 0.0;  // degrees, principal arg L_1(w_c) + 180
  double gain_db = 0.0;       // |L_1(w_c)| in dB
  bool multiple_crossings = false;
};

/// Locates the lowest 0 dB crossing of an arbitrary first-harmonic loop
/// response inside [w_lo, w_hi] by bisection in log frequency to 1e-9
/// relative tolerance. Throws BracketError when no sign change exists.
BandwidthReport find_crossover(const std::function<Complex(double)>& loop,
                               double w_lo, double w_hi);

BandwidthReport find_bandwidth(const ShapedOpenLoop& sys, double w_lo,
                               double w_hi);
/// Linear loop L(s) = C(s) P(s).
BandwidthReport find_bandwidth(const RationalTransferFunction& loop,
                               double w_lo, double w_hi);

/// arg C_1(w_c) evaluated from the complex describing function
/// (quadrant-correct). Radians, principal.
double phase_at_bandwidth(const GeneralizedFore& el, double cs_phase,
                          double omega_c);

/// The closed-form arctangent expression (phi_lambda for w_alpha = 0,
/// phi_alpha - atan(w_c/w_alpha) otherwise). Single-argument arctangents make
/// it branch-ambiguous; it agrees with phase_at_bandwidth whenever
/// Re(1 + Psi) > 0. Kept as a cross-check.
double phase_at_bandwidth_closed_form(const GeneralizedFore& el,
                                      double cs_phase, double omega_c);

/// Unshaped first-harmonic phase, closed form. Radians.
double unshaped_phase_closed_form(const GeneralizedFore& el, double omega_c);

/// Phase lead of the shaped element over the unshaped one at w_c, degrees.
double phase_lead(const GeneralizedFore& el, double cs_phase, double omega_c);

struct MaxPhaseLead {
  double max_cs_phase = 0.0;         // degrees, upper end of the admissible interval
  double lead_at_max_cs_phase = 0.0; // degrees, lead evaluated at that endpoint
  double sup_lead = 0.0;             // degrees, largest lead over the interval
  double argmax_cs_phase = 0.0;      // degrees, shaping phase attaining sup_lead
};

/// Upper end of the admissible shaping phase at w_c together with the lead it
/// produces. The lead vanishes at the endpoint itself, so the supremum over
/// the open interval is located numerically as well.
MaxPhaseLead max_phase_lead(const GeneralizedFore& el, double omega_c);

}  // namespace rls
