#pragma once

// The two shaping design procedures: place a first-order lead shaping filter
// for a target phase lead at the bandwidth, and trade that lead for
// low-frequency gain by retuning the reset element.

#include <vector>

#include "rls/lti.hpp"
#include "rls/reset_element.hpp"
#include "rls/shaping_bounds.hpp"

namespace rls {

struct ShapingFilterParams {
  double omega_zeta = 0.0;
  double omega_eta = 0.0;
  double omega_psi = 0.0;

  RationalTransferFunction tf() const {
    return make_shaping_filter(omega_zeta, omega_eta, omega_psi);
  }
};

struct DesignStep {
  ShapingFilterParams filter;
  double cs_phase_deg = 0.0;
  double lead_deg = 0.0;
};

struct GainTransferStep {
  double omega_r = 0.0;
  double gamma = 0.0;
  double k_r = 0.0;
  double low_gain_db = 0.0;
  double phase_margin = 0.0;
};

struct DesignResult {
  ShapingFilterParams filter;
  double target_lead = 0.0;    // degrees
  double achieved_lead = 0.0;  // degrees
  double omega_c = 0.0;        // rad/s, where the lead is measured
  double cs_phase_at_wc = 0.0; // degrees
  int iterations = 0;
  bool converged = false;
  std::vector<BoundViolation> bound_violations;
  bool bandwidth_ok = false;
  GainCapReport gain_cap;
  std::vector<DesignStep> trail;

  // Gain-transfer mode.
  bool unchanged = false;
  GeneralizedFore start_element;
  GeneralizedFore element;
  double start_k_r = 0.0;
  double k_r = 0.0;
  double start_bandwidth_hz = 0.0;
  double bandwidth_hz = 0.0;
  double start_phase_margin = 0.0;
  double phase_margin = 0.0;
  double reference_phase_margin = 0.0;
  double start_low_gain_db = 0.0;  // mean |L_1| over [0.05, 0.5] w_c
  double low_gain_db = 0.0;
  double start_gain_at_02wc_db = 0.0;
  double gain_at_02wc_db = 0.0;
  std::vector<GainTransferStep> gain_trail;
};

struct DesignOptions {
  double sigma = 0.1;
  double delta_n = 1.5;
  /// When set, w_psi is chosen as the largest value that keeps |C_s| below
  /// delta_n and targets beyond the capped reach are infeasible. Otherwise
  /// w_psi = 10 w_eta and the cap is only reported.
  bool enforce_gain_cap = false;
  double bandwidth_lo = 1.0;   // rad/s
  double bandwidth_hi = 1e5;   // rad/s
  FrequencyGrid grid = default_analysis_grid();
};

/// Finds C_s giving phase lead `target_lead_deg` at the bandwidth of the
/// unshaped system. Throws InfeasibleTargetError when the target exceeds the
/// largest lead the element can deliver there.
DesignResult design_phase_lead(const ShapedOpenLoop& sys, double target_lead_deg,
                               const DesignOptions& options = {});

/// Monotone coordinate descent on (w_r, gamma) of a shaped FORE (gamma only
/// for a Clegg integrator, w_r kept within a factor two of its start) that
/// raises the mean first-harmonic gain over
/// [0.05, 0.5] w_c while holding the mean gain over [2, 10] w_c through k_r
/// (sys.pre_gain), and keeps the phase margin at or above that of the
/// unshaped starting loop. Returns the start flagged unchanged when the
/// starting lead is not positive.
DesignResult design_gain_transfer(const ShapedOpenLoop& sys,
                                  const DesignOptions& options = {});

}  // namespace rls
