#pragma once

// Fixed-step simulation of the reset feedback loop
//
//   e = r - n - y,  e_s = C_s e,  v = R(e) with jumps at zero crossings of e_s,
//   u = C_alpha (pre_gain v),  y = P (u + d)
//
// Between resets the whole loop is linear, so it is propagated exactly with a
// first-order hold on the exogenous inputs.

#include <optional>
#include <string>
#include <vector>

#include "rls/lti.hpp"
#include "rls/reset_element.hpp"
#include "rls/signals.hpp"

namespace rls {

struct LoopConfig {
  /// Absent for a linear loop, in which case C_alpha is driven by e directly.
  std::optional<GeneralizedFore> reset;
  /// false keeps the reset state but never applies the jump (base-linear loop).
  bool reset_enabled = true;
  double pre_gain = 1.0;
  RationalTransferFunction shaping = RationalTransferFunction::unity();
  RationalTransferFunction c_alpha = RationalTransferFunction::unity();
  RationalTransferFunction plant = RationalTransferFunction::unity();
  /// Negative unity feedback; false drives the controller with e = r - n.
  bool feedback = true;

  Signal r = zero_signal();
  Signal d = zero_signal();  // added at the plant input
  Signal n = zero_signal();  // added to the measured output

  double step = 1e-5;
  double duration = 1.0;
  int record_stride = 1;

  /// Uniform quantization of the measured output (e.g. 1e-7 m).
  std::optional<double> quantizer;
  /// Symmetric clamp on the controller output u.
  std::optional<double> clamp;

  double divergence_limit = 1e12;
  int max_events_per_step = 8;
};

struct SimTrace {
  std::vector<double> t, r, e, es, v, u, d, n, y;
  std::vector<char> reset;             // 1 when a reset fell in the step ending here
  std::vector<double> reset_instants;  // exact event times
  int chatter_steps = 0;
  std::vector<std::string> warnings;
  double step = 0.0;  // spacing of recorded samples

  std::size_t size() const { return t.size(); }
};

/// Runs the loop. Throws DivergenceError when a state exceeds the
/// divergence limit and std::invalid_argument for ill-posed loops.
SimTrace simulate(const LoopConfig& cfg);

}  // namespace rls
