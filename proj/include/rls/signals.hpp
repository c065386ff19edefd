#pragma once

#include <functional>
#include <vector>

namespace rls {

/// Exogenous signal sampled at arbitrary times [s].
using Signal = std::function<double(double)>;

struct SineComponent {
  double amplitude = 0.0;
  double freq_hz = 0.0;
  double phase = 0.0;  // radians
};

Signal zero_signal();
/// A for t >= t0, zero before.
Signal step_signal(double t0, double amplitude);
/// A sin(2 pi f t + phase)
Signal sinusoid(double amplitude, double freq_hz, double phase = 0.0);
Signal multisine(std::vector<SineComponent> components);
Signal sum(Signal a, Signal b);

/// 1e-8 [75 sin(10 pi t) + 7.5 sin(20 pi t) + 1.5 sin(40 pi t)]
Signal disturbance_d1();
/// 1e-8 [19.1 sin(2 pi t) + 1.8 sin(4 pi t) + 3.3 sin(16 pi t)]
Signal disturbance_d2();
/// 7.5e-7 sin(10 pi t)
Signal reference_r2();

}  // namespace rls
