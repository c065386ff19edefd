#include "rls/signals.hpp"

#include <cmath>
#include <utility>

#include "rls/angles.hpp"

namespace rls {

Signal zero_signal() {
  return [](double) { return 0.0; };
}

Signal step_signal(double t0, double amplitude) {
  return [=](double t) { return t >= t0 ? amplitude : 0.0; };
}

Signal sinusoid(double amplitude, double freq_hz, double phase) {
  const double w = hz_to_rad(freq_hz);
  return [=](double t) { return amplitude * std::sin(w * t + phase); };
}

Signal multisine(std::vector<SineComponent> components) {
  return [c = std::move(components)](double t) {
    double acc = 0.0;
    for (const auto& s : c)
      acc += s.amplitude * std::sin(hz_to_rad(s.freq_hz) * t + s.phase);
    return acc;
  };
}

Signal sum(Signal a, Signal b) {
  return [a = std::move(a), b = std::move(b)](double t) { return a(t) + b(t); };
}

Signal disturbance_d1() {
  return multisine({{75.0e-8, 5.0, 0.0}, {7.5e-8, 10.0, 0.0}, {1.5e-8, 20.0, 0.0}});
}

Signal disturbance_d2() {
  return multisine({{19.1e-8, 1.0, 0.0}, {1.8e-8, 2.0, 0.0}, {3.3e-8, 8.0, 0.0}});
}

Signal reference_r2() { return sinusoid(7.5e-7, 5.0); }

}  // namespace rls
