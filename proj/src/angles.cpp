#include "rls/angles.hpp"

#include <cmath>

namespace rls {

double principal(double angle) {
  double a = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (a <= -kPi) a += 2.0 * kPi;
  return a;
}

std::vector<double> unwrap(std::span<const double> phases) {
  std::vector<double> out(phases.begin(), phases.end());
  double offset = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double jump = phases[i] - phases[i - 1];
    if (jump > kPi) offset -= 2.0 * kPi;
    else if (jump < -kPi) offset += 2.0 * kPi;
    out[i] = phases[i] + offset;
  }
  return out;
}

}  // namespace rls
