#pragma once

#include <numbers>
#include <span>
#include <vector>

namespace rls {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg(double rad) { return rad * 180.0 / kPi; }
constexpr double rad(double deg) { return deg * kPi / 180.0; }

constexpr double hz_to_rad(double hz) { return 2.0 * kPi * hz; }
constexpr double rad_to_hz(double w) { return w / (2.0 * kPi); }

/// Wraps an angle into the principal range (-pi, pi].
double principal(double angle);

/// Unwraps a sequence of principal phases. Plotting output only; the analysis
/// code works on principal values throughout.
std::vector<double> unwrap(std::span<const double> phases);

}  // namespace rls
