#include "rls/shaping_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rls/angles.hpp"
#include "rls/hosidf.hpp"

namespace rls {

bool AngleInterval::contains(double angle) const {
  const double t = principal(angle);
  if (t > lo && t < hi) return true;
  if (lo_closed && (t == lo || (lo == -kPi && t == kPi))) return true;
  if (hi_closed && t == hi) return true;
  return false;
}

double AngleInterval::distance(double angle) const {
  return std::min(std::abs(principal(angle - lo)), std::abs(principal(angle - hi)));
}

bool contains(const IntervalSet& set, double angle) {
  return std::any_of(set.begin(), set.end(),
                     [&](const AngleInterval& i) { return i.contains(angle); });
}

IntervalSet wrap_interval(double lo, double hi, bool lo_closed, bool hi_closed) {
  if (hi < lo) return {};
  const double width = hi - lo;
  if (width >= 2.0 * kPi) return {{-kPi, kPi, true, true}};
  const double plo = principal(lo);
  const double phi = plo + width;
  if (phi <= kPi) return {{plo, phi, lo_closed, hi_closed}};
  IntervalSet out;
  if (plo < kPi || lo_closed) out.push_back({plo, kPi, lo_closed, true});
  out.push_back({-kPi, phi - 2.0 * kPi, true, hi_closed});
  return out;
}

double lemma1_upper_bound(const GeneralizedFore& el, double omega_c) {
  if (!(omega_c > 0.0)) throw std::invalid_argument("w_c must be positive");
  if (el.omega_alpha == 0.0)
    return kPi / 2.0 -
           std::atan(kPi * (1.0 + el.gamma) / (4.0 * (1.0 - el.gamma)));
  return kPi / 2.0 - std::atan(omega_c / el.omega_alpha);
}

IntervalSet lemma1_interval(const GeneralizedFore& el, double omega_c) {
  const double u = lemma1_upper_bound(el, omega_c);
  return {{0.0, u, false, false}, {-kPi, u - kPi, false, false}};
}

namespace {

void check_sigma(double sigma) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    std::ostringstream os;
    os << "sigma must lie in (0, 1), got " << sigma;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

EtaBounds theorem1_bounds(double sigma) {
  check_sigma(sigma);
  const double a = std::acos(1.0 - sigma);
  const double b = std::acos(-1.0 + sigma);
  EtaBounds out;
  out.eta1 = {-a, a, false, false};
  out.eta2 = {b, kPi, false, true};
  out.eta3 = {-kPi, -b, true, false};
  return out;
}

IntervalSet BetaBounds::all() const {
  IntervalSet out;
  for (const auto* s : {&beta1, &beta2, &beta3, &beta4})
    out.insert(out.end(), s->begin(), s->end());
  return out;
}

BetaBounds theorem2_bounds(const GeneralizedFore& el, double sigma,
                           double omega) {
  check_sigma(sigma);
  if (!(omega > 0.0)) throw std::invalid_argument("frequency must be positive");
  BetaBounds out;
  out.theta_alpha = el.omega_alpha / omega;
  const double scale = std::sqrt(1.0 + out.theta_alpha * out.theta_alpha);
  out.theta_gamma = (1.0 - sigma) / scale;
  out.theta_eta = (1.0 + sigma) / scale;
  if (out.theta_gamma > 1.0) {
    out.empty = true;
    return out;
  }
  const double a = std::atan(out.theta_alpha);
  const double acos_gamma = std::acos(out.theta_gamma);
  out.saturated = out.theta_eta > 1.0;
  const double acos_eta = out.saturated ? 0.0 : std::acos(out.theta_eta);
  const bool inner_closed = out.saturated;

  out.beta1_lo = a - acos_gamma;
  out.beta1_hi = a - acos_eta;
  out.beta4_lo = a + acos_eta;
  out.beta4_hi = a + acos_gamma;

  out.beta1 = wrap_interval(out.beta1_lo, out.beta1_hi, false, inner_closed);
  out.beta4 = wrap_interval(out.beta4_lo, out.beta4_hi, inner_closed, false);
  out.beta3 = wrap_interval(out.beta1_lo + kPi, out.beta1_hi + kPi, false,
                            inner_closed);
  out.beta2 = wrap_interval(out.beta4_lo - kPi, out.beta4_hi - kPi,
                            inner_closed, false);
  return out;
}

IntervalSet off_bandwidth_bounds(const GeneralizedFore& el, double sigma,
                                 double omega, bool* saturated) {
  if (el.omega_alpha == 0.0) {
    if (saturated) *saturated = false;
    return theorem1_bounds(sigma).all();
  }
  const auto b = theorem2_bounds(el, sigma, omega);
  if (saturated) *saturated = b.saturated;
  return b.all();
}

double kappa_alpha(const GeneralizedFore& el, double cs_phase, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("frequency must be positive");
  return std::abs(std::cos(cs_phase) +
                  std::sin(cs_phase) * el.omega_alpha / omega);
}

double kappa_alpha_rewritten(const GeneralizedFore& el, double cs_phase,
                             double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("frequency must be positive");
  const double t = el.omega_alpha / omega;
  return std::sqrt(1.0 + t * t) * std::abs(std::cos(cs_phase - std::atan(t)));
}

Complex delta_alpha(const GeneralizedFore& el, double cs_phase, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("frequency must be positive");
  return std::polar(1.0, cs_phase) *
         (std::cos(cs_phase) + el.omega_alpha / omega * std::sin(cs_phase));
}

PhaseBoundSet build_phase_bound_set(const GeneralizedFore& el, double sigma,
                                    double omega_c, const FrequencyGrid& grid) {
  check_sigma(sigma);
  PhaseBoundSet out;
  out.element = el;
  out.sigma = sigma;
  out.omega_c = omega_c;
  out.at_bandwidth = lemma1_interval(el, omega_c);
  out.grid = grid.points();
  out.off_bandwidth.reserve(grid.size());
  out.saturated.reserve(grid.size());
  for (double w : grid) {
    bool sat = false;
    out.off_bandwidth.push_back(off_bandwidth_bounds(el, sigma, w, &sat));
    out.saturated.push_back(sat);
  }
  return out;
}

FrequencyGrid default_analysis_grid() {
  return FrequencyGrid::logspace(hz_to_rad(1.0), hz_to_rad(1000.0), 200);
}

FilterCheckReport validate_filter(const ShapedOpenLoop& sys, double sigma,
                                  const FrequencyGrid& grid, double delta_n,
                                  std::optional<double> omega_c) {
  FilterCheckReport out;
  out.omega_c = omega_c
                    ? *omega_c
                    : find_bandwidth(sys, grid.points().front(),
                                     grid.points().back())
                          .omega_c;
  const auto set = build_phase_bound_set(sys.reset, sigma, out.omega_c, grid);
  out.at_bandwidth = set.at_bandwidth;
  out.cs_phase_at_wc = phase(sys.shaping, out.omega_c);
  out.bandwidth_ok = contains(out.at_bandwidth, out.cs_phase_at_wc);

  for (std::size_t i = 0; i < grid.size(); ++i) {
    BoundRow row;
    row.omega = grid[i];
    row.cs_phase = phase(sys.shaping, row.omega);
    row.kappa = kappa_alpha(sys.reset, row.cs_phase, row.omega);
    row.bounds = set.off_bandwidth[i];
    row.saturated = set.saturated[i];
    row.in_bounds = contains(row.bounds, row.cs_phase);
    if (row.saturated) ++out.saturated_points;
    if (!row.in_bounds) {
      BoundViolation v;
      v.omega = row.omega;
      v.angle = row.cs_phase;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& iv : row.bounds) {
        const double d = iv.distance(row.cs_phase);
        if (d < best) {
          best = d;
          v.nearest = iv;
        }
      }
      out.violations.push_back(v);
    }
    out.rows.push_back(std::move(row));
  }
  out.gain_cap = check_gain_cap(sys.shaping, out.omega_c, delta_n);
  return out;
}

std::string describe(const AngleInterval& interval) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << (interval.lo_closed ? '[' : '(')
     << deg(interval.lo) << ", " << deg(interval.hi)
     << (interval.hi_closed ? ']' : ')');
  return os.str();
}

}  // namespace rls
