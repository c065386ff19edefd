#include "rls/hosidf.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "rls/angles.hpp"
#include "rls/errors.hpp"
#include "rls/shaping_bounds.hpp"

namespace rls {

namespace {

constexpr Complex kJ{0.0, 1.0};

double to_db(Complex v) { return 20.0 * std::log10(std::abs(v)); }

}  // namespace

HosidfIntermediates hosidf_intermediates(const GeneralizedFore& el,
                                         double cs_phase, double omega) {
  if (!(omega > 0.0)) throw std::invalid_argument("frequency must be positive");
  HosidfIntermediates out;
  out.lambda = omega * omega + el.omega_alpha * el.omega_alpha;
  out.theta = std::exp(-kPi * el.omega_alpha / omega);
  out.omega_gain = (1.0 - el.gamma) * (1.0 + out.theta) /
                   (1.0 + el.gamma * out.theta);
  out.alpha = std::polar(1.0, cs_phase) *
              (omega * std::cos(cs_phase) + el.omega_alpha * std::sin(cs_phase));
  out.psi = 2.0 * kJ * omega * out.omega_gain * out.alpha / (kPi * out.lambda);
  return out;
}

Complex hosidf(const GeneralizedFore& el, double cs_phase, int n,
               double omega) {
  if (n < 1) throw std::invalid_argument("harmonic order must be >= 1");
  if (!(omega > 0.0)) throw std::invalid_argument("frequency must be positive");
  if (n % 2 == 0) return {0.0, 0.0};
  const auto im = hosidf_intermediates(el, cs_phase, omega);
  if (n == 1) return (im.psi + 1.0) * el.omega_beta / (el.omega_alpha + kJ * omega);
  return im.psi * el.omega_beta / (el.omega_alpha + kJ * (n * omega)) *
         std::polar(1.0, (n - 1) * cs_phase);
}

Complex open_loop_harmonic(const ShapedOpenLoop& sys, int n, double omega) {
  if (n % 2 == 0) return {0.0, 0.0};
  const double cs_phase = phase(sys.shaping, omega);
  const double nw = n * omega;
  return sys.pre_gain * hosidf(sys.reset, cs_phase, n, omega) *
         eval_response(sys.c_alpha, nw) * eval_response(sys.plant, nw);
}

const std::vector<Complex>& HarmonicSpectrum::at_order(int n) const {
  for (std::size_t i = 0; i < orders.size(); ++i)
    if (orders[i] == n) return values[i];
  std::ostringstream os;
  os << "order " << n << " is not stored in this spectrum";
  throw std::out_of_range(os.str());
}

namespace {

HarmonicSpectrum make_spectrum(const FrequencyGrid& grid,
                               const std::vector<int>& orders,
                               const std::function<Complex(int, double)>& f) {
  HarmonicSpectrum out;
  out.grid = grid.points();
  for (int n : orders) {
    if (n < 1) throw std::invalid_argument("harmonic order must be >= 1");
    if (n % 2 == 0) continue;
    out.orders.push_back(n);
    std::vector<Complex> row;
    row.reserve(grid.size());
    for (double w : grid) row.push_back(f(n, w));
    out.values.push_back(std::move(row));
  }
  return out;
}

}  // namespace

HarmonicSpectrum controller_spectrum(const ShapedOpenLoop& sys,
                                     const FrequencyGrid& grid,
                                     const std::vector<int>& orders) {
  return make_spectrum(grid, orders, [&](int n, double w) {
    return hosidf(sys.reset, phase(sys.shaping, w), n, w);
  });
}

HarmonicSpectrum open_loop_spectrum(const ShapedOpenLoop& sys,
                                    const FrequencyGrid& grid,
                                    const std::vector<int>& orders) {
  return make_spectrum(grid, orders, [&](int n, double w) {
    return open_loop_harmonic(sys, n, w);
  });
}

BandwidthReport find_crossover(const std::function<Complex(double)>& loop,
                               double w_lo, double w_hi) {
  if (!(w_lo > 0.0) || !(w_hi > w_lo))
    throw std::invalid_argument("bandwidth bracket must satisfy 0 < lo < hi");
  const auto grid = FrequencyGrid::logspace(w_lo, w_hi, 200);
  std::vector<double> db(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) db[i] = to_db(loop(grid[i]));

  std::vector<std::size_t> crossings;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if ((db[i] > 0.0) != (db[i + 1] > 0.0)) crossings.push_back(i);
  if (crossings.empty()) {
    std::ostringstream os;
    os << "|L_1| does not cross 0 dB between " << w_lo << " and " << w_hi
       << " rad/s";
    throw BracketError(os.str());
  }

  const std::size_t i = crossings.front();
  double lo = grid[i];
  double hi = grid[i + 1];
  const bool lo_above = db[i] > 0.0;
  while ((hi - lo) > 1e-9 * lo) {
    const double mid = std::sqrt(lo * hi);
    if ((to_db(loop(mid)) > 0.0) == lo_above) lo = mid;
    else hi = mid;
  }
  BandwidthReport report;
  report.omega_c = std::sqrt(lo * hi);
  const Complex l1 = loop(report.omega_c);
  report.gain_db = to_db(l1);
  report.phase_margin = deg(principal(std::arg(l1))) + 180.0;
  report.multiple_crossings = crossings.size() > 1;
  return report;
}

BandwidthReport find_bandwidth(const ShapedOpenLoop& sys, double w_lo,
                               double w_hi) {
  return find_crossover(
      [&](double w) { return open_loop_harmonic(sys, 1, w); }, w_lo, w_hi);
}

BandwidthReport find_bandwidth(const RationalTransferFunction& loop,
                               double w_lo, double w_hi) {
  return find_crossover([&](double w) { return eval_response(loop, w); },
                        w_lo, w_hi);
}

double phase_at_bandwidth(const GeneralizedFore& el, double cs_phase,
                          double omega_c) {
  return principal(std::arg(hosidf(el, cs_phase, 1, omega_c)));
}

double phase_at_bandwidth_closed_form(const GeneralizedFore& el,
                                      double cs_phase, double omega_c) {
  const auto im = hosidf_intermediates(el, cs_phase, omega_c);
  if (el.omega_alpha == 0.0) {
    const double k = kPi * (1.0 + el.gamma) / (2.0 * (1.0 - el.gamma));
    return std::atan((std::sin(2.0 * cs_phase) - k) /
                     (std::cos(2.0 * cs_phase) + 1.0));
  }
  const double kappa_zeta = omega_c * im.omega_gain / (kPi * im.lambda);
  const double kappa_gamma = omega_c * std::cos(2.0 * cs_phase) +
                             el.omega_alpha * std::sin(2.0 * cs_phase) + omega_c;
  const double phi_alpha =
      std::atan(1.0 / (1.0 / (kappa_gamma * kappa_zeta) - std::tan(cs_phase)));
  return phi_alpha - std::atan(omega_c / el.omega_alpha);
}

double unshaped_phase_closed_form(const GeneralizedFore& el, double omega_c) {
  if (el.omega_alpha == 0.0)
    return std::atan(-kPi * (1.0 + el.gamma) / (4.0 * (1.0 - el.gamma)));
  const auto im = hosidf_intermediates(el, 0.0, omega_c);
  const double kappa_zeta = omega_c * im.omega_gain / (kPi * im.lambda);
  return std::atan(2.0 * omega_c * kappa_zeta) -
         std::atan(omega_c / el.omega_alpha);
}

double phase_lead(const GeneralizedFore& el, double cs_phase, double omega_c) {
  const double shaped = phase_at_bandwidth(el, cs_phase, omega_c);
  const double unshaped = phase_at_bandwidth(el, 0.0, omega_c);
  return deg(principal(shaped - unshaped));
}

MaxPhaseLead max_phase_lead(const GeneralizedFore& el, double omega_c) {
  const double upper = lemma1_upper_bound(el, omega_c);
  MaxPhaseLead out;
  out.max_cs_phase = deg(upper);
  out.lead_at_max_cs_phase = phase_lead(el, upper, omega_c);

  // Coarse scan then golden-section refinement of the interior maximum.
  constexpr int kScan = 2000;
  double best_x = 0.0;
  double best_v = 0.0;
  for (int i = 1; i <= kScan; ++i) {
    const double x = upper * i / kScan;
    const double v = phase_lead(el, x, omega_c);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  double a = std::max(0.0, best_x - upper / kScan);
  double b = std::min(upper, best_x + upper / kScan);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 100 && (b - a) > 1e-13; ++it) {
    const double c = b - g * (b - a);
    const double d = a + g * (b - a);
    if (phase_lead(el, c, omega_c) > phase_lead(el, d, omega_c)) b = d;
    else a = c;
  }
  const double x = 0.5 * (a + b);
  const double v = phase_lead(el, x, omega_c);
  if (v > best_v) {
    best_v = v;
    best_x = x;
  }
  out.sup_lead = best_v;
  out.argmax_cs_phase = deg(best_x);
  return out;
}

}  // namespace rls
