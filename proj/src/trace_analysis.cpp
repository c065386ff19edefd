#include "rls/trace_analysis.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rls/errors.hpp"

namespace rls {

TransientMetrics step_metrics(const SimTrace& trace, double step_size) {
  if (step_size == 0.0) throw std::invalid_argument("step size must be nonzero");
  if (trace.size() < 2) throw WindowError("trace is too short");
  TransientMetrics m;
  const double sgn = step_size > 0.0 ? 1.0 : -1.0;
  const double a = std::abs(step_size);

  double peak = -std::numeric_limits<double>::infinity();
  for (double y : trace.y) peak = std::max(peak, sgn * y);
  m.overshoot = std::max(0.0, (peak - a) / a * 100.0);

  const double band = 0.02 * a;
  std::size_t last_out = trace.size();
  for (std::size_t i = trace.size(); i-- > 0;) {
    if (std::abs(trace.y[i] - step_size) > band) {
      last_out = i;
      break;
    }
  }
  if (last_out == trace.size()) {
    m.settling_time = trace.t.front();
  } else if (last_out + 1 == trace.size()) {
    m.settled = false;
    m.settling_time = trace.t.back();
  } else {
    m.settling_time = trace.t[last_out + 1];
  }

  const double t_end = trace.t.back();
  const double t_from = t_end - 0.2 * (t_end - trace.t.front());
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (trace.t[i] >= t_from)
      m.steady_state_error_inf = std::max(m.steady_state_error_inf, std::abs(trace.e[i]));
  return m;
}

namespace {

std::size_t first_retained(const SimTrace& trace, double discard_fraction) {
  if (!(discard_fraction >= 0.0 && discard_fraction < 1.0))
    throw std::invalid_argument("discard fraction must lie in [0, 1)");
  const double t0 = trace.t.front();
  const double t_cut = t0 + discard_fraction * (trace.t.back() - t0);
  std::size_t i = 0;
  while (i < trace.size() && trace.t[i] < t_cut - 1e-12) ++i;
  return i;
}

}  // namespace

double steady_state_error(const SimTrace& trace, double discard_fraction,
                          double base_freq_hz) {
  if (trace.size() < 2) throw WindowError("trace is too short");
  if (!(base_freq_hz > 0.0)) throw std::invalid_argument("base frequency must be positive");
  const std::size_t first = first_retained(trace, discard_fraction);
  const double span = trace.t.back() - trace.t[first];
  if (span * base_freq_hz < 10.0 - 1e-9) {
    std::ostringstream os;
    os << "retained window holds " << span * base_freq_hz
       << " periods, at least 10 are required";
    throw WindowError(os.str());
  }
  double worst = 0.0;
  for (std::size_t i = first; i < trace.size(); ++i)
    worst = std::max(worst, std::abs(trace.e[i]));
  return worst;
}

Complex phasor(const std::vector<double>& t, const std::vector<double>& x,
               double omega, std::size_t first, std::size_t last) {
  Complex acc{0.0, 0.0};
  for (std::size_t i = first; i < last; ++i)
    acc += x[i] * std::polar(1.0, -omega * t[i]);
  return Complex{0.0, 2.0} * acc / static_cast<double>(last - first);
}

std::vector<Complex> extract_harmonics(const SimTrace& trace, double base_omega,
                                       const std::vector<int>& orders,
                                       double discard_fraction) {
  if (discard_fraction < 0.5)
    throw WindowError("at least half of the trace must be discarded");
  if (!(base_omega > 0.0)) throw std::invalid_argument("base frequency must be positive");
  if (trace.size() < 2) throw WindowError("trace is too short");
  const double dt = trace.t[1] - trace.t[0];
  const double per = 2.0 * std::acos(-1.0) / base_omega / dt;
  const double per_round = std::round(per);
  if (per_round < 1.0 || std::abs(per - per_round) > 1e-6 * per) {
    std::ostringstream os;
    os << "a period spans " << per << " samples, which is not an integer";
    throw WindowError(os.str());
  }
  const auto n_per = static_cast<std::size_t>(per_round);
  const std::size_t first = first_retained(trace, discard_fraction);
  const std::size_t avail = trace.size() - first;
  const std::size_t periods = avail / n_per;
  if (periods == 0) throw WindowError("no whole period fits in the retained window");
  const std::size_t start = trace.size() - periods * n_per;

  const Complex e1 = phasor(trace.t, trace.e, base_omega, start, trace.size());
  if (std::abs(e1) == 0.0) throw WindowError("input has no component at the base frequency");
  std::vector<Complex> out;
  out.reserve(orders.size());
  for (int n : orders) {
    if (n < 1) throw std::invalid_argument("harmonic order must be >= 1");
    out.push_back(phasor(trace.t, trace.v, n * base_omega, start, trace.size()) / e1);
  }
  return out;
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RESET_LOOPSHAPER_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

}  // namespace rls
