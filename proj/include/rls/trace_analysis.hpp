#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

#include "rls/hybrid_sim.hpp"
#include "rls/lti.hpp"

namespace rls {

struct TransientMetrics {
  double overshoot = 0.0;        // percent of the step size
  double settling_time = 0.0;    // seconds to stay within 2 %
  double steady_state_error_inf = 0.0;  // max |e| over the final 20 %
  bool settled = true;
};

/// Requires a trace driven by a step of size `step_size` (nonzero).
TransientMetrics step_metrics(const SimTrace& trace, double step_size);

/// max |e| over the retained part of the trace after dropping the leading
/// `discard_fraction`. Throws WindowError when fewer than ten periods of
/// `base_freq_hz` remain.
double steady_state_error(const SimTrace& trace, double discard_fraction,
                          double base_freq_hz);

/// Phasors of v at n * base_omega divided by the phasor of e at base_omega,
/// over the largest whole number of periods inside the retained window.
/// Throws WindowError when less than half the trace is discarded, when a
/// period is not an integer number of samples or when no period fits.
std::vector<Complex> extract_harmonics(const SimTrace& trace, double base_omega,
                                       const std::vector<int>& orders,
                                       double discard_fraction = 0.5);

/// Phasor (2j/N) sum x_k exp(-j w t_k) of one recorded channel over samples
/// [first, last).
Complex phasor(const std::vector<double>& t, const std::vector<double>& x,
               double omega, std::size_t first, std::size_t last);

/// Worker count: hardware concurrency capped by RESET_LOOPSHAPER_THREADS.
unsigned worker_count();

/// Applies f to every index in [0, count) on up to worker_count() threads.
/// Results keep index order.
template <class T>
std::vector<T> parallel_map(std::size_t count,
                            const std::function<T(std::size_t)>& f) {
  std::vector<T> out(count);
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(worker_count(), count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = f(i);
    return out;
  }
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          out[i] = f(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace rls
