#pragma once

#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "rls/signals.hpp"
#include "rls/workbench/config.hpp"
#include "rls/workbench/emit.hpp"

namespace rls::wb {

/// Exogenous inputs named on the command line:
///   step:A   sin:A@f   zero   d1   r2d2
struct InputSpec {
  std::string text;
  Signal r = zero_signal();
  Signal d = zero_signal();
  Signal n = zero_signal();
  bool is_step = false;
  double step_size = 0.0;
  std::optional<double> base_freq_hz;  // periodic inputs
};

InputSpec parse_input(const std::string& text);

/// Discarded lead-in of periodic runs is at least this long [s].
inline constexpr double kSettleTime = 0.5;

/// Duration holding a whole number of periods with at least ten of them
/// left after discarding the leading fraction, and a discarded part of at
/// least kSettleTime.
double periodic_duration(double base_freq_hz, double discard_fraction,
                         double at_least);

/// `out` with its extension replaced by .json
std::string sidecar_path(const std::string& out);

Json run_bode(const WorkbenchConfig& cfg, const std::vector<int>& orders,
              const std::string& out_csv, const std::string& sidecar);
Json run_bounds(const WorkbenchConfig& cfg, double sigma,
                const std::string& out_csv, const std::string& summary);
Json run_design(const WorkbenchConfig& cfg, const std::string& mode,
                std::optional<double> target_lead, bool enforce_gain_cap,
                const std::string& out);
Json run_simulate(const WorkbenchConfig& cfg, const InputSpec& input,
                  const std::string& trace_csv, const std::string& metrics);
Json run_casestudy(const std::string& name, const std::string& dir);

/// 2 configuration, 3 bandwidth bracket, 4 infeasible target, 5 divergence,
/// 1 anything else.
int exit_code_for(const std::exception& e);

}  // namespace rls::wb
