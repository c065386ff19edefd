#pragma once

// INI configuration of a controller assembly, its plant and the analysis and
// simulation settings. Corner frequencies are rad/s, ranges are Hz.

#include <optional>
#include <string>
#include <vector>

#include "rls/errors.hpp"
#include "rls/hosidf.hpp"
#include "rls/hybrid_sim.hpp"
#include "rls/lti.hpp"
#include "rls/reset_element.hpp"

namespace rls::wb {

/// Malformed, incomplete or unknown configuration content.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ResetSection {
  std::string element = "none";  // ci | fore | none
  double k_r = 1.0;
  double gamma = 0.0;
  std::optional<double> w_r;
  std::optional<double> w_dr;
  std::optional<double> w_tr;
};

struct PidSection {
  double k_p = 1.0;
  int integrators = 1;
  std::optional<double> w_i;
  std::optional<double> w_d;
  std::optional<double> w_t;
  std::optional<double> w_f;
};

struct ShapingSection {
  std::optional<double> w_zeta;
  std::optional<double> w_eta;
  std::optional<double> w_psi;

  bool present() const { return w_zeta || w_eta || w_psi; }
};

struct PlantSection {
  std::string preset = "spider_stage";  // spider_stage | unity | custom
  std::vector<double> num;  // descending powers of s
  std::vector<double> den;
};

struct AnalysisSection {
  double f_min_hz = 1.0;
  double f_max_hz = 1000.0;
  int points_per_decade = 200;
  std::vector<int> orders{1, 3};
  double sigma = 0.1;
  double delta_n = 1.5;
  double bw_min_hz = 1.0;
  double bw_max_hz = 1000.0;
};

struct SimulationSection {
  double step = 1e-5;
  double duration = 0.3;
  int record_stride = 1;
  double discard_fraction = 0.5;
  bool reset_enabled = true;
  std::optional<double> quantizer;
  std::optional<double> clamp;
};

struct WorkbenchConfig {
  std::string name;
  std::string topology;  // free text recorded in emitted metadata
  ResetSection reset;
  PidSection pid;
  ShapingSection shaping;
  PlantSection plant;
  AnalysisSection analysis;
  SimulationSection simulation;
};

WorkbenchConfig parse_config(const std::string& text);
WorkbenchConfig load_config(const std::string& path);
std::string serialize_config(const WorkbenchConfig& cfg);

/// Analysis grid [f_min_hz, f_max_hz] converted to rad/s.
FrequencyGrid analysis_grid(const WorkbenchConfig& cfg);

/// The open loop described by a configuration. With a reset element the
/// first-harmonic and higher-order responses come from the describing
/// function; without one the loop is linear and only n = 1 is nonzero.
struct Assembly {
  std::optional<ShapedOpenLoop> shaped;
  RationalTransferFunction controller = RationalTransferFunction::unity();
  RationalTransferFunction plant = RationalTransferFunction::unity();

  bool has_reset() const { return shaped.has_value(); }
  Complex harmonic(int n, double omega) const;
  BandwidthReport bandwidth(double w_lo, double w_hi) const;
  /// Loop configuration with zero exogenous inputs.
  LoopConfig loop_config(const SimulationSection& sim) const;
};

Assembly assemble(const WorkbenchConfig& cfg);

}  // namespace rls::wb
