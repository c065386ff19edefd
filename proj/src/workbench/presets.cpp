#include "rls/workbench/presets.hpp"

namespace rls::wb {

namespace {

constexpr const char* kCase1Topology =
    "reconstructed: k_r (s + w_r) CI(gamma) shaped by C_s, in series with "
    "k_p PI(w_i) lead(w_d, w_t) LPF(w_f)";
constexpr const char* kCase2Topology =
    "CgLp: k_r FORE(w_r, gamma) lead(w_dr, w_tr), in series with "
    "k_p PI(w_i) lead(w_d, w_t) LPF(w_f)";

WorkbenchConfig case1_base() {
  WorkbenchConfig c;
  c.pid.k_p = 13.1;
  c.pid.w_i = 50.3;
  c.pid.w_d = 213.6;
  c.pid.w_t = 1.2e3;
  c.pid.w_f = 5.0e3;
  c.simulation.duration = 0.3;
  return c;
}

WorkbenchConfig case2_base() {
  WorkbenchConfig c;
  c.pid.w_i = 31.4;
  c.pid.w_f = 3.1e3;
  c.simulation.duration = 0.3;
  return c;
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{
      "case1_pci_pid", "case1_shaped",  "case1_pi2d",
      "case2_pid",     "case2_cglp",    "case2_shaped_cglp"};
  return names;
}

WorkbenchConfig preset(const std::string& name) {
  if (name == "case1_pi2d") {
    auto c = case1_base();
    c.name = name;
    c.topology = "linear: k_p PI(w_i)^2 lead(w_d, w_t) LPF(w_f)";
    c.pid.integrators = 2;
    return c;
  }
  if (name == "case1_pci_pid" || name == "case1_shaped") {
    auto c = case1_base();
    c.name = name;
    c.topology = kCase1Topology;
    c.reset.element = "ci";
    c.reset.gamma = -0.3;
    c.reset.w_r = 1.6e3;
    c.reset.k_r = 0.12;
    if (name == "case1_shaped") {
      c.reset.k_r = 0.13;
      c.shaping.w_zeta = 950.0;
      c.shaping.w_eta = 3000.0;
      c.shaping.w_psi = 1.0e4;
    }
    return c;
  }
  if (name == "case2_pid") {
    auto c = case2_base();
    c.name = name;
    c.topology = "linear: k_p PI(w_i) lead(w_d, w_t) LPF(w_f)";
    c.pid.k_p = 3.0;
    c.pid.w_d = 81.9;
    c.pid.w_t = 1.2e3;
    return c;
  }
  if (name == "case2_cglp" || name == "case2_shaped_cglp") {
    auto c = case2_base();
    c.name = name;
    c.topology = kCase2Topology;
    c.reset.element = "fore";
    c.reset.w_dr = 336.8;
    c.reset.w_tr = 3.14e4;
    c.pid.k_p = 6.5;
    c.pid.w_d = 143.9;
    c.pid.w_t = 685.6;
    if (name == "case2_cglp") {
      c.reset.w_r = 160.2;
      c.reset.k_r = 1.0;
      c.reset.gamma = -0.3;
    } else {
      c.reset.w_r = 145.6;
      c.reset.k_r = 1.8;
      c.reset.gamma = 0.08;
      c.shaping.w_zeta = 950.0;
      c.shaping.w_eta = 2000.0;
      c.shaping.w_psi = 1.0e5;
    }
    return c;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> case_members(const std::string& case_name) {
  if (case_name == "case1") return {"case1_pi2d", "case1_pci_pid", "case1_shaped"};
  if (case_name == "case2") return {"case2_pid", "case2_cglp", "case2_shaped_cglp"};
  throw ConfigError("unknown case study '" + case_name + "', expected case1 or case2");
}

}  // namespace rls::wb
