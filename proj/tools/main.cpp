#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rls/workbench/commands.hpp"
#include "rls/workbench/config.hpp"
#include "rls/workbench/presets.hpp"

namespace {

using namespace rls::wb;

struct Source {
  std::string config;
  std::string preset;

  void attach(CLI::App* cmd) {
    auto* c = cmd->add_option("--config", config, "INI configuration file");
    auto* p = cmd->add_option("--preset", preset, "built-in case-study preset");
    c->excludes(p);
  }

  WorkbenchConfig load() const {
    if (!config.empty()) return load_config(config);
    if (!preset.empty()) return rls::wb::preset(preset);
    throw ConfigError("one of --config or --preset is required");
  }
};

std::vector<int> parse_orders(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("bad harmonic order list '" + text + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty harmonic order list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shaped reset control workbench"};
  app.require_subcommand(1);

  Source bode_src, bounds_src, design_src, sim_src;
  std::string bode_orders, bode_out, bode_sidecar;
  auto* bode = app.add_subcommand("bode", "first-harmonic and higher-order open-loop responses");
  bode_src.attach(bode);
  bode->add_option("--orders", bode_orders, "comma-separated harmonic orders");
  bode->add_option("--out", bode_out, "CSV output")->required();
  bode->add_option("--sidecar", bode_sidecar, "JSON bandwidth report (default: <out>.json)");

  std::optional<double> bounds_sigma;
  std::string bounds_out, bounds_summary;
  auto* bounds = app.add_subcommand("bounds", "shaping-filter phase bounds and verdicts");
  bounds_src.attach(bounds);
  bounds->add_option("--sigma", bounds_sigma, "gain band, overrides analysis.sigma");
  bounds->add_option("--out", bounds_out, "CSV output")->required();
  bounds->add_option("--summary", bounds_summary, "JSON summary (default: <out>.json)");

  std::optional<double> target;
  std::string design_mode = "lead", design_out;
  bool enforce_cap = false;
  auto* design = app.add_subcommand("design", "shaping-filter design procedures");
  design_src.attach(design);
  design->add_option("--target-lead", target, "target phase lead [deg]");
  design->add_option("--mode", design_mode, "lead or gain")->check(CLI::IsMember({"lead", "gain"}));
  design->add_flag("--enforce-gain-cap", enforce_cap, "keep |C_s| below delta_n");
  design->add_option("--out", design_out, "JSON output")->required();

  std::string input = "step:1e-5", trace_out, metrics_out;
  std::optional<double> sim_duration, sim_step;
  bool no_reset = false;
  auto* sim = app.add_subcommand("simulate", "closed-loop time-domain simulation");
  sim_src.attach(sim);
  sim->add_option("--input", input, "step:A, sin:A@f, zero, d1 or r2d2");
  sim->add_option("--out", trace_out, "trace CSV");
  sim->add_option("--metrics", metrics_out, "metrics JSON");
  sim->add_option("--duration", sim_duration, "simulated time [s]");
  sim->add_option("--step", sim_step, "integration step [s]");
  sim->add_flag("--no-reset", no_reset, "disable the reset jumps");

  std::string case_name, case_dir;
  auto* cs = app.add_subcommand("casestudy", "full pipeline for a case study");
  cs->add_option("--name", case_name, "case1 or case2")->required();
  cs->add_option("--out", case_dir, "output directory")->required();

  std::string preset_name;
  auto* show = app.add_subcommand("preset", "print a preset as INI");
  show->add_option("name", preset_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*bode) {
      const auto cfg = bode_src.load();
      const auto orders = bode_orders.empty() ? cfg.analysis.orders : parse_orders(bode_orders);
      const auto side = bode_sidecar.empty() ? sidecar_path(bode_out) : bode_sidecar;
      const auto j = run_bode(cfg, orders, bode_out, side);
      std::cout << j["bandwidth"].dump() << '\n';
    } else if (*bounds) {
      const auto cfg = bounds_src.load();
      const auto summary = bounds_summary.empty() ? sidecar_path(bounds_out) : bounds_summary;
      const auto j = run_bounds(cfg, bounds_sigma.value_or(cfg.analysis.sigma), bounds_out, summary);
      std::cout << "violations: " << j["report"]["violation_count"].dump()
                << ", bandwidth_ok: " << j["report"]["bandwidth_ok"].dump()
                << ", gain_cap: " << j["report"]["gain_cap"]["passes"].dump() << '\n';
    } else if (*design) {
      const auto cfg = design_src.load();
      const auto j = run_design(cfg, design_mode, target, enforce_cap, design_out);
      const auto& r = j["result"];
      if (design_mode == "lead")
        std::cout << "filter: " << r["filter"].dump()
                  << ", lead: " << r["achieved_lead_deg"].dump() << '\n';
      else
        std::cout << "final: " << r["final"].dump() << '\n';
    } else if (*sim) {
      auto cfg = sim_src.load();
      if (sim_duration) cfg.simulation.duration = *sim_duration;
      if (sim_step) cfg.simulation.step = *sim_step;
      if (no_reset) cfg.simulation.reset_enabled = false;
      const auto j = run_simulate(cfg, parse_input(input), trace_out, metrics_out);
      std::cout << j.dump() << '\n';
    } else if (*cs) {
      run_casestudy(case_name, case_dir);
      std::cout << "wrote " << case_dir << "/summary.json\n";
    } else if (*show) {
      std::cout << serialize_config(preset(preset_name));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 0;
}
