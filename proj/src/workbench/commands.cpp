#include "rls/workbench/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "rls/angles.hpp"
#include "rls/design.hpp"
#include "rls/errors.hpp"
#include "rls/hybrid_sim.hpp"
#include "rls/shaping_bounds.hpp"
#include "rls/trace_analysis.hpp"
#include "rls/workbench/presets.hpp"

namespace rls::wb {

namespace {

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(v))
    throw ConfigError("bad " + what + " '" + text + "'");
  return v;
}

std::string b(bool v) { return v ? "1" : "0"; }

Json meta(const WorkbenchConfig& cfg) {
  return {{"name", cfg.name}, {"topology", cfg.topology}};
}

double bw_lo(const WorkbenchConfig& cfg) { return hz_to_rad(cfg.analysis.bw_min_hz); }
double bw_hi(const WorkbenchConfig& cfg) { return hz_to_rad(cfg.analysis.bw_max_hz); }

const ShapedOpenLoop& require_reset(const Assembly& a, const char* command) {
  if (!a.shaped)
    throw ConfigError(std::string(command) + " needs a reset element in [reset]");
  return *a.shaped;
}

}  // namespace

InputSpec parse_input(const std::string& text) {
  InputSpec in;
  in.text = text;
  if (text == "zero") return in;
  if (text == "d1") {
    in.d = disturbance_d1();
    in.base_freq_hz = 5.0;
    return in;
  }
  if (text == "r2d2") {
    in.r = reference_r2();
    in.d = disturbance_d2();
    in.base_freq_hz = 1.0;
    return in;
  }
  if (text.rfind("step:", 0) == 0) {
    in.is_step = true;
    in.step_size = parse_number(text.substr(5), "step amplitude");
    in.r = step_signal(0.0, in.step_size);
    return in;
  }
  if (text.rfind("sin:", 0) == 0) {
    const auto at = text.find('@');
    if (at == std::string::npos) throw ConfigError("sinusoid input must read sin:A@f");
    const double a = parse_number(text.substr(4, at - 4), "sinusoid amplitude");
    const double f = parse_number(text.substr(at + 1), "sinusoid frequency");
    if (!(f > 0.0)) throw ConfigError("sinusoid frequency must be positive");
    in.r = sinusoid(a, f);
    in.base_freq_hz = f;
    return in;
  }
  throw ConfigError("unknown input '" + text + "'; use step:A, sin:A@f, zero, d1 or r2d2");
}

double periodic_duration(double base_freq_hz, double discard_fraction,
                         double at_least) {
  const double periods_needed = std::ceil(10.0 / (1.0 - discard_fraction)) + 2.0;
  const double settle = kSettleTime / std::max(discard_fraction, 1e-3);
  const double periods =
      std::max(periods_needed, std::ceil(std::max(at_least, settle) * base_freq_hz));
  return periods / base_freq_hz;
}

std::string sidecar_path(const std::string& out) {
  std::filesystem::path p(out);
  p.replace_extension(".json");
  return p.string();
}

Json run_bode(const WorkbenchConfig& cfg, const std::vector<int>& orders,
              const std::string& out_csv, const std::string& sidecar) {
  const auto a = assemble(cfg);
  const auto grid = analysis_grid(cfg);
  for (int n : orders)
    if (n < 1) throw ConfigError("harmonic orders must be positive");

  std::vector<std::string> header{"freq_hz"};
  for (int n : orders) {
    header.push_back("mag_db_n" + std::to_string(n));
    header.push_back("phase_deg_n" + std::to_string(n));
  }
  {
    CsvWriter csv(out_csv, header);
    for (double w : grid) {
      std::vector<std::string> row{num(rad_to_hz(w))};
      for (int n : orders) {
        const Complex l = a.harmonic(n, w);
        if (std::abs(l) == 0.0) {
          row.push_back("-inf");
          row.push_back("nan");
        } else {
          row.push_back(num(20.0 * std::log10(std::abs(l))));
          row.push_back(num(deg(principal(std::arg(l)))));
        }
      }
      csv.row(row);
    }
  }

  Json j = meta(cfg);
  j["orders"] = orders;
  try {
    j["bandwidth"] = to_json(a.bandwidth(bw_lo(cfg), bw_hi(cfg)));
    write_json(sidecar, j);
  } catch (const BracketError& e) {
    j["bandwidth"] = nullptr;
    j["error"] = e.what();
    write_json(sidecar, j);
    throw;
  }
  return j;
}

Json run_bounds(const WorkbenchConfig& cfg, double sigma,
                const std::string& out_csv, const std::string& summary) {
  const auto a = assemble(cfg);
  const auto& sys = require_reset(a, "bounds");
  if (!(sigma > 0.0 && sigma < 1.0)) throw ConfigError("sigma must lie in (0, 1)");
  const auto grid = analysis_grid(cfg);
  const double w_c = a.bandwidth(bw_lo(cfg), bw_hi(cfg)).omega_c;
  const auto report = validate_filter(sys, sigma, grid, cfg.analysis.delta_n, w_c);

  {
    CsvWriter csv(out_csv, {"freq_hz", "cs_phase_deg", "kappa_alpha", "lower_a_deg",
                            "upper_a_deg", "lower_b_deg", "upper_b_deg", "saturated",
                            "pass"});
    for (const auto& row : report.rows) {
      double la, ua, lb, ub;
      if (sys.reset.is_clegg()) {
        const auto eta = theorem1_bounds(sigma);
        la = eta.eta1.lo;
        ua = eta.eta1.hi;
        lb = eta.eta2.lo;
        ub = eta.eta2.hi;
      } else {
        const auto beta = theorem2_bounds(sys.reset, sigma, row.omega);
        const double nan = std::nan("");
        la = beta.empty ? nan : beta.beta1_lo;
        ua = beta.empty ? nan : beta.beta1_hi;
        lb = beta.empty ? nan : beta.beta4_lo;
        ub = beta.empty ? nan : beta.beta4_hi;
      }
      csv.row({num(rad_to_hz(row.omega)), num(deg(row.cs_phase)), num(row.kappa),
               num(deg(la)), num(deg(ua)), num(deg(lb)), num(deg(ub)),
               b(row.saturated), b(row.in_bounds)});
    }
  }
  Json j = meta(cfg);
  j["sigma"] = sigma;
  j["delta_n"] = cfg.analysis.delta_n;
  j["element"] = sys.reset.is_clegg() ? "ci" : "fore";
  j["report"] = to_json(report);
  write_json(summary, j);
  return j;
}

Json run_design(const WorkbenchConfig& cfg, const std::string& mode,
                std::optional<double> target_lead, bool enforce_gain_cap,
                const std::string& out) {
  const auto a = assemble(cfg);
  const auto& sys = require_reset(a, "design");
  DesignOptions opt;
  opt.sigma = cfg.analysis.sigma;
  opt.delta_n = cfg.analysis.delta_n;
  opt.enforce_gain_cap = enforce_gain_cap;
  opt.bandwidth_lo = bw_lo(cfg);
  opt.bandwidth_hi = bw_hi(cfg);
  opt.grid = analysis_grid(cfg);

  Json j = meta(cfg);
  if (mode == "lead") {
    if (!target_lead) throw ConfigError("design --mode lead needs --target-lead");
    const auto r = design_phase_lead(sys, *target_lead, opt);
    j["result"] = to_json(r, false);
  } else if (mode == "gain") {
    if (!cfg.shaping.present())
      throw ConfigError("design --mode gain starts from a shaped design; add [shaping]");
    const auto r = design_gain_transfer(sys, opt);
    j["result"] = to_json(r, true);
  } else {
    throw ConfigError("design mode must be lead or gain");
  }
  write_json(out, j);
  return j;
}

namespace {

LoopConfig loop_for(const WorkbenchConfig& cfg, const InputSpec& in) {
  const auto a = assemble(cfg);
  auto lc = a.loop_config(cfg.simulation);
  lc.r = in.r;
  lc.d = in.d;
  lc.n = in.n;
  if (in.base_freq_hz)
    lc.duration = periodic_duration(*in.base_freq_hz, cfg.simulation.discard_fraction,
                                    cfg.simulation.duration);
  return lc;
}

Json metrics_of(const WorkbenchConfig& cfg, const InputSpec& in, const LoopConfig& lc,
                const SimTrace& tr) {
  Json j = meta(cfg);
  j["input"] = in.text;
  j["duration_s"] = lc.duration;
  j["step_s"] = lc.step;
  j["reset_count"] = tr.reset_instants.size();
  j["chatter_steps"] = tr.chatter_steps;
  j["warnings"] = tr.warnings;
  if (in.is_step && in.step_size != 0.0) {
    j["transient"] = to_json(step_metrics(tr, in.step_size));
  } else if (in.base_freq_hz) {
    j["steady_state_error_inf"] =
        steady_state_error(tr, cfg.simulation.discard_fraction, *in.base_freq_hz);
    j["discard_fraction"] = cfg.simulation.discard_fraction;
  } else {
    double worst = 0.0;
    for (double e : tr.e) worst = std::max(worst, std::abs(e));
    j["error_inf"] = worst;
  }
  return j;
}

}  // namespace

Json run_simulate(const WorkbenchConfig& cfg, const InputSpec& input,
                  const std::string& trace_csv, const std::string& metrics) {
  const auto lc = loop_for(cfg, input);
  const auto tr = simulate(lc);
  if (!trace_csv.empty()) {
    CsvWriter csv(trace_csv, {"t", "r", "e", "es", "v", "u", "y", "reset"});
    for (std::size_t i = 0; i < tr.size(); ++i)
      csv.row({num(tr.t[i]), num(tr.r[i]), num(tr.e[i]), num(tr.es[i]), num(tr.v[i]),
               num(tr.u[i]), num(tr.y[i]), tr.reset[i] ? "1" : "0"});
  }
  Json j = metrics_of(cfg, input, lc, tr);
  if (!metrics.empty()) write_json(metrics, j);
  return j;
}

namespace {

struct Job {
  std::string member;
  std::string input;
};

Json run_job(const Job& job) {
  const auto cfg = preset(job.member);
  const auto in = parse_input(job.input);
  const auto lc = loop_for(cfg, in);
  return metrics_of(cfg, in, lc, simulate(lc));
}

std::string pct(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

}  // namespace

Json run_casestudy(const std::string& name, const std::string& dir) {
  const auto members = case_members(name);
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);

  Json summary;
  summary["case"] = name;
  Json loops = Json::array();
  for (const auto& m : members) {
    const auto cfg = preset(m);
    const auto out = (root / ("bode_" + m + ".csv")).string();
    const auto j = run_bode(cfg, {1, 3}, out, sidecar_path(out));
    loops.push_back(j);
  }
  summary["loops"] = loops;

  const auto& shaped_name = members[2];
  const auto& reset_name = members[1];
  const auto shaped_cfg = preset(shaped_name);
  const auto bounds_csv = (root / ("bounds_" + shaped_name + ".csv")).string();
  summary["bounds"] = run_bounds(shaped_cfg, shaped_cfg.analysis.sigma, bounds_csv,
                                 sidecar_path(bounds_csv))["report"];

  const double pm_reset = loops[1]["bandwidth"]["phase_margin_deg"].get<double>();
  const double pm_shaped = loops[2]["bandwidth"]["phase_margin_deg"].get<double>();
  summary["phase_margin_delta_deg"] = pm_shaped - pm_reset;

  // Simulation scenarios.
  std::vector<std::pair<std::string, std::string>> scenarios;  // label, input
  std::vector<double> reference;
  scenarios.push_back({"step", "step:1e-5"});
  reference.push_back(std::nan(""));
  if (name == "case2") {
    const double f[] = {3.0, 5.0, 10.0, 30.0, 200.0};
    const double ref[] = {41.3, 40.0, 30.6, 25.0, 0.0};
    for (int i = 0; i < 5; ++i) {
      std::ostringstream in;
      in << "sin:1e-5@" << f[i];
      std::ostringstream label;
      label << "sin_" << f[i] << "hz";
      scenarios.push_back({label.str(), in.str()});
      reference.push_back(ref[i]);
    }
    scenarios.push_back({"d1", "d1"});
    reference.push_back(40.0);
    scenarios.push_back({"r2d2", "r2d2"});
    reference.push_back(37.5);
  }
  std::vector<Job> jobs;
  for (const auto& s : scenarios)
    for (const auto& m : members) jobs.push_back({m, s.second});
  const auto results = parallel_map<Json>(
      jobs.size(), [&](std::size_t i) { return run_job(jobs[i]); });

  Json table = Json::array();
  CsvWriter csv((root / "summary.csv").string(),
                {"scenario", "metric", members[0], members[1], members[2],
                 "improvement_pct", "reference_improvement_pct", "shaped_best"});
  for (std::size_t s = 0; s < scenarios.size(); ++s) {
    const bool step = scenarios[s].first == "step";
    const char* metric = step ? "overshoot_pct" : "steady_state_error_inf";
    double v[3];
    for (int k = 0; k < 3; ++k) {
      const auto& r = results[s * 3 + k];
      v[k] = step ? r["transient"]["overshoot_pct"].get<double>()
                  : r["steady_state_error_inf"].get<double>();
    }
    const double improvement = step ? std::nan("") : (v[1] - v[2]) / v[1] * 100.0;
    const bool ordered = step ? (v[2] < v[1] && v[1] < v[0]) : (v[2] < v[1]);
    Json row = {{"scenario", scenarios[s].first},
                {"input", scenarios[s].second},
                {"metric", metric},
                {members[0], v[0]},
                {members[1], v[1]},
                {members[2], v[2]},
                {"ordering_ok", ordered}};
    if (!step) {
      row["improvement_pct"] = improvement;
      row["reference_improvement_pct"] = reference[s];
    }
    table.push_back(row);
    csv.row({scenarios[s].first, metric, num(v[0]), num(v[1]), num(v[2]),
             step ? "" : pct(improvement), step ? "" : pct(reference[s]), b(ordered)});
  }
  summary["scenarios"] = table;
  if (name == "case1") {
    summary["reference_overshoot_pct"] = {{members[0], 64.0}, {members[1], 36.0}, {members[2], 0.0}};
    const auto base = assemble(preset(reset_name));
    DesignOptions opt;
    opt.bandwidth_lo = bw_lo(shaped_cfg);
    opt.bandwidth_hi = bw_hi(shaped_cfg);
    const auto d = design_phase_lead(*base.shaped, 12.8, opt);
    summary["design_check"] = to_json(d, false);
  }
  write_json((root / "summary.json").string(), summary);
  return summary;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const BracketError*>(&e)) return 3;
  if (dynamic_cast<const InfeasibleTargetError*>(&e)) return 4;
  if (dynamic_cast<const DivergenceError*>(&e)) return 5;
  return 1;
}

}  // namespace rls::wb
