#include "rls/workbench/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "rls/angles.hpp"

namespace rls::wb {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"meta", {"name", "topology"}},
      {"reset", {"element", "k_r", "gamma", "w_r", "w_dr", "w_tr"}},
      {"pid", {"k_p", "integrators", "w_i", "w_d", "w_t", "w_f"}},
      {"shaping", {"w_zeta", "w_eta", "w_psi"}},
      {"plant", {"preset", "num", "den"}},
      {"analysis",
       {"f_min_hz", "f_max_hz", "points_per_decade", "orders", "sigma",
        "delta_n", "bw_min_hz", "bw_max_hz"}},
      {"simulation",
       {"step", "duration", "record_stride", "discard_fraction",
        "reset_enabled", "quantizer", "clamp"}},
  };
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || v.empty())
    throw ConfigError("key '" + key + "': '" + raw + "' is not a number");
  return out;
}

int to_int(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  int out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size() || v.empty())
    throw ConfigError("key '" + key + "': '" + raw + "' is not an integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': '" + raw + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& raw) {
  std::string s = raw;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream is(s);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    if constexpr (std::is_same_v<T, double>) out += fmt(v[i]);
    else out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

WorkbenchConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream is(text);
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }

  WorkbenchConfig cfg;
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end())
      throw ConfigError("unknown section or top-level key '" + section + "'");
    for (const auto& [key, node] : body) {
      if (!it->second.count(key))
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      const std::string v = node.data();
      const std::string full = section + "." + key;
      if (section == "meta") {
        if (key == "name") cfg.name = trim(v);
        else cfg.topology = trim(v);
      } else if (section == "reset") {
        if (key == "element") cfg.reset.element = trim(v);
        else if (key == "k_r") cfg.reset.k_r = to_double(full, v);
        else if (key == "gamma") cfg.reset.gamma = to_double(full, v);
        else if (key == "w_r") cfg.reset.w_r = to_double(full, v);
        else if (key == "w_dr") cfg.reset.w_dr = to_double(full, v);
        else cfg.reset.w_tr = to_double(full, v);
      } else if (section == "pid") {
        if (key == "k_p") cfg.pid.k_p = to_double(full, v);
        else if (key == "integrators") cfg.pid.integrators = to_int(full, v);
        else if (key == "w_i") cfg.pid.w_i = to_double(full, v);
        else if (key == "w_d") cfg.pid.w_d = to_double(full, v);
        else if (key == "w_t") cfg.pid.w_t = to_double(full, v);
        else cfg.pid.w_f = to_double(full, v);
      } else if (section == "shaping") {
        if (key == "w_zeta") cfg.shaping.w_zeta = to_double(full, v);
        else if (key == "w_eta") cfg.shaping.w_eta = to_double(full, v);
        else cfg.shaping.w_psi = to_double(full, v);
      } else if (section == "plant") {
        if (key == "preset") {
          cfg.plant.preset = trim(v);
        } else {
          auto& dst = key == "num" ? cfg.plant.num : cfg.plant.den;
          dst.clear();
          for (const auto& tok : split_list(v)) dst.push_back(to_double(full, tok));
        }
      } else if (section == "analysis") {
        auto& a = cfg.analysis;
        if (key == "f_min_hz") a.f_min_hz = to_double(full, v);
        else if (key == "f_max_hz") a.f_max_hz = to_double(full, v);
        else if (key == "points_per_decade") a.points_per_decade = to_int(full, v);
        else if (key == "sigma") a.sigma = to_double(full, v);
        else if (key == "delta_n") a.delta_n = to_double(full, v);
        else if (key == "bw_min_hz") a.bw_min_hz = to_double(full, v);
        else if (key == "bw_max_hz") a.bw_max_hz = to_double(full, v);
        else {
          a.orders.clear();
          for (const auto& tok : split_list(v)) a.orders.push_back(to_int(full, tok));
        }
      } else {
        auto& s = cfg.simulation;
        if (key == "step") s.step = to_double(full, v);
        else if (key == "duration") s.duration = to_double(full, v);
        else if (key == "record_stride") s.record_stride = to_int(full, v);
        else if (key == "discard_fraction") s.discard_fraction = to_double(full, v);
        else if (key == "reset_enabled") s.reset_enabled = to_bool(full, v);
        else if (key == "quantizer") s.quantizer = to_double(full, v);
        else s.clamp = to_double(full, v);
      }
    }
  }

  const auto& el = cfg.reset.element;
  if (el != "ci" && el != "fore" && el != "none")
    throw ConfigError("reset.element must be ci, fore or none, got '" + el + "'");
  const auto& pp = cfg.plant.preset;
  if (pp != "spider_stage" && pp != "unity" && pp != "custom")
    throw ConfigError("plant.preset must be spider_stage, unity or custom");
  if (!cfg.plant.num.empty() || !cfg.plant.den.empty()) {
    if (pp != "custom" && tree.get_child("plant").count("preset"))
      throw ConfigError("plant.num/den require preset = custom");
    cfg.plant.preset = "custom";
  }
  if (cfg.plant.preset == "custom" && (cfg.plant.num.empty() || cfg.plant.den.empty()))
    throw ConfigError("a custom plant needs both num and den");
  if (!(cfg.analysis.f_min_hz > 0.0 && cfg.analysis.f_max_hz > cfg.analysis.f_min_hz))
    throw ConfigError("analysis range must satisfy 0 < f_min_hz < f_max_hz");
  if (!(cfg.analysis.bw_min_hz > 0.0 && cfg.analysis.bw_max_hz > cfg.analysis.bw_min_hz))
    throw ConfigError("bandwidth range must satisfy 0 < bw_min_hz < bw_max_hz");
  if (cfg.analysis.points_per_decade < 1)
    throw ConfigError("analysis.points_per_decade must be >= 1");
  if (!(cfg.analysis.sigma > 0.0 && cfg.analysis.sigma < 1.0))
    throw ConfigError("analysis.sigma must lie in (0, 1)");
  if (!(cfg.analysis.delta_n > 1.0 && cfg.analysis.delta_n < 2.0))
    throw ConfigError("analysis.delta_n must lie in (1, 2)");
  for (int n : cfg.analysis.orders)
    if (n < 1) throw ConfigError("analysis.orders must be positive");
  if (!(cfg.simulation.step > 0.0) || !(cfg.simulation.duration > 0.0))
    throw ConfigError("simulation step and duration must be positive");
  if (cfg.simulation.record_stride < 1)
    throw ConfigError("simulation.record_stride must be >= 1");
  if (!(cfg.simulation.discard_fraction >= 0.0 && cfg.simulation.discard_fraction < 1.0))
    throw ConfigError("simulation.discard_fraction must lie in [0, 1)");
  return cfg;
}

WorkbenchConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const WorkbenchConfig& cfg) {
  std::ostringstream os;
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) os << key << " = " << fmt(*v) << '\n';
  };
  os << "[meta]\n";
  if (!cfg.name.empty()) os << "name = " << cfg.name << '\n';
  if (!cfg.topology.empty()) os << "topology = " << cfg.topology << '\n';
  os << "\n[reset]\nelement = " << cfg.reset.element << '\n'
     << "k_r = " << fmt(cfg.reset.k_r) << '\n'
     << "gamma = " << fmt(cfg.reset.gamma) << '\n';
  opt("w_r", cfg.reset.w_r);
  opt("w_dr", cfg.reset.w_dr);
  opt("w_tr", cfg.reset.w_tr);
  os << "\n[pid]\nk_p = " << fmt(cfg.pid.k_p) << '\n'
     << "integrators = " << cfg.pid.integrators << '\n';
  opt("w_i", cfg.pid.w_i);
  opt("w_d", cfg.pid.w_d);
  opt("w_t", cfg.pid.w_t);
  opt("w_f", cfg.pid.w_f);
  if (cfg.shaping.present()) {
    os << "\n[shaping]\n";
    opt("w_zeta", cfg.shaping.w_zeta);
    opt("w_eta", cfg.shaping.w_eta);
    opt("w_psi", cfg.shaping.w_psi);
  }
  os << "\n[plant]\npreset = " << cfg.plant.preset << '\n';
  if (cfg.plant.preset == "custom")
    os << "num = " << join(cfg.plant.num) << "\nden = " << join(cfg.plant.den) << '\n';
  const auto& a = cfg.analysis;
  os << "\n[analysis]\nf_min_hz = " << fmt(a.f_min_hz) << "\nf_max_hz = " << fmt(a.f_max_hz)
     << "\npoints_per_decade = " << a.points_per_decade << "\norders = " << join(a.orders)
     << "\nsigma = " << fmt(a.sigma) << "\ndelta_n = " << fmt(a.delta_n)
     << "\nbw_min_hz = " << fmt(a.bw_min_hz) << "\nbw_max_hz = " << fmt(a.bw_max_hz) << '\n';
  const auto& s = cfg.simulation;
  os << "\n[simulation]\nstep = " << fmt(s.step) << "\nduration = " << fmt(s.duration)
     << "\nrecord_stride = " << s.record_stride
     << "\ndiscard_fraction = " << fmt(s.discard_fraction)
     << "\nreset_enabled = " << (s.reset_enabled ? "true" : "false") << '\n';
  opt("quantizer", s.quantizer);
  opt("clamp", s.clamp);
  return os.str();
}

FrequencyGrid analysis_grid(const WorkbenchConfig& cfg) {
  return FrequencyGrid::logspace(hz_to_rad(cfg.analysis.f_min_hz),
                                 hz_to_rad(cfg.analysis.f_max_hz),
                                 cfg.analysis.points_per_decade);
}

namespace {

RationalTransferFunction pid_part(const PidSection& p) {
  auto c = RationalTransferFunction::gain(p.k_p);
  if (p.integrators < 0) throw ConfigError("pid.integrators must be >= 0");
  if (p.integrators > 0) {
    if (!p.w_i) throw ConfigError("pid.w_i is required when pid.integrators > 0");
    c = c * make_pi(*p.w_i, p.integrators);
  }
  if (p.w_d || p.w_t) {
    if (!(p.w_d && p.w_t)) throw ConfigError("pid.w_d and pid.w_t go together");
    c = c * make_lead(*p.w_d, *p.w_t);
  }
  if (p.w_f) c = c * make_lowpass(*p.w_f);
  return c;
}

RationalTransferFunction plant_of(const PlantSection& p) {
  if (p.preset == "spider_stage") return spider_stage_plant();
  if (p.preset == "unity") return RationalTransferFunction::unity();
  Polynomial num(p.num.rbegin(), p.num.rend());
  Polynomial den(p.den.rbegin(), p.den.rend());
  return {num, den};
}

}  // namespace

Assembly assemble(const WorkbenchConfig& cfg) {
  try {
    Assembly out;
    out.plant = plant_of(cfg.plant);
    const auto pid = pid_part(cfg.pid);
    const auto& r = cfg.reset;
    if (r.element == "none") {
      out.controller = pid;
      return out;
    }
    ShapedOpenLoop sys;
    sys.plant = out.plant;
    sys.pre_gain = r.k_r;
    auto ca = pid;
    if (r.w_dr || r.w_tr) {
      if (!(r.w_dr && r.w_tr)) throw ConfigError("reset.w_dr and reset.w_tr go together");
      ca = make_lead(*r.w_dr, *r.w_tr) * ca;
    }
    if (r.element == "ci") {
      sys.reset = clegg_integrator(r.gamma);
      if (r.w_r) ca = make_zero(*r.w_r) * ca;
    } else {
      if (!r.w_r) throw ConfigError("reset.w_r is required for a FORE");
      sys.reset = fore(*r.w_r, r.gamma);
    }
    sys.c_alpha = ca;
    if (cfg.shaping.present()) {
      const auto& s = cfg.shaping;
      if (!(s.w_zeta && s.w_eta && s.w_psi))
        throw ConfigError("shaping needs w_zeta, w_eta and w_psi");
      sys.shaping = make_shaping_filter(*s.w_zeta, *s.w_eta, *s.w_psi);
    }
    validate(sys);
    out.controller = RationalTransferFunction::gain(r.k_r) * base_linear(sys.reset) * ca;
    out.shaped = sys;
    return out;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Complex Assembly::harmonic(int n, double omega) const {
  if (shaped) return open_loop_harmonic(*shaped, n, omega);
  if (n != 1) return {0.0, 0.0};
  return eval_response(controller, omega) * eval_response(plant, omega);
}

BandwidthReport Assembly::bandwidth(double w_lo, double w_hi) const {
  if (shaped) return find_bandwidth(*shaped, w_lo, w_hi);
  return find_bandwidth(controller * plant, w_lo, w_hi);
}

LoopConfig Assembly::loop_config(const SimulationSection& sim) const {
  LoopConfig c;
  if (shaped) {
    c.reset = shaped->reset;
    c.pre_gain = shaped->pre_gain;
    c.shaping = shaped->shaping;
    c.c_alpha = shaped->c_alpha;
  } else {
    c.c_alpha = controller;
  }
  c.plant = plant;
  c.reset_enabled = sim.reset_enabled;
  c.step = sim.step;
  c.duration = sim.duration;
  c.record_stride = sim.record_stride;
  c.quantizer = sim.quantizer;
  c.clamp = sim.clamp;
  return c;
}

}  // namespace rls::wb
