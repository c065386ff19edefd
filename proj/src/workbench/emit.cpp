#include "rls/workbench/emit.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "rls/angles.hpp"
#include "rls/workbench/config.hpp"

namespace rls::wb {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
  file_ = std::fopen(path.c_str(), "wb");
  if (!file_) throw Error("cannot write '" + path + "'");
  row(header);
}

CsvWriter::~CsvWriter() {
  if (file_) std::fclose(file_);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw Error("CSV row width mismatch in '" + path_ + "'");
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += ',';
    line += cells[i];
  }
  line += '\n';
  std::fwrite(line.data(), 1, line.size(), file_);
}

void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

Json to_json(const BandwidthReport& r) {
  return {{"bandwidth_hz", rad_to_hz(r.omega_c)},
          {"bandwidth_rad_s", r.omega_c},
          {"phase_margin_deg", r.phase_margin},
          {"gain_db", r.gain_db},
          {"multiple_crossings", r.multiple_crossings}};
}

Json to_json(const AngleInterval& i) {
  return {{"lo_deg", deg(i.lo)},
          {"hi_deg", deg(i.hi)},
          {"lo_closed", i.lo_closed},
          {"hi_closed", i.hi_closed}};
}

Json to_json(const IntervalSet& s) {
  Json out = Json::array();
  for (const auto& i : s) out.push_back(to_json(i));
  return out;
}

Json to_json(const GainCapReport& r) {
  return {{"passes", r.passes},
          {"worst_freq_hz", rad_to_hz(r.worst_omega)},
          {"worst_gain", r.worst_gain}};
}

Json to_json(const FilterCheckReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations)
    v.push_back({{"freq_hz", rad_to_hz(x.omega)},
                 {"angle_deg", deg(x.angle)},
                 {"nearest", to_json(x.nearest)}});
  return {{"bandwidth_hz", rad_to_hz(r.omega_c)},
          {"cs_phase_at_bandwidth_deg", deg(r.cs_phase_at_wc)},
          {"bandwidth_interval", to_json(r.at_bandwidth)},
          {"bandwidth_ok", r.bandwidth_ok},
          {"violation_count", r.violations.size()},
          {"violations", v},
          {"saturated_points", r.saturated_points},
          {"phase_ok", r.phase_ok()},
          {"gain_cap", to_json(r.gain_cap)}};
}

Json to_json(const DesignResult& r, bool gain_mode) {
  Json j;
  if (gain_mode) {
    Json trail = Json::array();
    for (const auto& s : r.gain_trail)
      trail.push_back({{"w_r", s.omega_r},
                       {"gamma", s.gamma},
                       {"k_r", s.k_r},
                       {"low_gain_db", s.low_gain_db},
                       {"phase_margin_deg", s.phase_margin}});
    j = {{"mode", "gain"},
         {"unchanged", r.unchanged},
         {"converged", r.converged},
         {"iterations", r.iterations},
         {"start", {{"w_r", r.start_element.omega_alpha},
                    {"k_r", r.start_k_r},
                    {"gamma", r.start_element.gamma},
                    {"bandwidth_hz", r.start_bandwidth_hz},
                    {"phase_margin_deg", r.start_phase_margin},
                    {"low_gain_db", r.start_low_gain_db},
                    {"gain_at_0.2wc_db", r.start_gain_at_02wc_db}}},
         {"final", {{"w_r", r.element.omega_alpha},
                    {"k_r", r.k_r},
                    {"gamma", r.element.gamma},
                    {"bandwidth_hz", r.bandwidth_hz},
                    {"phase_margin_deg", r.phase_margin},
                    {"low_gain_db", r.low_gain_db},
                    {"gain_at_0.2wc_db", r.gain_at_02wc_db}}},
         {"reference_phase_margin_deg", r.reference_phase_margin},
         {"remaining_lead_deg", r.achieved_lead},
         {"bandwidth_delta_hz", r.bandwidth_hz - r.start_bandwidth_hz},
         {"low_gain_delta_db", r.low_gain_db - r.start_low_gain_db},
         {"trail", trail}};
    return j;
  }
  Json v = Json::array();
  for (const auto& x : r.bound_violations)
    v.push_back({{"freq_hz", rad_to_hz(x.omega)},
                 {"angle_deg", deg(x.angle)},
                 {"nearest", to_json(x.nearest)}});
  Json trail = Json::array();
  for (const auto& s : r.trail)
    trail.push_back({{"w_zeta", s.filter.omega_zeta},
                     {"w_eta", s.filter.omega_eta},
                     {"w_psi", s.filter.omega_psi},
                     {"cs_phase_deg", s.cs_phase_deg},
                     {"lead_deg", s.lead_deg}});
  j = {{"mode", "lead"},
       {"filter", {{"w_zeta", r.filter.omega_zeta},
                   {"w_eta", r.filter.omega_eta},
                   {"w_psi", r.filter.omega_psi}}},
       {"target_lead_deg", r.target_lead},
       {"achieved_lead_deg", r.achieved_lead},
       {"bandwidth_hz", rad_to_hz(r.omega_c)},
       {"cs_phase_at_bandwidth_deg", r.cs_phase_at_wc},
       {"iterations", r.iterations},
       {"converged", r.converged},
       {"bandwidth_ok", r.bandwidth_ok},
       {"bound_violations", v},
       {"gain_cap", to_json(r.gain_cap)},
       {"trail", trail}};
  return j;
}

Json to_json(const TransientMetrics& m) {
  return {{"overshoot_pct", m.overshoot},
          {"settling_time_s", m.settling_time},
          {"settled", m.settled},
          {"steady_state_error_inf", m.steady_state_error_inf}};
}

}  // namespace rls::wb
