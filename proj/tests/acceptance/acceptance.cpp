// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rls/angles.hpp"
#include "rls/hosidf.hpp"
#include "rls/hybrid_sim.hpp"
#include "rls/shaping_bounds.hpp"
#include "rls/signals.hpp"
#include "rls/trace_analysis.hpp"
#include "rls/workbench/commands.hpp"
#include "rls/workbench/config.hpp"
#include "rls/workbench/presets.hpp"

using namespace rls;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("%s %2d  %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool near(double v, double ref, double tol) { return std::abs(v - ref) <= tol; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

wb::Assembly assembly(const std::string& name) { return wb::assemble(wb::preset(name)); }

BandwidthReport bandwidth(const std::string& name) {
  return assembly(name).bandwidth(hz_to_rad(1.0), hz_to_rad(1000.0));
}

LoopConfig loop(const std::string& name) {
  const auto cfg = wb::preset(name);
  return wb::assemble(cfg).loop_config(cfg.simulation);
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto eta = theorem1_bounds(0.1);
  const auto lem = lemma1_interval(clegg_integrator(-0.3), hz_to_rad(80.0));
  const double us = seconds_since(t0) * 1e6;
  const double e_lo = deg(eta.eta1.lo), e_hi = deg(eta.eta1.hi);
  const double l_lo = deg(lem[0].lo), l_hi = deg(lem[0].hi);
  const bool pass = near(e_lo, -25.84, 0.01) && near(e_hi, 25.84, 0.01) &&
                    near(l_lo, 0.0, 0.01) && near(l_hi, 67.08, 0.01) && us < 1000.0;
  report(1, "bound endpoints (sigma 0.1, CI gamma -0.3)", pass,
         fmt("eta1 = (%.4f, %.4f) deg, lemma = (%.4f, %.4f) deg, %.1f us", e_lo, e_hi,
             l_lo, l_hi, us));
}

void criterion2() {
  const auto lem = lemma1_interval(fore(160.2, -0.3), hz_to_rad(50.0));
  const double lo = deg(lem[0].lo), hi = deg(lem[0].hi);
  report(2, "bound endpoint (FORE 160.2 rad/s at 50 Hz)",
         near(lo, 0.0, 0.01) && near(hi, 27.02, 0.01),
         fmt("lemma = (%.4f, %.4f) deg", lo, hi));
}

void criterion3() {
  const double p = deg(phase(make_shaping_filter(950, 3000, 1e4), hz_to_rad(80.0)));
  report(3, "shaping filter phase at 80 Hz", near(p, 15.5, 0.1), fmt("%.4f deg", p));
}

void criterion4() {
  const auto ci = clegg_integrator(-0.3);
  const double w_c = hz_to_rad(80.0);
  const double cs = phase(make_shaping_filter(950, 3000, 1e4), w_c);
  const double c0 = deg(phase_at_bandwidth(ci, 0.0, w_c));
  const double c1 = deg(phase_at_bandwidth(ci, cs, w_c));
  const double lead = phase_lead(ci, cs, w_c);
  report(4, "CI phases at 80 Hz", near(c0, -22.9, 0.1) && near(c1, -10.1, 0.2) &&
                                     near(lead, 12.8, 0.2),
         fmt("unshaped %.4f, shaped %.4f, lead %.4f deg", c0, c1, lead));
}

void criterion5() {
  const auto el = fore(160.2, -0.3);
  const double w_c = hz_to_rad(50.0);
  const double lead = phase_lead(el, rad(9.2), w_c);
  const auto m = max_phase_lead(el, w_c);
  report(5, "case-2 phase lead", near(lead, 5.9, 0.2) && near(m.max_cs_phase, 27.02, 0.01),
         fmt("lead %.4f deg, max shaping phase %.4f deg", lead, m.max_cs_phase));
}

void criterion6() {
  const auto ci = clegg_integrator(0.0);
  const double analytic = deg(std::arg(hosidf(ci, 0.0, 1, hz_to_rad(10.0))));
  std::vector<double> freqs{5.0, 20.0, 100.0};
  const auto fft = parallel_map<double>(freqs.size(), [&](std::size_t i) {
    LoopConfig c;
    c.reset = ci;
    c.feedback = false;
    c.r = sinusoid(1.0, freqs[i]);
    c.duration = 20.0 / freqs[i];
    const auto tr = simulate(c);
    return deg(std::arg(extract_harmonics(tr, hz_to_rad(freqs[i]), {1})[0]));
  });
  bool pass = near(analytic, -38.15, 0.05);
  std::string detail = fmt("analytic %.4f deg; simulated", analytic);
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    pass = pass && near(fft[i], analytic, 1.0);
    detail += fmt(" %.4f@%gHz", fft[i], freqs[i]);
  }
  report(6, "Clegg integrator describing function", pass, detail);
}

struct OracleCase {
  GeneralizedFore el;
  RationalTransferFunction cs = RationalTransferFunction::unity();
  double f_hz = 0.0;
};

void criterion7() {
  // Frequencies whose period is a whole number of 1e-5 s steps.
  const std::vector<double> freqs{5, 8, 10, 16, 20, 25, 40, 50, 80, 100};
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> g(-0.8, 0.8), lwa(1.0, 3.0), u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, freqs.size() - 1);
  std::vector<OracleCase> cases;
  while (cases.size() < 25) {
    OracleCase c;
    const double wa = u(rng) < 0.3 ? 0.0 : std::pow(10.0, lwa(rng));
    c.el = wa > 0.0 ? fore(wa, g(rng)) : clegg_integrator(g(rng));
    c.f_hz = freqs[pick(rng)];
    const double w = hz_to_rad(c.f_hz);
    // Lead filter centred near w whose phase there lies inside the
    // admissible bandwidth interval.
    const double r = 1.0 + 8.0 * u(rng);
    const double z = w / std::sqrt(r) * std::pow(10.0, 0.5 * (u(rng) - 0.5));
    c.cs = make_shaping_filter(z, r * z, 50.0 * r * z);
    const double p = phase(c.cs, w);
    if (!(p > 0.0 && p < lemma1_upper_bound(c.el, w))) continue;
    cases.push_back(c);
  }

  const auto t0 = std::chrono::steady_clock::now();
  struct Outcome {
    double mag_err = 0.0, phase_err = 0.0, even = 0.0;
  };
  const auto out = parallel_map<Outcome>(cases.size(), [&](std::size_t i) {
    const auto& c = cases[i];
    LoopConfig lc;
    lc.reset = c.el;
    lc.shaping = c.cs;
    lc.feedback = false;
    lc.r = sinusoid(1.0, c.f_hz);
    lc.duration = 20.0 / c.f_hz;
    const auto tr = simulate(lc);
    const double w = hz_to_rad(c.f_hz);
    const auto h = extract_harmonics(tr, w, {1, 2, 3, 4, 5});
    const double cs_phase = phase(c.cs, w);
    Outcome o;
    const int odd[3] = {1, 3, 5};
    const int idx[3] = {0, 2, 4};
    for (int k = 0; k < 3; ++k) {
      const Complex ref = hosidf(c.el, cs_phase, odd[k], w);
      o.mag_err = std::max(o.mag_err, std::abs(std::abs(h[idx[k]]) / std::abs(ref) - 1.0));
      o.phase_err = std::max(o.phase_err, std::abs(deg(principal(std::arg(h[idx[k]]) - std::arg(ref)))));
    }
    o.even = std::max(std::abs(h[1]), std::abs(h[3])) / std::abs(h[0]);
    return o;
  });
  const double secs = seconds_since(t0);
  Outcome worst;
  for (const auto& o : out) {
    worst.mag_err = std::max(worst.mag_err, o.mag_err);
    worst.phase_err = std::max(worst.phase_err, o.phase_err);
    worst.even = std::max(worst.even, o.even);
  }
  report(7, "describing function vs simulation, 25 random configurations",
         worst.mag_err < 0.01 && worst.phase_err < 1.0 && worst.even < 1e-3 && secs < 120.0,
         fmt("worst magnitude %.3f%%, phase %.3f deg, even/first %.2e, %.1f s",
             100.0 * worst.mag_err, worst.phase_err, worst.even, secs));
}

void criterion8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> a(-kPi, kPi), s(0.01, 0.99), lt(-2.0, 2.0), u(0.0, 1.0);
  int mismatches = 0, skipped = 0, saturated = 0;
  double form_gap = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double sigma = s(rng);
    const double theta_alpha = u(rng) < 0.2 ? 0.0 : std::pow(10.0, lt(rng));
    const double w = 100.0;
    const auto el = theta_alpha == 0.0 ? clegg_integrator(0.0) : fore(theta_alpha * w, 0.0);
    bool sat = false;
    const auto set = off_bandwidth_bounds(el, sigma, w, &sat);
    saturated += sat;
    const double cs = a(rng);
    const double k = kappa_alpha(el, cs, w);
    form_gap = std::max(form_gap, std::abs(kappa_alpha_rewritten(el, cs, w) - k));
    if (std::abs(k - (1.0 - sigma)) < 1e-12 || std::abs(k - (1.0 + sigma)) < 1e-12) {
      ++skipped;
      continue;
    }
    const bool band = k > 1.0 - sigma && k < 1.0 + sigma;
    if (contains(set, cs) != band) ++mismatches;
  }
  report(8, "set membership vs gain band, 1e4 draws", mismatches == 0 && form_gap <= 1e-12,
         fmt("%d mismatches, %d saturated draws, %d on an endpoint, kappa forms differ by %.1e",
             mismatches, saturated, skipped, form_gap));
}

void criterion9() {
  const auto pid = bandwidth("case2_pid");
  const auto cglp = bandwidth("case2_cglp");
  const auto shaped = bandwidth("case2_shaped_cglp");
  const double f_c = rad_to_hz(cglp.omega_c), f_s = rad_to_hz(shaped.omega_c);
  const bool pass = std::abs(f_c / 50.0 - 1.0) <= 0.02 && std::abs(f_s / 61.6 - 1.0) <= 0.02 &&
                    near(pid.phase_margin, 50.0, 1.0) && near(cglp.phase_margin, 50.0, 1.0) &&
                    near(shaped.phase_margin, 50.0, 1.0);
  report(9, "case-2 bandwidths and phase margins", pass,
         fmt("CgLp %.2f Hz, shaped %.2f Hz; PM PID %.2f, CgLp %.2f, shaped %.2f deg", f_c, f_s,
             pid.phase_margin, cglp.phase_margin, shaped.phase_margin));
}

void criterion10() {
  const auto base = bandwidth("case1_pci_pid");
  const auto shaped = bandwidth("case1_shaped");
  const double f_b = rad_to_hz(base.omega_c), f_s = rad_to_hz(shaped.omega_c);
  const double delta = shaped.phase_margin - base.phase_margin;
  const bool pass = std::abs(f_b / 80.0 - 1.0) <= 0.05 && std::abs(f_s / 80.0 - 1.0) <= 0.05 &&
                    near(delta, 12.8, 0.5) && near(base.phase_margin, 27.2, 3.0) &&
                    near(shaped.phase_margin, 40.0, 3.0);
  report(10, "case-1 bandwidths and phase-margin delta", pass,
         fmt("PCI-PID %.2f Hz PM %.2f, shaped %.2f Hz PM %.2f, delta %.2f deg", f_b,
             base.phase_margin, f_s, shaped.phase_margin, delta));
}

void criterion11() {
  const std::vector<std::string> names{"case1_shaped", "case1_pci_pid", "case1_pi2d"};
  const auto os = parallel_map<double>(names.size(), [&](std::size_t i) {
    auto c = loop(names[i]);
    c.r = step_signal(0.0, 1e-5);
    c.duration = 0.3;
    return step_metrics(simulate(c), 1e-5).overshoot;
  });
  report(11, "step overshoot ordering", os[0] < os[1] && os[1] < os[2] && os[0] < 2.0,
         fmt("shaped %.2f%% < PCI-PID %.2f%% < PI2D %.2f%%, shaped below 2%%", os[0], os[1],
             os[2]));
}

void criterion12() {
  struct Run {
    std::string name;
    std::function<void(LoopConfig&)> drive;
    double base_hz;
  };
  std::vector<Run> runs;
  const std::vector<double> freqs{3, 5, 10, 30, 200};
  for (double f : freqs) {
    runs.push_back({"", [f](LoopConfig& c) { c.r = sinusoid(1e-5, f); }, f});
  }
  runs.push_back({"d1", [](LoopConfig& c) { c.d = disturbance_d1(); }, 5.0});
  runs.push_back({"r2d2", [](LoopConfig& c) { c.r = reference_r2(); c.d = disturbance_d2(); }, 1.0});
  const std::vector<std::string> ctl{"case2_cglp", "case2_shaped_cglp"};
  const auto err = parallel_map<double>(runs.size() * 2, [&](std::size_t i) {
    const auto& run = runs[i / 2];
    auto c = loop(ctl[i % 2]);
    run.drive(c);
    c.duration = wb::periodic_duration(run.base_hz, 0.5, 0.4);
    return steady_state_error(simulate(c), 0.5, run.base_hz);
  });
  bool pass = true;
  std::string detail = "improvement";
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const double unshaped = err[2 * k], shaped = err[2 * k + 1];
    const double rel = (unshaped - shaped) / unshaped;
    const bool high = k < freqs.size() && freqs[k] == 200.0;
    pass = pass && (high ? std::abs(rel) < 0.05 : shaped < unshaped);
    detail += k < freqs.size() ? fmt(" %gHz %.1f%%", freqs[k], 100.0 * rel)
                               : fmt(" %s %.1f%%", runs[k].name.c_str(), 100.0 * rel);
  }
  report(12, "steady-state error ordering", pass, detail);
}

void criterion13() {
  const auto a = assembly("case2_cglp");
  const auto& sys = *a.shaped;
  const auto blc = sys.pre_gain * base_linear(sys.reset) * sys.c_alpha * sys.plant;
  const std::vector<double> freqs{2, 5, 20, 50, 200};
  const auto sim = parallel_map<double>(freqs.size(), [&](std::size_t i) {
    auto c = loop("case2_cglp");
    c.reset_enabled = false;
    c.r = sinusoid(1e-5, freqs[i]);
    c.duration = wb::periodic_duration(freqs[i], 0.5, 0.4);
    return steady_state_error(simulate(c), 0.5, freqs[i]);
  });
  bool pass = true;
  double worst = 0.0;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    const double s = 1e-5 / std::abs(1.0 + eval_response(blc, hz_to_rad(freqs[i])));
    worst = std::max(worst, std::abs(sim[i] / s - 1.0));
  }
  pass = worst < 0.01;
  report(13, "linear-loop error vs sensitivity, resets disabled", pass,
         fmt("worst relative deviation %.3f%% over 2, 5, 20, 50, 200 Hz", 100.0 * worst));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{
      criterion1, criterion2, criterion3, criterion4,  criterion5,  criterion6, criterion7,
      criterion8, criterion9, criterion10, criterion11, criterion12, criterion13};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), "error", false, e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
