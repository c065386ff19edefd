#include "rls/design.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "rls/angles.hpp"
#include "rls/errors.hpp"
#include "rls/hosidf.hpp"

namespace rls {

namespace {

// Inverse of a function increasing on [lo, hi].
template <class F>
double bisect_increasing(F f, double target, double lo, double hi, int iters,
                         int* count) {
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target) lo = mid;
    else hi = mid;
    if (count) ++*count;
  }
  return 0.5 * (lo + hi);
}

// Largest w_psi in (w_eta, 1e3 w_eta] keeping |C_s| under the cap, if any.
std::optional<double> capped_psi(double w_zeta, double w_eta, double w_c,
                                 double delta_n) {
  auto passes = [&](double psi) {
    return check_gain_cap(make_shaping_filter(w_zeta, w_eta, psi), w_c, delta_n)
        .passes;
  };
  double hi = 1e3 * w_eta;
  if (passes(hi)) return hi;
  double lo = w_eta * (1.0 + 1e-6);
  if (!passes(lo)) return std::nullopt;
  for (int i = 0; i < 50; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (passes(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

}  // namespace

DesignResult design_phase_lead(const ShapedOpenLoop& sys, double target_lead_deg,
                               const DesignOptions& options) {
  const ShapedOpenLoop base = sys.unshaped();
  const auto bw = find_bandwidth(base, options.bandwidth_lo, options.bandwidth_hi);
  const double w_c = bw.omega_c;
  const auto& el = sys.reset;

  const auto cap = max_phase_lead(el, w_c);
  if (!(target_lead_deg > 0.0) || target_lead_deg > cap.sup_lead) {
    std::ostringstream os;
    os << "target phase lead " << target_lead_deg
       << " deg is outside (0, " << cap.sup_lead
       << "] deg; the admissible shaping phase at w_c ends at "
       << cap.max_cs_phase << " deg";
    throw InfeasibleTargetError(cap.sup_lead, os.str());
  }

  DesignResult out;
  out.target_lead = target_lead_deg;
  out.omega_c = w_c;

  // Shaping phase at w_c that produces the target lead.
  const double theta = bisect_increasing(
      [&](double x) { return phase_lead(el, x, w_c); }, target_lead_deg, 0.0,
      rad(cap.argmax_cs_phase), 100, nullptr);

  std::optional<DesignResult> fallback;
  for (int k = 0; k < 40; ++k) {
    const double r = 1.05 * std::pow(1.25, k);
    auto make = [&](double w_zeta) -> std::optional<ShapingFilterParams> {
      const double w_eta = r * w_zeta;
      double psi = 10.0 * w_eta;
      if (options.enforce_gain_cap) {
        const auto p = capped_psi(w_zeta, w_eta, w_c, options.delta_n);
        if (!p) return std::nullopt;
        psi = *p;
      }
      return ShapingFilterParams{w_zeta, w_eta, psi};
    };
    auto cs_phase = [&](double w_zeta) {
      const auto p = make(w_zeta);
      return p ? phase(p->tf(), w_c) : -kPi;
    };

    // On the branch w_zeta >= w_c/sqrt(r) the phase at w_c decays with w_zeta.
    const double z_lo = w_c / std::sqrt(r);
    const double z_hi = w_c * 1e6;
    ++out.iterations;
    const double peak = cs_phase(z_lo);
    if (auto p = make(z_lo)) {
      out.trail.push_back({*p, deg(peak), phase_lead(el, peak, w_c)});
    }
    if (!(peak >= theta)) continue;

    const double log_z = bisect_increasing(
        [&](double lz) { return -cs_phase(std::exp(lz)); }, -theta,
        std::log(z_lo), std::log(z_hi), 80, &out.iterations);
    const auto params = make(std::exp(log_z));
    if (!params) continue;

    DesignResult cand = out;
    cand.filter = *params;
    const double achieved = phase(params->tf(), w_c);
    cand.cs_phase_at_wc = deg(achieved);
    cand.achieved_lead = phase_lead(el, achieved, w_c);
    cand.trail.push_back({*params, cand.cs_phase_at_wc, cand.achieved_lead});
    ShapedOpenLoop shaped = sys;
    shaped.shaping = params->tf();
    const auto check = validate_filter(shaped, options.sigma, options.grid,
                                       options.delta_n, w_c);
    cand.bound_violations = check.violations;
    cand.bandwidth_ok = check.bandwidth_ok;
    cand.gain_cap = check.gain_cap;
    cand.converged = std::abs(cand.achieved_lead - target_lead_deg) < 0.05;
    if (cand.converged && check.phase_ok()) return cand;
    if (!fallback) fallback = cand;
    out.iterations = cand.iterations;
    out.trail = cand.trail;
  }
  if (fallback) {
    fallback->iterations = out.iterations;
    return *fallback;
  }
  std::ostringstream os;
  os << "no first-order lead filter reaches " << deg(theta)
     << " deg at w_c under the gain cap " << options.delta_n;
  throw InfeasibleTargetError(cap.sup_lead, os.str());
}

namespace {

double mean_gain_db(const ShapedOpenLoop& sys, double lo, double hi) {
  constexpr int kPoints = 50;
  double acc = 0.0;
  for (int i = 0; i < kPoints; ++i) {
    const double w = lo * std::pow(hi / lo, static_cast<double>(i) / (kPoints - 1));
    acc += 20.0 * std::log10(std::abs(open_loop_harmonic(sys, 1, w)));
  }
  return acc / kPoints;
}

struct Candidate {
  double log_wr = 0.0;
  double gamma = 0.0;
  double k_r = 0.0;
  double objective = -1e300;
  double phase_margin = 0.0;
  double omega_c = 0.0;
  bool feasible = false;
};

}  // namespace

DesignResult design_gain_transfer(const ShapedOpenLoop& sys,
                                  const DesignOptions& options) {
  const auto start_bw =
      find_bandwidth(sys, options.bandwidth_lo, options.bandwidth_hi);
  const double w_c0 = start_bw.omega_c;
  const auto ref_bw =
      find_bandwidth(sys.unshaped(), options.bandwidth_lo, options.bandwidth_hi);
  const bool clegg = sys.reset.is_clegg();

  DesignResult out;
  out.omega_c = w_c0;
  out.start_element = sys.reset;
  out.element = sys.reset;
  out.start_k_r = sys.pre_gain;
  out.k_r = sys.pre_gain;
  out.start_bandwidth_hz = rad_to_hz(w_c0);
  out.bandwidth_hz = out.start_bandwidth_hz;
  out.start_phase_margin = start_bw.phase_margin;
  out.phase_margin = start_bw.phase_margin;
  out.reference_phase_margin = ref_bw.phase_margin;
  out.start_low_gain_db = mean_gain_db(sys, 0.05 * w_c0, 0.5 * w_c0);
  out.low_gain_db = out.start_low_gain_db;
  out.start_gain_at_02wc_db =
      20.0 * std::log10(std::abs(open_loop_harmonic(sys, 1, 0.2 * w_c0)));
  out.gain_at_02wc_db = out.start_gain_at_02wc_db;
  const double cs0 = phase(sys.shaping, w_c0);
  out.cs_phase_at_wc = deg(cs0);
  out.target_lead = phase_lead(sys.reset, cs0, w_c0);
  out.achieved_lead = start_bw.phase_margin - ref_bw.phase_margin;
  if (!(out.achieved_lead > 0.05) || !(out.target_lead > 0.0)) {
    out.unchanged = true;
    out.converged = true;
    return out;
  }

  const double hf_ref = mean_gain_db(sys, 2.0 * w_c0, 10.0 * w_c0);
  auto build = [&](double log_wr, double gamma, double k_r) {
    ShapedOpenLoop s = sys;
    s.reset = clegg ? clegg_integrator(gamma)
                    : fore(std::exp(log_wr), gamma);
    s.pre_gain = k_r;
    return s;
  };
  const double log_wr0 = clegg ? 0.0 : std::log(sys.reset.omega_alpha);
  auto evaluate = [&](double log_wr, double gamma) {
    Candidate c;
    c.log_wr = log_wr;
    c.gamma = gamma;
    if (!(gamma > -0.95 && gamma < 0.95)) return c;
    if (!clegg && std::abs(log_wr - log_wr0) > std::log(2.0)) return c;
    ++out.iterations;
    const auto unit = build(log_wr, gamma, 1.0);
    c.k_r = std::pow(10.0, (hf_ref - mean_gain_db(unit, 2.0 * w_c0, 10.0 * w_c0)) / 20.0);
    const auto s = build(log_wr, gamma, c.k_r);
    try {
      const auto bw = find_bandwidth(s, options.bandwidth_lo, options.bandwidth_hi);
      c.phase_margin = bw.phase_margin;
      c.omega_c = bw.omega_c;
    } catch (const BracketError&) {
      return c;
    }
    c.feasible = c.phase_margin >= ref_bw.phase_margin;
    c.objective = mean_gain_db(s, 0.05 * w_c0, 0.5 * w_c0);
    return c;
  };

  Candidate current = evaluate(log_wr0, sys.reset.gamma);
  const double steps[2] = {0.01, 0.01};
  auto record = [&](const Candidate& c) {
    out.gain_trail.push_back({clegg ? 0.0 : std::exp(c.log_wr), c.gamma, c.k_r,
                              c.objective, c.phase_margin});
  };
  record(current);

  // Each parameter keeps the direction of its first accepted move.
  int locked[2] = {0, 0};
  for (int sweep = 0; sweep < 50; ++sweep) {
    bool improved = false;
    for (int coord = clegg ? 1 : 0; coord < 2; ++coord) {
      for (int dir : {+1, -1}) {
        if (locked[coord] != 0 && dir != locked[coord]) continue;
        auto at = [&](double t) {
          return coord == 0
                     ? evaluate(current.log_wr + dir * t * steps[0], current.gamma)
                     : evaluate(current.log_wr, current.gamma + dir * t * steps[1]);
        };
        Candidate best = current;
        double last_ok = 0.0;
        for (int k = 1; k <= 40; ++k) {
          const Candidate c = at(k);
          if (!c.feasible) {
            // Walk back to the phase-margin boundary.
            double lo = last_ok;
            double hi = k;
            Candidate edge = best;
            for (int i = 0; i < 30; ++i) {
              const double mid = 0.5 * (lo + hi);
              const Candidate m = at(mid);
              if (m.feasible) {
                lo = mid;
                if (m.objective > edge.objective) edge = m;
              } else {
                hi = mid;
              }
            }
            if (edge.objective > best.objective) best = edge;
            break;
          }
          if (c.objective <= best.objective) break;
          best = c;
          last_ok = k;
        }
        if (best.objective > current.objective + 1e-9) {
          current = best;
          record(current);
          locked[coord] = dir;
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      out.converged = true;
      break;
    }
  }

  const auto final_sys = build(current.log_wr, current.gamma, current.k_r);
  out.element = final_sys.reset;
  out.k_r = current.k_r;
  out.bandwidth_hz = rad_to_hz(current.omega_c);
  out.phase_margin = current.phase_margin;
  out.low_gain_db = current.objective;
  out.gain_at_02wc_db =
      20.0 * std::log10(std::abs(open_loop_harmonic(final_sys, 1, 0.2 * w_c0)));
  out.achieved_lead = current.phase_margin - ref_bw.phase_margin;
  out.unchanged = out.gain_trail.size() == 1;
  return out;
}

}  // namespace rls
