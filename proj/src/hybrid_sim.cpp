#include "rls/hybrid_sim.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "rls/errors.hpp"

namespace rls {

namespace {

// Exogenous channels: r, d, n and the held corrections added to d and n by
// the clamp and the quantizer.
constexpr int kR = 0, kD = 1, kN = 2, kCd = 3, kCn = 4, kW = 5;

using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

int sign(double v) { return (v > 0.0) - (v < 0.0); }

struct Discrete {
  MatrixXd phi, f1, f2;
};

struct Composite {
  int n = 0;
  int ir = -1;  // reset state index
  MatrixXd A, B;
  RowVectorXd ex, ew, esx, esw, vx, vw, ux, uw, yx, yw;

  Discrete discretize(double h) const {
    const int m = n + 2 * kW;
    MatrixXd M = MatrixXd::Zero(m, m);
    M.topLeftCorner(n, n) = A;
    M.block(0, n, n, kW) = B;
    M.block(n, n + kW, kW, kW).setIdentity();
    const MatrixXd E = (M * h).exp();
    return {E.topLeftCorner(n, n), E.block(0, n, n, kW), E.block(0, n + kW, n, kW)};
  }
};

Composite assemble(const LoopConfig& cfg) {
  const auto p = realize(cfg.plant);
  const auto a = realize(cfg.c_alpha);
  const auto s = realize(cfg.shaping);
  const bool has_reset = cfg.reset.has_value();

  Composite c;
  const int np = p.order(), na = a.order(), nr = has_reset ? 1 : 0, ns = s.order();
  const int ip = 0, ia = np, ir = np + na, is = np + na + nr;
  c.n = np + na + nr + ns;
  c.ir = has_reset ? ir : -1;
  const int n = c.n;

  auto row = [n]() { return RowVectorXd::Zero(n).eval(); };
  auto wrow = []() { return RowVectorXd::Zero(kW).eval(); };

  c.ex = row();
  if (cfg.feedback) c.ex.segment(ip, np) = -p.C;
  c.ew = wrow();
  c.ew(kR) = 1.0;
  c.ew(kN) = -1.0;
  c.ew(kCn) = -1.0;

  RowVectorXd zx = row(), zw = wrow();
  if (has_reset) {
    zx(ir) = cfg.pre_gain;
  } else {
    zx = c.ex;
    zw = c.ew;
  }

  c.ux = row();
  c.ux.segment(ia, na) = a.C;
  c.ux += a.D * zx;
  c.uw = a.D * zw;

  RowVectorXd plant_w = c.uw;
  plant_w(kD) += 1.0;
  plant_w(kCd) += 1.0;

  c.yx = row();
  c.yx.segment(ip, np) = p.C;
  c.yx += p.D * c.ux;
  c.yw = p.D * plant_w;

  c.A = MatrixXd::Zero(n, n);
  c.B = MatrixXd::Zero(n, kW);
  c.A.block(ip, ip, np, np) = p.A;
  c.A.middleRows(ip, np) += p.B * c.ux;
  c.B.middleRows(ip, np) = p.B * plant_w;

  c.A.block(ia, ia, na, na) = a.A;
  c.A.middleRows(ia, na) += a.B * zx;
  c.B.middleRows(ia, na) = a.B * zw;

  if (has_reset) {
    c.A(ir, ir) = -cfg.reset->omega_alpha;
    c.A.row(ir) += cfg.reset->omega_beta * c.ex;
    c.B.row(ir) = cfg.reset->omega_beta * c.ew;
  }

  c.A.block(is, is, ns, ns) = s.A;
  c.A.middleRows(is, ns) += s.B * c.ex;
  c.B.middleRows(is, ns) = s.B * c.ew;

  c.esx = row();
  c.esx.segment(is, ns) = s.C;
  c.esx += s.D * c.ex;
  c.esw = s.D * c.ew;

  if (has_reset) {
    c.vx = row();
    c.vx(ir) = 1.0;
    c.vw = wrow();
  } else {
    c.vx = c.ex;
    c.vw = c.ew;
  }
  return c;
}

void check(const LoopConfig& cfg) {
  if (!(cfg.step > 0.0)) throw std::invalid_argument("sample step must be positive");
  if (!(cfg.duration > 0.0)) throw std::invalid_argument("duration must be positive");
  if (cfg.record_stride < 1) throw std::invalid_argument("record_stride must be >= 1");
  if (cfg.feedback && !cfg.plant.is_strictly_proper())
    throw std::invalid_argument("plant must be strictly proper in a closed loop");
  if (!cfg.c_alpha.is_proper()) throw std::invalid_argument("C_alpha must be proper");
  if (!cfg.shaping.is_proper()) throw std::invalid_argument("C_s must be proper");
  if (cfg.quantizer && !(*cfg.quantizer > 0.0))
    throw std::invalid_argument("quantizer resolution must be positive");
  if (cfg.clamp && !(*cfg.clamp > 0.0))
    throw std::invalid_argument("clamp level must be positive");
  if (cfg.reset &&
      !open_loop_stability(*cfg.reset, default_reset_interval_probes()))
    throw std::invalid_argument("reset element fails the open-loop stability check");
}

}  // namespace

SimTrace simulate(const LoopConfig& cfg) {
  check(cfg);
  const Composite sys = assemble(cfg);
  const double h = cfg.step;
  const long steps = std::lround(cfg.duration / h);
  const Discrete full = sys.discretize(h);
  const bool jumps = cfg.reset.has_value() && cfg.reset_enabled;

  SimTrace tr;
  tr.step = h * cfg.record_stride;
  const std::size_t cap = static_cast<std::size_t>(steps / cfg.record_stride + 2);
  for (auto* v : {&tr.t, &tr.r, &tr.e, &tr.es, &tr.v, &tr.u, &tr.d, &tr.n, &tr.y})
    v->reserve(cap);
  tr.reset.reserve(cap);

  VectorXd x = VectorXd::Zero(sys.n);
  VectorXd w(kW);
  auto exogenous = [&](double t, double cd, double cn) {
    VectorXd out(kW);
    out << cfg.r(t), cfg.d(t), cfg.n(t), cd, cn;
    return out;
  };

  // Held corrections for the clamp and the quantizer at the current sample.
  auto corrections = [&](const VectorXd& xs, const VectorXd& ws, double& cd,
                         double& cn) {
    cd = 0.0;
    cn = 0.0;
    if (cfg.quantizer) {
      const double y = sys.yx.dot(xs) + sys.yw.dot(ws);
      const double q = *cfg.quantizer;
      cn = q * std::round(y / q) - y;
    }
    if (cfg.clamp) {
      VectorXd wq = ws;
      wq(kCn) = cn;
      const double u = sys.ux.dot(xs) + sys.uw.dot(wq);
      const double lim = *cfg.clamp;
      cd = std::max(-lim, std::min(lim, u)) - u;
    }
  };

  auto record = [&](double t, const VectorXd& xs, const VectorXd& ws, bool ev) {
    tr.t.push_back(t);
    tr.r.push_back(ws(kR));
    tr.d.push_back(ws(kD));
    tr.n.push_back(ws(kN));
    tr.e.push_back(sys.ex.dot(xs) + sys.ew.dot(ws));
    tr.es.push_back(sys.esx.dot(xs) + sys.esw.dot(ws));
    tr.v.push_back(sys.vx.dot(xs) + sys.vw.dot(ws));
    tr.u.push_back(sys.ux.dot(xs) + sys.uw.dot(ws) + ws(kCd));
    tr.y.push_back(sys.yx.dot(xs) + sys.yw.dot(ws));
    tr.reset.push_back(ev ? 1 : 0);
  };

  double cd = 0.0, cn = 0.0;
  w = exogenous(0.0, 0.0, 0.0);
  corrections(x, w, cd, cn);
  w(kCd) = cd;
  w(kCn) = cn;
  record(0.0, x, w, false);

  // No reset at t = 0: the first nonzero sign of e_s only arms detection.
  int last_sign = sign(sys.esx.dot(x) + sys.esw.dot(w));
  bool pending_record_event = false;
  bool chatter_warned = false;

  for (long k = 0; k < steps; ++k) {
    const double t0 = k * h;
    const double t1 = (k + 1) * h;
    VectorXd w1 = exogenous(t1, cd, cn);
    const VectorXd slope = (w1 - w) / h;

    double tc = 0.0;
    VectorXd xc = x;
    int events = 0;
    bool step_event = false;
    while (true) {
      VectorXd x_end;
      if (tc == 0.0) {
        x_end = full.phi * xc + full.f1 * w + full.f2 * slope;
      } else {
        const Discrete part = sys.discretize(h - tc);
        const VectorXd wc = w + tc * slope;
        x_end = part.phi * xc + part.f1 * wc + part.f2 * slope;
      }
      const double e_end = sys.esx.dot(x_end) + sys.esw.dot(w1);
      const int s_end = sign(e_end);
      const bool crossing = jumps && last_sign != 0 && s_end != last_sign;
      if (crossing && events >= cfg.max_events_per_step) {
        ++tr.chatter_steps;
        if (!chatter_warned) {
          std::ostringstream os;
          os << "more than " << cfg.max_events_per_step
             << " reset events in one step near t = " << t0;
          tr.warnings.push_back(os.str());
          chatter_warned = true;
        }
        last_sign = s_end;
        x = x_end;
        break;
      }
      if (!crossing) {
        if (s_end != 0) last_sign = s_end;
        x = x_end;
        break;
      }
      step_event = true;
      ++events;
      if (s_end == 0) {
        x_end(sys.ir) *= cfg.reset->gamma;
        tr.reset_instants.push_back(t1);
        last_sign = 0;
        x = x_end;
        break;
      }
      const VectorXd wc = w + tc * slope;
      const double e_c = sys.esx.dot(xc) + sys.esw.dot(wc);
      double frac = 0.0;
      if (sign(e_c) != s_end && e_c != e_end) frac = e_c / (e_c - e_end);
      frac = std::max(0.0, std::min(1.0, frac));
      double tau = tc + frac * (h - tc);
      if (tau - tc < 1e-12) tau = tc;
      if (h - tau < 1e-12) tau = h;

      VectorXd xt;
      if (tau == h) {
        xt = x_end;
      } else if (tau == tc) {
        xt = xc;
      } else {
        const Discrete part = sys.discretize(tau - tc);
        xt = part.phi * xc + part.f1 * wc + part.f2 * slope;
      }
      xt(sys.ir) *= cfg.reset->gamma;
      tr.reset_instants.push_back(t0 + tau);
      last_sign = s_end;
      if (tau == h) {
        x = xt;
        break;
      }
      tc = tau;
      xc = xt;
    }

    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > cfg.divergence_limit) {
      std::ostringstream os;
      os << "simulation diverged at t = " << t1 << " s";
      throw DivergenceError(t1, os.str());
    }

    w = w1;
    w(kCd) = 0.0;
    w(kCn) = 0.0;
    corrections(x, w, cd, cn);
    w(kCd) = cd;
    w(kCn) = cn;
    pending_record_event = pending_record_event || step_event;
    if ((k + 1) % cfg.record_stride == 0) {
      record(t1, x, w, pending_record_event);
      pending_record_event = false;
    }
  }
  return tr;
}

}  // namespace rls
