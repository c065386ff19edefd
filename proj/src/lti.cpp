#include "rls/lti.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "rls/angles.hpp"
#include "rls/errors.hpp"

namespace rls {

namespace {

void trim(Polynomial& p) {
  while (p.size() > 1 && p.back() == 0.0) p.pop_back();
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream os;
    os << name << " must be a finite positive frequency, got " << v;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

Complex evaluate(const Polynomial& p, Complex s) {
  Complex acc{0.0, 0.0};
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial multiply(const Polynomial& a, const Polynomial& b) {
  if (a.empty() || b.empty()) return {};
  Polynomial out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

RationalTransferFunction::RationalTransferFunction(Polynomial num,
                                                   Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (num_.empty()) num_ = {0.0};
  for (double c : num_)
    if (!std::isfinite(c))
      throw std::invalid_argument("numerator coefficient is not finite");
  for (double c : den_)
    if (!std::isfinite(c))
      throw std::invalid_argument("denominator coefficient is not finite");
  trim(num_);
  trim(den_);
  if (den_.empty() || den_.back() == 0.0)
    throw std::invalid_argument("denominator must have a nonzero leading coefficient");
}

Complex RationalTransferFunction::operator()(Complex s) const {
  return evaluate(num_, s) / evaluate(den_, s);
}

std::vector<Complex> RationalTransferFunction::poles() const {
  const int n = den_degree();
  if (n <= 0) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -den_[i] / den_[n];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<Complex> roots;
  for (int i = 0; i < n; ++i) roots.push_back(solver.eigenvalues()[i]);
  return roots;
}

Complex eval_response(const RationalTransferFunction& tf, double omega) {
  if (!(omega >= 0.0))
    throw std::invalid_argument("frequency must be non-negative");
  const Complex s{0.0, omega};
  const Complex d = evaluate(tf.den(), s);
  double scale = 0.0;
  double wk = 1.0;
  for (double c : tf.den()) {
    scale += std::abs(c) * wk;
    wk *= omega;
  }
  if (std::abs(d) <= 1e-14 * scale) {
    std::ostringstream os;
    os << "transfer function has a pole on the imaginary axis at omega = "
       << omega << " rad/s";
    throw PoleOnAxisError(omega, os.str());
  }
  return evaluate(tf.num(), s) / d;
}

double phase(const RationalTransferFunction& tf, double omega) {
  return principal(std::arg(eval_response(tf, omega)));
}

double magnitude(const RationalTransferFunction& tf, double omega) {
  return std::abs(eval_response(tf, omega));
}

RationalTransferFunction series(const RationalTransferFunction& a,
                                const RationalTransferFunction& b) {
  return {multiply(a.num(), b.num()), multiply(a.den(), b.den())};
}

RationalTransferFunction operator*(const RationalTransferFunction& a,
                                   const RationalTransferFunction& b) {
  return series(a, b);
}

RationalTransferFunction operator*(double k, const RationalTransferFunction& a) {
  Polynomial num = a.num();
  for (double& c : num) c *= k;
  return {num, a.den()};
}

bool is_hurwitz(const RationalTransferFunction& tf) {
  const auto roots = tf.poles();
  return std::all_of(roots.begin(), roots.end(),
                     [](Complex p) { return p.real() < 0.0; });
}

bool is_marginally_stable(const RationalTransferFunction& tf) {
  // Count exact factors of s first; companion eigenvalues of repeated roots
  // at the origin scatter and cannot be classified reliably.
  std::size_t origin = 0;
  while (origin < tf.den().size() && tf.den()[origin] == 0.0) ++origin;
  if (origin > 1) return false;
  Polynomial reduced(tf.den().begin() + static_cast<long>(origin),
                     tf.den().end());
  const RationalTransferFunction rest({1.0}, reduced);
  return is_hurwitz(rest);
}

RationalTransferFunction make_integrator() { return {{1.0}, {0.0, 1.0}}; }

RationalTransferFunction make_pi(double w_i, int order) {
  if (order < 0) throw std::invalid_argument("PI order must be non-negative");
  if (order == 0) return RationalTransferFunction::unity();
  require_positive(w_i, "w_i");
  RationalTransferFunction out = RationalTransferFunction::unity();
  for (int k = 0; k < order; ++k)
    out = out * RationalTransferFunction({w_i, 1.0}, {0.0, 1.0});
  return out;
}

RationalTransferFunction make_lead(double w_d, double w_t) {
  require_positive(w_d, "w_d");
  require_positive(w_t, "w_t");
  return {{1.0, 1.0 / w_d}, {1.0, 1.0 / w_t}};
}

RationalTransferFunction make_lowpass(double w_f) {
  require_positive(w_f, "w_f");
  return {{1.0}, {1.0, 1.0 / w_f}};
}

RationalTransferFunction make_zero(double w_z) {
  require_positive(w_z, "w_z");
  return {{w_z, 1.0}, {1.0}};
}

RationalTransferFunction make_pid(double k_p, double w_i, double w_d,
                                  double w_t) {
  if (!(k_p > 0.0)) throw std::invalid_argument("k_p must be positive");
  return k_p * (make_pi(w_i, 1) * make_lead(w_d, w_t));
}

RationalTransferFunction make_pi2d(double k_p, double w_i, double w_d,
                                   double w_t, double w_f) {
  if (!(k_p > 0.0)) throw std::invalid_argument("k_p must be positive");
  return k_p * (make_pi(w_i, 2) * make_lead(w_d, w_t) * make_lowpass(w_f));
}

RationalTransferFunction make_shaping_filter(double w_zeta, double w_eta,
                                             double w_psi) {
  require_positive(w_zeta, "w_zeta");
  require_positive(w_eta, "w_eta");
  require_positive(w_psi, "w_psi");
  if (!(w_psi > w_eta)) {
    std::ostringstream os;
    os << "shaping filter requires w_psi > w_eta (got w_psi = " << w_psi
       << ", w_eta = " << w_eta << ")";
    throw std::invalid_argument(os.str());
  }
  return make_lead(w_zeta, w_eta) * make_lowpass(w_psi);
}

RationalTransferFunction spider_stage_plant() {
  return {{6.615e5}, {5.837e5, 279.4, 83.57}};
}

FrequencyGrid::FrequencyGrid(std::vector<double> points)
    : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("frequency grid is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i]) || !(points_[i] > 0.0))
      throw std::invalid_argument("grid frequencies must be finite and > 0");
    if (i > 0 && !(points_[i] > points_[i - 1]))
      throw std::invalid_argument("grid must be strictly increasing");
  }
}

FrequencyGrid FrequencyGrid::logspace(double w_lo, double w_hi,
                                      int points_per_decade) {
  require_positive(w_lo, "grid lower bound");
  require_positive(w_hi, "grid upper bound");
  if (!(w_hi > w_lo)) throw std::invalid_argument("grid bounds out of order");
  if (points_per_decade < 1)
    throw std::invalid_argument("points per decade must be >= 1");
  const double decades = std::log10(w_hi / w_lo);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * points_per_decade)) + 1);
  std::vector<double> pts(n);
  const double l0 = std::log10(w_lo);
  for (int i = 0; i < n; ++i)
    pts[i] = std::pow(10.0, l0 + decades * i / (n - 1));
  pts.front() = w_lo;
  pts.back() = w_hi;
  return FrequencyGrid(std::move(pts));
}

Complex StateSpaceRealization::response(Complex s) const {
  const int n = order();
  if (n == 0) return D;
  Eigen::MatrixXcd M = s * Eigen::MatrixXcd::Identity(n, n) - A.cast<Complex>();
  Eigen::VectorXcd x = M.partialPivLu().solve(B.cast<Complex>());
  return (C.cast<Complex>() * x)(0) + D;
}

StateSpaceRealization realize(const RationalTransferFunction& tf) {
  if (!tf.is_proper())
    throw std::invalid_argument("cannot realize an improper transfer function");
  const int n = tf.den_degree();
  const double lead = tf.den()[n];
  std::vector<double> a(n + 1), b(n + 1, 0.0);
  for (int i = 0; i <= n; ++i) a[i] = tf.den()[i] / lead;
  for (int i = 0; i <= tf.num_degree(); ++i) b[i] = tf.num()[i] / lead;

  StateSpaceRealization ss;
  ss.D = b[n];
  ss.A = Eigen::MatrixXd::Zero(n, n);
  ss.B = Eigen::VectorXd::Zero(n);
  ss.C = Eigen::RowVectorXd::Zero(n);
  if (n == 0) return ss;
  for (int i = 0; i + 1 < n; ++i) ss.A(i, i + 1) = 1.0;
  for (int i = 0; i < n; ++i) {
    ss.A(n - 1, i) = -a[i];
    ss.C(i) = b[i] - a[i] * b[n];
  }
  ss.B(n - 1) = 1.0;
  return ss;
}

GainCapReport check_gain_cap(const RationalTransferFunction& cs, double w_c,
                             double delta_n) {
  require_positive(w_c, "w_c");
  if (!(delta_n > 1.0 && delta_n < 2.0))
    throw std::invalid_argument("delta_n must lie in (1, 2)");
  GainCapReport report;
  for (double w : FrequencyGrid::logspace(w_c, 1000.0 * w_c)) {
    const double g = magnitude(cs, w);
    if (g > report.worst_gain) {
      report.worst_gain = g;
      report.worst_omega = w;
    }
  }
  report.passes = report.worst_gain < delta_n;
  return report;
}

}  // namespace rls
