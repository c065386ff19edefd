#include <doctest.h>

#include <cmath>
#include <random>

#include "rls/angles.hpp"
#include "rls/errors.hpp"
#include "rls/hosidf.hpp"
#include "rls/shaping_bounds.hpp"

using namespace rls;

namespace {

GeneralizedFore random_element(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> g(-0.9, 0.9), lw(1.0, 3.0), u(0.0, 1.0);
  const double wa = u(rng) < 0.3 ? 0.0 : std::pow(10.0, lw(rng));
  return build_generalized_fore(wa, wa > 0.0 ? wa : 1.0, g(rng));
}

}  // namespace

TEST_CASE("Clegg integrator describing function") {
  const auto ci = clegg_integrator(0.0);
  for (double w : {1.0, 37.0, 500.0}) {
    const Complex c1 = hosidf(ci, 0.0, 1, w);
    const Complex expect = (1.0 + Complex(0.0, 4.0 / kPi)) / Complex(0.0, w);
    CHECK(std::abs(c1 - expect) < 1e-12 * std::abs(expect));
    CHECK(deg(std::arg(c1)) == doctest::Approx(-38.1460).epsilon(1e-5));
  }
  const auto in = hosidf_intermediates(ci, 0.0, 10.0);
  CHECK(in.theta == 1.0);
  CHECK(in.omega_gain == 2.0);
  CHECK(in.lambda == 100.0);
}

TEST_CASE("even orders vanish and bad arguments throw") {
  const auto el = fore(160.2, -0.3);
  for (int n : {2, 4, 10}) CHECK(hosidf(el, 0.3, n, 100.0) == Complex(0.0, 0.0));
  CHECK_THROWS(hosidf(el, 0.0, 1, 0.0));
  CHECK_THROWS(hosidf(el, 0.0, 0, 1.0));
}

TEST_CASE("phase at bandwidth examples") {
  const double w_c = hz_to_rad(80.0);
  const auto ci = clegg_integrator(-0.3);
  CHECK(deg(phase_at_bandwidth(ci, 0.0, w_c)) == doctest::Approx(-22.9).epsilon(0.005));
  CHECK(deg(unshaped_phase_closed_form(ci, w_c)) ==
        doctest::Approx(deg(std::atan(-kPi * 0.7 / (4.0 * 1.3)))));
  const double cs = phase(make_shaping_filter(950, 3000, 1e4), w_c);
  CHECK(deg(phase_at_bandwidth(ci, cs, w_c)) == doctest::Approx(-10.1).epsilon(0.02));
  CHECK(phase_lead(ci, cs, w_c) == doctest::Approx(12.8).epsilon(0.015));
  CHECK(phase_lead(ci, 0.0, w_c) == 0.0);
  CHECK(phase_lead(fore(160.2, -0.3), rad(9.2), hz_to_rad(50.0)) ==
        doctest::Approx(5.9).epsilon(0.03));
}

TEST_CASE("max phase lead") {
  const auto m1 = max_phase_lead(clegg_integrator(-0.3), hz_to_rad(80.0));
  CHECK(m1.max_cs_phase == doctest::Approx(67.08).epsilon(1e-4));
  CHECK(m1.sup_lead > 12.8);
  CHECK(m1.argmax_cs_phase > 0.0);
  CHECK(m1.argmax_cs_phase < m1.max_cs_phase);
  const auto m2 = max_phase_lead(fore(160.2, -0.3), hz_to_rad(50.0));
  CHECK(m2.max_cs_phase == doctest::Approx(27.02).epsilon(1e-4));
  const auto m3 = max_phase_lead(clegg_integrator(0.999), 10.0);
  CHECK(m3.max_cs_phase < 0.1);
}

TEST_CASE("open-loop harmonics") {
  ShapedOpenLoop sys;
  sys.reset = fore(160.2, -0.3);
  CHECK(open_loop_harmonic(sys, 1, 300.0) == hosidf(sys.reset, 0.0, 1, 300.0));
  sys.plant = spider_stage_plant();
  sys.c_alpha = make_lead(336.8, 3.14e4);
  sys.pre_gain = 2.0;
  const double w = 300.0;
  const Complex expect = 2.0 * hosidf(sys.reset, 0.0, 3, w) *
                         eval_response(sys.c_alpha, 3 * w) *
                         eval_response(sys.plant, 3 * w);
  CHECK(std::abs(open_loop_harmonic(sys, 3, w) - expect) < 1e-12 * std::abs(expect));
  const auto spec = open_loop_spectrum(sys, FrequencyGrid::logspace(10, 1e3, 10), {1, 3, 5});
  CHECK(spec.values.size() == 3);
  CHECK(spec.at_order(5).size() == spec.grid.size());
}

TEST_CASE("bandwidth search") {
  const auto loop = RationalTransferFunction({100.0}, {0.0, 1.0});
  const auto r = find_bandwidth(loop, 1.0, 1e4);
  CHECK(r.omega_c == doctest::Approx(100.0).epsilon(1e-9));
  CHECK(r.phase_margin == doctest::Approx(90.0));
  CHECK(std::abs(r.gain_db) < 1e-6);
  CHECK_THROWS_AS(find_bandwidth(RationalTransferFunction::unity(), 1.0, 1e4), BracketError);
}

TEST_CASE("property: first-harmonic phase matches the describing function") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0), lw(1.0, 3.5);
  int closed_form_checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto el = random_element(rng);
    const double w_c = std::pow(10.0, lw(rng));
    const double cs = u(rng) * lemma1_upper_bound(el, w_c);
    const double exact = std::arg(hosidf(el, cs, 1, w_c));
    CHECK(std::abs(principal(phase_at_bandwidth(el, cs, w_c) - exact)) < 1e-9);
    const auto in = hosidf_intermediates(el, cs, w_c);
    if (std::real(1.0 + in.psi) > 0.0) {
      CHECK(std::abs(principal(phase_at_bandwidth_closed_form(el, cs, w_c) - exact)) < 1e-9);
      ++closed_form_checked;
    }
  }
  CHECK(closed_form_checked > 500);
}

TEST_CASE("property: pi-periodicity and intermediate ranges") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> a(-kPi / 2, kPi / 2), lw(1.0, 4.0);
  for (int i = 0; i < 500; ++i) {
    const auto el = random_element(rng);
    const double cs = a(rng), w = std::pow(10.0, lw(rng));
    // Higher orders can be tiny, so compare against the first-harmonic scale.
    const double scale = std::abs(hosidf(el, cs, 1, w));
    for (int n : {1, 3, 5, 7}) {
      const Complex c0 = hosidf(el, cs, n, w);
      const Complex c1 = hosidf(el, cs + kPi, n, w);
      const Complex c2 = hosidf(el, cs - kPi, n, w);
      CHECK(std::abs(c1 - c0) <= 1e-12 * scale);
      CHECK(std::abs(c2 - c0) <= 1e-12 * scale);
    }
    const auto in = hosidf_intermediates(el, cs, w);
    CHECK(in.theta > 0.0);
    CHECK(in.theta <= 1.0);
    CHECK(in.omega_gain > 0.0);
  }
}

TEST_CASE("property: only the shaping phase matters") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> lw(1.0, 3.0), k(0.01, 100.0);
  for (int i = 0; i < 200; ++i) {
    ShapedOpenLoop sys;
    sys.reset = random_element(rng);
    const double z = std::pow(10.0, lw(rng));
    sys.shaping = make_shaping_filter(z, 2.0 * z, 20.0 * z);
    ShapedOpenLoop scaled = sys;
    scaled.shaping = k(rng) * sys.shaping;
    const double w = std::pow(10.0, lw(rng));
    for (int n : {1, 3, 5}) {
      const Complex a = open_loop_harmonic(sys, n, w);
      CHECK(std::abs(open_loop_harmonic(scaled, n, w) - a) <= 1e-12 * std::abs(a));
    }
  }
}

TEST_CASE("property: odd harmonics decay with order") {
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> a(-kPi / 2, kPi / 2), lw(0.0, 4.0);
  for (int i = 0; i < 300; ++i) {
    const auto el = random_element(rng);
    const double cs = a(rng), w = std::pow(10.0, lw(rng));
    double prev = std::abs(hosidf(el, cs, 3, w));
    for (int n = 5; n <= kDefaultMaxOrder; n += 2) {
      const double cur = std::abs(hosidf(el, cs, n, w));
      CHECK(cur <= prev);
      prev = cur;
    }
  }
}
