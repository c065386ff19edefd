#include <doctest.h>

#include <cmath>
#include <random>

#include "rls/angles.hpp"
#include "rls/hosidf.hpp"
#include "rls/shaping_bounds.hpp"

using namespace rls;

TEST_CASE("lemma interval examples") {
  const auto a = lemma1_interval(clegg_integrator(-0.3), hz_to_rad(80.0));
  REQUIRE(a.size() == 2);
  CHECK(a[0].lo == 0.0);
  CHECK(deg(a[0].hi) == doctest::Approx(67.08).epsilon(1e-4));
  CHECK_FALSE(a[0].lo_closed);
  CHECK_FALSE(a[0].hi_closed);
  CHECK(deg(a[1].lo) == doctest::Approx(-180.0));
  CHECK(deg(a[1].hi) == doctest::Approx(67.08 - 180.0).epsilon(1e-4));
  const auto b = lemma1_interval(fore(160.2, -0.3), hz_to_rad(50.0));
  CHECK(deg(b[0].hi) == doctest::Approx(27.02).epsilon(1e-4));
  CHECK(deg(lemma1_upper_bound(clegg_integrator(0.0), 1.0)) ==
        doctest::Approx(90.0 - deg(std::atan(kPi / 4.0))));
  CHECK_FALSE(contains(a, 0.0));
  CHECK(contains(a, rad(15.5)));
}

TEST_CASE("eta sets") {
  const auto e = theorem1_bounds(0.1);
  CHECK(deg(e.eta1.hi) == doctest::Approx(25.84).epsilon(1e-4));
  CHECK(e.eta1.lo == -e.eta1.hi);
  CHECK(deg(e.eta2.lo) == doctest::Approx(154.16).epsilon(1e-4));
  CHECK(e.eta2.hi == kPi);
  CHECK(e.eta2.hi_closed);
  CHECK(e.eta3.lo_closed);
  CHECK(theorem1_bounds(1e-9).eta1.hi < 1e-3);
  CHECK(deg(theorem1_bounds(0.5).eta1.hi) == doctest::Approx(60.0));
  CHECK_THROWS(theorem1_bounds(0.0));
  CHECK_THROWS(theorem1_bounds(1.0));
}

TEST_CASE("property: eta endpoints are exact arccos values") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> s(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 1000; ++i) {
    const double sigma = s(rng);
    const auto e = theorem1_bounds(sigma);
    CHECK(std::cos(e.eta1.hi) == doctest::Approx(1.0 - sigma).epsilon(1e-14).scale(1.0));
    CHECK(std::cos(e.eta2.lo) == doctest::Approx(-1.0 + sigma).epsilon(1e-14).scale(1.0));
  }
}

TEST_CASE("beta sets") {
  const auto el = fore(100.0, 0.0);
  const auto at_wa = theorem2_bounds(el, 0.1, 100.0);
  CHECK(at_wa.theta_alpha == 1.0);
  CHECK(at_wa.theta_gamma == doctest::Approx(0.9 / std::sqrt(2.0)));
  CHECK(deg(at_wa.beta1_lo) == doctest::Approx(-5.48).epsilon(2e-3));
  CHECK_FALSE(at_wa.saturated);

  // Far above w_alpha the theta_eta endpoint saturates and beta1 approaches
  // the lower half of eta1.
  const auto far = theorem2_bounds(el, 0.1, 1e7);
  CHECK(far.saturated);
  CHECK(far.beta1_hi == doctest::Approx(std::atan(1e-5)));
  CHECK(deg(far.beta1_lo) == doctest::Approx(-25.84).epsilon(1e-3));

  // theta_gamma > 1 far below w_alpha is impossible since theta_gamma < 1
  // always; emptiness only arises for sigma near zero.
  CHECK_FALSE(theorem2_bounds(el, 0.1, 1.0).empty);
}

TEST_CASE("kappa examples") {
  const auto ci = clegg_integrator(0.0);
  CHECK(kappa_alpha(ci, 0.0, 10.0) == 1.0);
  CHECK(kappa_alpha(ci, rad(25.84), 10.0) == doctest::Approx(0.9).epsilon(1e-4));
  const auto f = fore(50.0, 0.0);
  CHECK(kappa_alpha(f, kPi / 4, 50.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(kappa_alpha_rewritten(f, kPi / 4, 50.0) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("property: kappa forms and the Delta identity agree") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> a(-kPi, kPi), lw(0.0, 4.0);
  for (int i = 0; i < 10000; ++i) {
    const double wa = std::pow(10.0, lw(rng)), w = std::pow(10.0, lw(rng));
    const auto el = fore(wa, 0.0);
    const double cs = a(rng);
    const double k = kappa_alpha(el, cs, w);
    CHECK(k >= 0.0);
    CHECK(std::abs(kappa_alpha_rewritten(el, cs, w) - k) <= 1e-12 * std::max(1.0, k));
    CHECK(std::abs(std::abs(delta_alpha(el, cs, w)) - k) <= 1e-12 * std::max(1.0, k));
  }
}

TEST_CASE("property: membership is equivalent to the gain band") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> a(-kPi, kPi), s(0.01, 0.99), lw(-2.0, 2.0), u(0.0, 1.0);
  int inside = 0, outside = 0;
  for (int i = 0; i < 10000; ++i) {
    const double sigma = s(rng);
    const bool clegg = u(rng) < 0.25;
    const double theta_alpha = clegg ? 0.0 : std::pow(10.0, lw(rng));
    const double w = 100.0;
    const auto el = clegg ? clegg_integrator(0.0) : fore(theta_alpha * w, 0.0);
    const auto set = off_bandwidth_bounds(el, sigma, w);
    const double cs = a(rng);
    const double k = kappa_alpha(el, cs, w);
    // Skip draws within rounding distance of an endpoint.
    if (std::abs(k - (1.0 - sigma)) < 1e-9 || std::abs(k - (1.0 + sigma)) < 1e-9) continue;
    const bool in_band = k > 1.0 - sigma && k < 1.0 + sigma;
    CHECK(contains(set, cs) == in_band);
    (in_band ? inside : outside)++;
  }
  CHECK(inside > 1000);
  CHECK(outside > 1000);
}

TEST_CASE("property: bound sets are closed under pi translation") {
  std::mt19937_64 rng(44);
  std::uniform_real_distribution<double> a(-kPi, kPi), s(0.01, 0.99), lw(-2.0, 2.0);
  for (int i = 0; i < 5000; ++i) {
    const double sigma = s(rng);
    const auto el = (i % 4 == 0) ? clegg_integrator(0.0) : fore(100.0 * std::pow(10.0, lw(rng)), 0.0);
    const auto set = off_bandwidth_bounds(el, sigma, 100.0);
    const double cs = a(rng);
    if (contains(set, cs)) CHECK(contains(set, principal(cs + kPi)));
  }
}

TEST_CASE("property: lemma interval gives positive lead") {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> g(-0.9, 0.9), lw(1.0, 3.0), u(0.001, 0.999);
  for (int i = 0; i < 2000; ++i) {
    const bool clegg = i % 2 == 0;
    const double w_c = std::pow(10.0, lw(rng));
    const auto el = clegg ? clegg_integrator(g(rng)) : fore(std::pow(10.0, lw(rng)), g(rng));
    const double cs = u(rng) * lemma1_upper_bound(el, w_c);
    CHECK(phase_lead(el, cs, w_c) > 0.0);
    CHECK(phase_lead(el, cs - kPi, w_c) > 0.0);
  }
}

TEST_CASE("wrap_interval") {
  const auto split = wrap_interval(rad(170.0), rad(200.0), false, true);
  REQUIRE(split.size() == 2);
  CHECK(contains(split, rad(175.0)));
  CHECK(contains(split, rad(-165.0)));
  CHECK_FALSE(contains(split, rad(-155.0)));
  CHECK(wrap_interval(1.0, 0.5, false, false).empty());
}

TEST_CASE("filter validation") {
  ShapedOpenLoop sys;
  sys.reset = clegg_integrator(-0.3);
  sys.pre_gain = 0.13;
  sys.c_alpha = make_zero(1.6e3) * make_pid(13.1, 50.3, 213.6, 1.2e3) * make_lowpass(5e3);
  sys.plant = spider_stage_plant();
  sys.shaping = make_shaping_filter(950, 3000, 1e4);
  const auto grid = default_analysis_grid();
  CHECK(grid[0] == doctest::Approx(hz_to_rad(1.0)));
  const auto ok = validate_filter(sys, 0.1, grid, 1.5, hz_to_rad(80.0));
  CHECK(ok.bandwidth_ok);
  CHECK(ok.violations.empty());
  CHECK(ok.phase_ok());
  CHECK(ok.rows.size() == grid.size());

  const auto flat = validate_filter(sys.unshaped(), 0.1, grid, 1.5, hz_to_rad(80.0));
  CHECK_FALSE(flat.bandwidth_ok);

  sys.shaping = RationalTransferFunction({0.0, 1.0}, {1.0, 1e-9});  // 90 degree lead
  const auto lead90 = validate_filter(sys, 0.1, grid, 1.5, hz_to_rad(80.0));
  CHECK(lead90.violations.size() == grid.size());

  const auto set = build_phase_bound_set(clegg_integrator(-0.3), 0.1, hz_to_rad(80.0), grid);
  CHECK(set.off_bandwidth.size() == grid.size());
  CHECK(set.at_bandwidth.size() == 2);
}
