#include <doctest.h>

#include "olg/params.hpp"

#include <cmath>

using namespace olg;

TEST_CASE("default calibration values") {
    ModelParams p = default_params();
    CHECK(p.beta == doctest::Approx(1.0094).epsilon(1e-12));
    CHECK(p.mu_phi == doctest::Approx(10.40));
    CHECK(p.delta_phi == doctest::Approx(1.900));
    CHECK(p.kappa == doctest::Approx(0.04850));
    CHECK(p.xi == doctest::Approx(0.3900));
    CHECK(p.nu == doctest::Approx(0.5570));
    CHECK(p.theta[0] == doctest::Approx(0.4088));
    CHECK(p.theta[1] == doctest::Approx(0.2480));
    CHECK(p.omega[0] == doctest::Approx(0.02130));
    CHECK(p.omega[1] == doctest::Approx(0.01900));
    CHECK(p.pi[0] == doctest::Approx(0.1130));
    CHECK(p.pi[1] == doctest::Approx(0.06200));
    CHECK(p.mu1 == doctest::Approx(-43.00));
    CHECK(p.mu2 == doctest::Approx(1.700));
    CHECK(p.rho == doctest::Approx(0.3310));
    CHECK(p.alpha == doctest::Approx(0.36));
    CHECK(p.psi == doctest::Approx(0.67));
    CHECK(p.delta == doctest::Approx(0.088));
    CHECK(p.tau_r == doctest::Approx(0.20315));
    CHECK(p.p60_prob == doctest::Approx(0.1372));
    CHECK(p.xbar[0] == 35);
    CHECK(p.xbar[1] == 29);
    CHECK(p.R == 35);
    CHECK(p.T_work_end == 55);
    CHECK(p.T_max == 80);
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("survival schedule respects the discounting bound") {
    ModelParams p = default_params();
    REQUIRE(static_cast<int>(p.survival.size()) == p.T_max);
    for (int t = 1; t <= p.T_max; ++t) CHECK(p.beta * p.survival_at(t) < 1.0);
    CHECK(p.survival.back() == 0.0);
    // survival falls with age once the cap stops binding
    CHECK(p.survival_at(79) < p.survival_at(60));
    CHECK(p.survival_at(60) < p.survival_at(40));
}

TEST_CASE("deduction schedule brackets, floor, and gross cap") {
    ModelParams p = default_params();
    const DeductionSchedule& d = p.fiscal_jpy.employment_deduction;
    CHECK(d(3000000.0) == doctest::Approx(1080000.0)); // 0.3*g + 180k
    CHECK(d(20000000.0) == doctest::Approx(2200000.0));
    CHECK(d(500000.0) == doctest::Approx(500000.0)); // floor binds, capped at gross
    CHECK(d(0.0) == 0.0);
    const DeductionSchedule& pd = p.fiscal_jpy.pension_deduction;
    CHECK(pd(2200000.0) == doctest::Approx(1200000.0));
}

TEST_CASE("progressive bracket tax") {
    ModelParams p = default_params();
    const BracketSchedule& b = p.fiscal_jpy.income_brackets;
    CHECK(b.tax(0.0) == 0.0);
    CHECK(b.tax(-5.0) == 0.0);
    CHECK(b.tax(1000000.0) == doctest::Approx(50000.0));
    CHECK(b.tax(4000000.0) == doctest::Approx(372500.0)); // spans three brackets
}

TEST_CASE("finalize converts statutory amounts into model units") {
    ModelParams p = default_params();
    CHECK(p.tax.basic_deduction == doctest::Approx(380000.0 / p.unit_scale));
    CHECK(p.b_floor == doctest::Approx(65008.0 * 12.0 / p.unit_scale));
    CHECK(p.ebar == doctest::Approx(620000.0 * 12.0 / p.unit_scale));
    CHECK(p.tax.earnings_test_threshold == doctest::Approx(470000.0 * 12.0 / p.unit_scale));
}

TEST_CASE("config round trip is exact") {
    Config cfg;
    cfg.params = default_params();
    cfg.regime = baseline_regime();
    std::string s1 = serialize_config(cfg);
    Config cfg2 = parse_config(s1);
    std::string s2 = serialize_config(cfg2);
    CHECK(s1 == s2);
}

TEST_CASE("config overrides and validation errors") {
    Config cfg = parse_config("[params]\nsigma = 3.0\n[grids]\nna = 12\n");
    CHECK(cfg.params.sigma == 3.0);
    CHECK(cfg.grids.na == 12);

    CHECK_THROWS_AS(parse_config("[params]\nsigma = 1.0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[params]\nsurvival = 0.9,0.8\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[grids]\nhours = 0.2,0.4\n"), ConfigError); // no h=0
    CHECK_THROWS_AS(parse_config("[regime]\ntheta_override_NL = 0.2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("garbage line without equals\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[params]\nbeta = not-a-number\n"), ConfigError);
}

TEST_CASE("pi magnitudes are normalized on load") {
    Config cfg = parse_config("[params]\npi_NL = -0.113\npi_L = -0.062\n");
    CHECK(cfg.params.pi[0] == doctest::Approx(0.113));
    CHECK(cfg.params.pi[1] == doctest::Approx(0.062));
}

TEST_CASE("regime overrides replace technology parameters") {
    ModelParams p = default_params();
    PolicyRegime r = baseline_regime();
    EffectiveTech t0 = effective_tech(p, r);
    CHECK(t0.theta[0] == p.theta[0]);
    r.theta_override = {{0.2480, 0.2480}};
    r.pi_override = {{-0.05, -0.02}};
    EffectiveTech t1 = effective_tech(p, r);
    CHECK(t1.theta[0] == doctest::Approx(0.2480));
    CHECK(t1.pi[0] == doctest::Approx(0.05)); // magnitudes
    CHECK(t1.omega[0] == p.omega[0]);
}
