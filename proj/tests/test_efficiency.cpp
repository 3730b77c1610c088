#include <doctest.h>

#include "olg/efficiency.hpp"

#include <cmath>

using namespace olg;

namespace {
EffectiveTech base_tech() {
    ModelParams p = default_params();
    return effective_tech(p, baseline_regime());
}
} // namespace

TEST_CASE("occupation productivity prices eta only in the nonlinear job") {
    CHECK(occ_productivity(0.16, Occ::NL) == doctest::Approx(1.1735108709918103).epsilon(1e-14));
    CHECK(occ_productivity(0.16, Occ::L) == 1.0);
    CHECK(occ_productivity(-0.5, Occ::L) == 1.0);
    CHECK_THROWS_AS(occ_productivity(0.0, Occ::NW), std::invalid_argument);
}

TEST_CASE("hours factor is a fixed power of hours") {
    EffectiveTech tech = base_tech();
    CHECK(hours_factor(0.5, 0, tech) == doctest::Approx(0.37662482432663186).epsilon(1e-14));
    CHECK(hours_factor(40.0 / 105.0, 1, tech) ==
          doctest::Approx(0.2998655839408545).epsilon(1e-14));
    CHECK(hours_factor(1.0, 0, tech) == 1.0);
    // convexity: working half the hours yields less than half the input
    CHECK(hours_factor(0.5, 0, tech) < 0.5);
    CHECK(hours_factor(0.5, 1, tech) < 0.5);
    // the nonlinear occupation penalizes part-time harder
    CHECK(hours_factor(0.5, 0, tech) < hours_factor(0.5, 1, tech));
}

TEST_CASE("experience premium applies only when staying") {
    ModelParams p = default_params();
    EffectiveTech tech = base_tech();
    CHECK(experience_factor(10, Occ::NL, Occ::NL, p, tech) == doctest::Approx(1.213));
    CHECK(experience_factor(10, Occ::L, Occ::L, p, tech) == doctest::Approx(1.19));
    CHECK(experience_factor(10, Occ::NL, Occ::L, p, tech) == 1.0);
    CHECK(experience_factor(10, Occ::NL, Occ::NW, p, tech) == 1.0);
    // caps bind
    CHECK(experience_factor(35, Occ::L, Occ::L, p, tech) ==
          experience_factor(29, Occ::L, Occ::L, p, tech));
    CHECK(experience_factor(35, Occ::NL, Occ::NL, p, tech) ==
          doctest::Approx(1.0 + 0.0213 * 35));
}

TEST_CASE("age penalty starts after R and flattens at rbar") {
    ModelParams p = default_params();
    EffectiveTech tech = base_tech();
    CHECK(age_penalty(35, 0, p, tech) == 1.0);
    CHECK(age_penalty(1, 0, p, tech) == 1.0);
    CHECK(age_penalty(37, 0, p, tech) == doctest::Approx(0.7977181016656743).epsilon(1e-14));
    CHECK(age_penalty(37, 1, p, tech) == doctest::Approx(std::exp(-0.062 * 2)).epsilon(1e-14));
    CHECK(age_penalty(40, 0, p, tech) == age_penalty(37, 0, p, tech)); // rbar = 37
    CHECK(age_penalty(55, 1, p, tech) == age_penalty(37, 1, p, tech));
}

TEST_CASE("effective labor composes the four factors") {
    ModelParams p = default_params();
    EffectiveTech tech = base_tech();
    double got = effective_labor(0.5, 0.16, 10, Occ::NL, Occ::NL, 37, p, tech);
    CHECK(got == doctest::Approx(0.42766755836272025).epsilon(1e-13));
    CHECK(effective_labor(0.0, 0.16, 10, Occ::NL, Occ::NL, 37, p, tech) == 0.0);
}

TEST_CASE("experience update") {
    CHECK(experience_update(4, Occ::NL, Occ::NL) == 5);
    CHECK(experience_update(35, Occ::L, Occ::L) == 35);
    CHECK(experience_update(12, Occ::NL, Occ::L) == 0);
    CHECK(experience_update(12, Occ::L, Occ::NW) == 0);
    CHECK(experience_update(12, Occ::NW, Occ::NW) == 0);
    CHECK(experience_update(0, Occ::NW, Occ::NL) == 0); // first year in a job
}

TEST_CASE("regime overrides flow into the wage factors") {
    ModelParams p = default_params();
    PolicyRegime reg = baseline_regime();
    reg.theta_override = {{0.2480, 0.2480}};
    EffectiveTech tech = effective_tech(p, reg);
    CHECK(hours_factor(0.5, 0, tech) == hours_factor(0.5, 1, tech));
}
