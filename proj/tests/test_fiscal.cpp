#include <doctest.h>

#include "olg/fiscal.hpp"

using namespace olg;

namespace {
struct Fix {
    ModelParams p = default_params();
    PolicyRegime reg = baseline_regime();
};
} // namespace

TEST_CASE("pension benefit: floor plus earnings-related part") {
    Fix f;
    CHECK(pension_benefit(0.0, f.reg, f.p) == doctest::Approx(0.07091781818181818).epsilon(1e-14));
    CHECK(pension_benefit(0.3, f.reg, f.p) == doctest::Approx(0.1702178181818182).epsilon(1e-14));
    PolicyRegime low = f.reg;
    low.rho_multiplier = 0.9;
    CHECK(pension_benefit(0.3, low, f.p) ==
          doctest::Approx(0.07091781818181818 + 0.9 * 0.3310 * 0.3).epsilon(1e-14));
}

TEST_CASE("mean-earnings accrual with cap and freeze") {
    Fix f;
    CHECK(accrue_e(0.3, 4, 0.5, f.p) == doctest::Approx(0.35).epsilon(1e-14));
    // ebar = 620000*12/unit_scale caps the contribution
    double ebar = 620000.0 * 12.0 / f.p.unit_scale;
    CHECK(accrue_e(0.3, 4, 0.9, f.p) == doctest::Approx((0.9 + ebar) / 4.0).epsilon(1e-14));
    CHECK(accrue_e(0.3, 47, 0.9, f.p) == 0.3); // frozen after period 46
    CHECK(accrue_e(0.0, 1, 0.2, f.p) == doctest::Approx(0.2));
}

TEST_CASE("earnings test claws back half the excess") {
    Fix f;
    double thr = f.p.tax.earnings_test_threshold;
    CHECK(thr == doctest::Approx(0.5127272727272727).epsilon(1e-14));
    CHECK(earnings_test(0.2, 0.1, f.reg, f.p) == 0.2); // below threshold
    CHECK(earnings_test(0.2, 0.4, f.reg, f.p) ==
          doctest::Approx(0.15636363636363637).epsilon(1e-14));
    // floored at zero
    CHECK(earnings_test(0.1, 5.0, f.reg, f.p) == 0.0);
    PolicyRegime noet = f.reg;
    noet.earnings_test_enabled = false;
    CHECK(earnings_test(0.2, 5.0, noet, f.p) == 0.2);
}

TEST_CASE("income tax on labor earnings") {
    Fix f;
    // 0.3 model units = 3.3m yen: deduction 1.17m, ssc 471.9k,
    // taxable 1.2781m -> 63905 bracket tax + 127810 residence = 191715 yen
    CHECK(income_tax_amount(0.3, 0.0, f.reg, f.p) ==
          doctest::Approx(0.017428636363636365).epsilon(1e-13));
    CHECK(income_tax_amount(0.0, 0.0, f.reg, f.p) == 0.0);
}

TEST_CASE("income tax on pension income") {
    Fix f;
    // 0.2 model units = 2.2m yen: deduction 1.2m, minus basic 380k ->
    // 620k taxable, 31k bracket + 62k residence = 93k yen
    CHECK(income_tax_amount(0.0, 0.2, f.reg, f.p) ==
          doctest::Approx(0.008454545454545454).epsilon(1e-13));
    PolicyRegime exempt = f.reg;
    exempt.pension_tax_exempt = true;
    CHECK(income_tax_amount(0.0, 0.2, exempt, f.p) == 0.0);
    // a larger tax credit lowers the bill
    PolicyRegime credit = f.reg;
    credit.tax_credit_multiplier = 1.2;
    CHECK(income_tax_amount(0.3, 0.0, credit, f.p) < income_tax_amount(0.3, 0.0, f.reg, f.p));
}

TEST_CASE("disposable income assembles the flows") {
    Fix f;
    TaxFlows fl = post_tax_income_flows(0.0, 0.3, 0.0, f.reg, f.p);
    CHECK(fl.ssc == doctest::Approx(0.0429).epsilon(1e-14));
    CHECK(fl.income_tax == doctest::Approx(0.017428636363636365).epsilon(1e-13));
    CHECK(fl.disposable == doctest::Approx(0.23967136363636363).epsilon(1e-13));
    CHECK(fl.pension_paid == 0.0);

    // capital income taxed at the flat rate
    TaxFlows fr = post_tax_income_flows(0.1, 0.0, 0.0, f.reg, f.p);
    CHECK(fr.asset_tax == doctest::Approx(0.020315).epsilon(1e-14));
    CHECK(fr.disposable == doctest::Approx(0.1 - 0.020315).epsilon(1e-14));

    // the earnings test runs before the pension is taxed
    TaxFlows fp = post_tax_income_flows(0.0, 0.4, 0.2, f.reg, f.p);
    CHECK(fp.pension_paid == doctest::Approx(0.15636363636363637).epsilon(1e-13));
    CHECK(fp.income_tax ==
          doctest::Approx(income_tax_amount(0.4, fp.pension_paid, f.reg, f.p)).epsilon(1e-14));

    CHECK_THROWS_AS(post_tax_income_flows(-0.1, 0.0, 0.0, f.reg, f.p), std::invalid_argument);
}

TEST_CASE("net labor income matches the no-pension tax flows") {
    Fix f;
    CHECK(net_labor_income(0.3, f.reg, f.p) ==
          doctest::Approx(0.3 - 0.0429 - 0.017428636363636365).epsilon(1e-13));
    CHECK(net_labor_income(0.0, f.reg, f.p) == 0.0);
}

TEST_CASE("inheritance tax with exemption") {
    Fix f;
    double ex = 3.6e7 / f.p.unit_scale;
    CHECK(inheritance_tax(ex - 0.1, f.p) == 0.0);
    CHECK(inheritance_tax(4.0, f.p) == doctest::Approx(0.2 * (4.0 - ex)).epsilon(1e-14));
    CHECK(bequest_after_tax(4.0, f.p) == doctest::Approx(4.0 - 0.2 * (4.0 - ex)).epsilon(1e-14));
    CHECK(bequest_after_tax(0.5, f.p) == 0.5);
}
