#pragma once

#include "olg/params.hpp"

#include <algorithm>
#include <cmath>

namespace olg {

// Annual pension benefit before the earnings test: national floor plus the
// earnings-related component.
inline double pension_benefit(double e, const PolicyRegime& regime, const ModelParams& p) {
    return p.b_floor + regime.rho_multiplier * p.rho * e;
}

// Mean-past-earnings update. lambda is today's post-tax labor income; the
// running mean is frozen after pension_e_update_end.
inline double accrue_e(double e_prev, int t, double lambda, const ModelParams& p) {
    if (t > p.pension_e_update_end) return e_prev;
    return (e_prev * (t - 1) + std::min(lambda, p.ebar)) / t;
}

// Benefit claw-back above the earnings-test threshold, floored at zero.
inline double earnings_test(double benefit, double labor_income, const PolicyRegime& regime,
                            const ModelParams& p) {
    if (!regime.earnings_test_enabled) return benefit;
    double excess = labor_income + benefit - p.tax.earnings_test_threshold;
    if (excess <= 0.0) return benefit;
    return std::max(0.0, benefit - p.tax.earnings_test_reduction * excess);
}

struct TaxFlows {
    double disposable = 0.0;
    double income_tax = 0.0; // progressive tax on labor + taxable pension
    double asset_tax = 0.0;
    double ssc = 0.0;
    double pension_paid = 0.0; // benefit after the earnings test
};

// Progressive income tax on the combined labor/pension base. Deductions are
// scaled by the regime's tax-credit multiplier.
inline double income_tax_amount(double labor_income, double pension, const PolicyRegime& regime,
                                const ModelParams& p) {
    const TaxSystem& tx = p.tax;
    const double tcm = regime.tax_credit_multiplier;
    double base = 0.0;
    if (labor_income > 0.0) {
        double ssc = tx.ssc_rate * labor_income;
        base += std::max(0.0, labor_income - tcm * tx.employment_deduction(labor_income) - ssc);
    }
    if (pension > 0.0 && !regime.pension_tax_exempt)
        base += std::max(0.0, pension - tcm * tx.pension_deduction(pension));
    base = std::max(0.0, base - tcm * tx.basic_deduction);
    return tx.income_brackets.tax(base) + tx.residence_rate * base;
}

// Disposable income from financial income ra, gross labor income, and the
// (pre-test) pension benefit.
inline TaxFlows post_tax_income_flows(double ra, double labor_income, double pension,
                                      const PolicyRegime& regime, const ModelParams& p) {
    if (ra < 0.0 || labor_income < 0.0 || pension < 0.0)
        throw std::invalid_argument("post_tax_income inputs must be non-negative");
    TaxFlows f;
    f.asset_tax = p.tau_r * ra;
    f.ssc = p.tax.ssc_rate * labor_income;
    f.pension_paid = earnings_test(pension, labor_income, regime, p);
    f.income_tax = income_tax_amount(labor_income, f.pension_paid, regime, p);
    f.disposable = ra - f.asset_tax + labor_income - f.ssc - f.income_tax + f.pension_paid;
    return f;
}

inline double post_tax_income(double ra, double labor_income, double pension,
                              const PolicyRegime& regime, const ModelParams& p) {
    return post_tax_income_flows(ra, labor_income, pension, regime, p).disposable;
}

// Post-tax labor income entering the pension accrual (no financial or
// pension income in the base).
inline double net_labor_income(double labor_income, const PolicyRegime& regime,
                               const ModelParams& p) {
    if (labor_income <= 0.0) return 0.0;
    return labor_income - p.tax.ssc_rate * labor_income -
           income_tax_amount(labor_income, 0.0, regime, p);
}

inline double inheritance_tax(double a_next, const ModelParams& p) {
    return p.tax.inherit_rate * std::max(0.0, a_next - p.tax.inherit_exemption);
}

inline double bequest_after_tax(double a_next, const ModelParams& p) {
    return a_next - inheritance_tax(a_next, p);
}

} // namespace olg
