#pragma once

#include "olg/equilibrium.hpp"

#include <string>
#include <vector>

namespace olg {

// Cross-sectional moments of a solved equilibrium. Occupation-indexed entries
// are [NL, L]. Conditioning cells that carry no mass come back as NaN.
struct MomentSet {
    double mean_hours_25_59 = 0.0; // mean h among workers (normalized hours)
    double sd_log_hours_25_59 = 0.0;
    double share_hours_lt20_25_59 = 0.0; // % of workers below 20h/week
    double lfp_60_79 = 0.0;              // %
    double mean_hours_25_79 = 0.0;       // mean h among workers
    double pt_rate[2] = {0.0, 0.0};      // % of occupation-j workers below F
    double pop_ratio_nl_l = 0.0;
    double wage_ratio_nl_l = 0.0;
    double pt_penalty[2] = {0.0, 0.0};
    double exp_premium[2] = {0.0, 0.0};
    double wage_reduction[2] = {0.0, 0.0};
    double mean_pension = 0.0; // mean benefit paid per eligible agent
    double inheritance_rate = 0.0;
    double assets_p30_80plus = 0.0;
    double labor_60_79 = 0.0; // effective labor supplied by ages 60-79
    double mean_hourly_wage = 0.0;
    double Y = 0.0, K = 0.0, L1 = 0.0, L2 = 0.0, tax_revenue = 0.0;
    double r = 0.0;
};

MomentSet compute_moments(const EquilibriumResult& eq, const ModelParams& p, const StateSpace& ss,
                          const PolicyRegime& regime);

// Per-age decomposition of the baseline value function into the consumption
// block and everything else (disutility, participation cost, bequests), both
// mass-weighted per capita. Used by the CEV solver: scaling consumption by
// (1+cev) scales Vc by (1+cev)^(1-sigma) and leaves Vr fixed.
struct AgeUtilityDecomp {
    std::vector<double> Vc; // index t-1, t = 1..T_max
    std::vector<double> Vr;
};

AgeUtilityDecomp base_decomp_by_age(const EquilibriumResult& base, const ModelParams& p,
                                    const StateSpace& ss, const PolicyRegime& regime);

// E[V_alt] per age with baseline-distribution weights (reform-surprise
// semantics). Ages where baseline eligibility cannot be mapped into the
// alternative regime come back as NaN.
std::vector<double> expected_alt_value_by_age(const EquilibriumResult& base,
                                              const EquilibriumResult& alt, const ModelParams& p,
                                              const StateSpace& ss, const PolicyRegime& base_regime,
                                              const PolicyRegime& alt_regime);

// cev (fraction, not percent) solving Vc*(1+cev)^(1-sigma) + Vr = ev_alt.
double solve_cev(double Vc, double Vr, double ev_alt, double sigma);

double cev_long_term(const EquilibriumResult& base, const EquilibriumResult& alt,
                     const ModelParams& p, const StateSpace& ss, const PolicyRegime& base_regime,
                     const PolicyRegime& alt_regime, int age); // percent

double cev_short_term(const EquilibriumResult& base, const EquilibriumResult& alt,
                      const ModelParams& p, const StateSpace& ss, const PolicyRegime& base_regime,
                      const PolicyRegime& alt_regime, int age); // percent

struct ExperimentReport {
    std::string name;
    bool partial_equilibrium = false;
    bool converged = true;
    MomentSet base;
    MomentSet alt;
    double d_output = 0.0; // percent deltas vs baseline
    double d_L1 = 0.0;
    double d_L2 = 0.0;
    double d_labor_60_79 = 0.0;
    double d_capital = 0.0;
    double d_tax = 0.0;
    double cev_short_25 = 0.0; // percent; NaN for partial-equilibrium runs
    double cev_long_25 = 0.0;
    std::vector<int> cev_age;       // short-term CEV profile (reportable ages)
    std::vector<double> cev_by_age; // percent
};

// Known experiment names: baseline; the seven general-equilibrium reforms
// (eliminate_earnings_test, extend_pension_age, lower_pension, theta_nl_down,
// pi_half, tax_credit_up, pension_tax_exempt); and the three
// partial-equilibrium halvings (pe_theta_half, pe_omega_half, pe_pi_half).
std::vector<std::string> experiment_names();
// Applies the named experiment's changes on top of `base`.
PolicyRegime experiment_regime(const std::string& name, const ModelParams& p,
                               const PolicyRegime& base = baseline_regime());
bool experiment_is_partial(const std::string& name);

ExperimentReport run_experiment(const std::string& name, const ModelParams& p,
                                const StateSpace& ss, const PolicyRegime& base_regime,
                                const EquilibriumResult& base, const SolveOptions& opt);

} // namespace olg
