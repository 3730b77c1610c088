#pragma once

#include "olg/household_dp.hpp"

#include <vector>

namespace olg {

// Stationary measure over the discretized state space plus the aggregates the
// equilibrium and fiscal blocks need. Mass layouts mirror the solution slices.
struct StationaryDistribution {
    std::vector<std::vector<double>> young; // t = 1..T_work_end, AgeSlice layout
    std::vector<int> young_np;
    std::vector<std::vector<double>> old; // t = T_work_end+1..T_max, [e][a]
    std::vector<double> cohort;           // mass per age, sums to 1

    // aggregates (population normalized to 1)
    double K = 0.0;
    double L1 = 0.0;
    double L2 = 0.0;
    double C = 0.0;
    double labor_tax = 0.0;
    double asset_tax = 0.0;
    double inherit_tax = 0.0;
    double ssc = 0.0;
    double pension_outlays = 0.0;
    double bequest_flow = 0.0; // (1-S)*mass*b(a') summed over all ages
    double survivor_mass = 0.0;
    double B_implied = 0.0; // bequest_flow / survivor_mass

    const std::vector<double>& young_at(int t) const {
        return young.at(static_cast<size_t>(t - 1));
    }
    const std::vector<double>& old_at(int t, int T_work_end) const {
        return old.at(static_cast<size_t>(t - T_work_end - 1));
    }
};

// Push the newborn distribution forward through the stored policies and fill
// in all aggregates. Taxes/consumption are evaluated at sol.inputs.
StationaryDistribution forward_iterate(const SolutionTables& sol, const ModelParams& p,
                                       const StateSpace& ss, const PolicyRegime& regime);

// Effective-labor aggregation alone (also filled in by forward_iterate).
void aggregate_labor(const StationaryDistribution& dist, const SolutionTables& sol,
                     const ModelParams& p, const StateSpace& ss, const PolicyRegime& regime,
                     double& L1, double& L2);

// Per-survivor bequest transfer implied by the distribution.
double aggregate_bequests(const StationaryDistribution& dist);

} // namespace olg
