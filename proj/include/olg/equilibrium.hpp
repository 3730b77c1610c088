#pragma once

#include "olg/distribution.hpp"
#include "olg/household_dp.hpp"

#include <string>
#include <vector>

namespace olg {

struct Prices {
    double r = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;
    double A = 1.0;
};

double ces_labor(double L1, double L2, const ModelParams& p);
double output(double K, double L1, double L2, const ModelParams& p);
Prices firm_prices(double K, double L1, double L2, const ModelParams& p);

// Budget surplus at transfer Tr: taxes minus (Tr * population + pension outlays).
double government_residual(const StationaryDistribution& dist, double Tr);

struct ResidualReport {
    double capital = 0.0;
    double labor1 = 0.0;
    double labor2 = 0.0;
    double government = 0.0;
    double bequests = 0.0;

    double worst(double bequest_scale = 1e-2) const {
        // bequests carry a tighter tolerance; scale so a single max works
        double m = capital;
        if (labor1 > m) m = labor1;
        if (labor2 > m) m = labor2;
        if (government > m) m = government;
        if (bequests / bequest_scale > m) m = bequests / bequest_scale;
        return m;
    }
};

struct IterationRecord {
    int iter = 0;
    double K = 0.0, L1 = 0.0, L2 = 0.0, Tr = 0.0, B = 0.0;
    ResidualReport res;
};

struct SolveOptions {
    double tol = 1e-4;
    double tol_bequests = 1e-6;
    double damp_supply = 0.3; // K, total labor
    double damp_fiscal = 0.8; // Tr, B
    int max_iter = 300;
    // initial guesses for the aggregate fixed point
    double K0 = 1.359;
    double L10 = 0.2418;
    double L20 = 0.2185;
    double Tr0 = 0.0194;
    double B0 = 0.0411;
    bool verbose = false;
};

struct EquilibriumResult {
    Prices prices;
    double Tr = 0.0;
    double B = 0.0;
    double K = 0.0, L1 = 0.0, L2 = 0.0;
    double Y = 0.0;
    double taxes_total = 0.0;
    double walras_gap = 0.0; // (Y - C - delta*K)/Y, reported, not gated
    bool converged = false;
    ResidualReport residuals;
    std::vector<IterationRecord> log;
    SolutionTables sol;
    StationaryDistribution dist;
};

// Nested fixed point: an inner bracketing root-find pins the occupational
// split of labor at fixed (K, total labor, Tr, B); the outer loop updates
// those aggregates with damping, halved automatically when the residual path
// oscillates. max_iter caps total household solves.
EquilibriumResult solve_equilibrium(const ModelParams& p, const StateSpace& ss,
                                    const PolicyRegime& regime, const SolveOptions& opt);

// Mass-weighted mean hourly wage of workers (labor income per unit of h).
double mean_hourly_wage(const EquilibriumResult& eq, const ModelParams& p, const StateSpace& ss,
                        const PolicyRegime& regime);

std::string format_residual_report(const EquilibriumResult& eq);

} // namespace olg
