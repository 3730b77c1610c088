#pragma once

#include "olg/demographics.hpp"
#include "olg/efficiency.hpp"
#include "olg/fiscal.hpp"
#include "olg/params.hpp"

#include <cstdint>
#include <vector>

namespace olg {

// Gauss-Hermite nodes/weights for expectations over Normal shocks.
struct Quadrature {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Quadrature gauss_hermite(int n);
// Nodes for N(mean, sd^2); weights renormalized after dropping nodes <= lo.
Quadrature normal_nodes(int n, double mean, double sd, double lo);

// Discretized state space shared by the DP, distribution, and analysis code.
struct StateSpace {
    std::vector<double> agrid;
    std::vector<double> egrid;
    std::vector<double> hours; // sorted, hours[0] == 0
    std::vector<double> phi, phi_w;
    std::vector<double> eta, eta_w;
    int na = 0, ne = 0, nh = 0, nphi = 0, neta = 0;

    static constexpr int NX = 36; // experience 0..35
    static constexpr int NXJ = 1 + 2 * NX;

    // (j_prev, x) pairs: 0 = (NW,0); 1+x = (NL,x); 1+NX+x = (L,x)
    static int xj_index(Occ j_prev, int x) {
        if (j_prev == Occ::NW) return 0;
        return 1 + (j_prev == Occ::L ? NX : 0) + x;
    }
    static Occ xj_occ(int xj) {
        if (xj == 0) return Occ::NW;
        return xj <= NX ? Occ::NL : Occ::L;
    }
    static int xj_x(int xj) {
        if (xj == 0) return 0;
        return xj <= NX ? xj - 1 : xj - 1 - NX;
    }

    int young_slice_size(int np) const { return NXJ * nphi * neta * ne * np * na; }
    int yidx(int ixj, int iphi, int ieta, int ie, int ip, int np, int ia) const {
        return ((((ixj * nphi + iphi) * neta + ieta) * ne + ie) * np + ip) * na + ia;
    }
    int oidx(int ie, int ia) const { return ie * na + ia; }

    // Work alternatives: 0 = idle; 1..nh-1 = NL at hours index k;
    // nh..2nh-2 = L at hours index k-nh+1.
    int nalts() const { return 1 + 2 * (nh - 1); }
    static constexpr int kMaxAlts = 31; // nh <= 16
    int alt_occ(int k) const { return k == 0 ? 0 : (k < nh ? 1 : 2); }
    int alt_hours(int k) const { return k == 0 ? 0 : (k < nh ? k : k - nh + 1); }

    // Linear interpolation weight for e' between egrid nodes.
    void e_weights(double e, int& lo, double& w_hi) const;

    static StateSpace build(const ModelParams& p, const GridSpec& g);
};

struct HouseholdInputs {
    double r = 0.01;
    double w1 = 1.0;
    double w2 = 1.0;
    double Tr = 0.0;
    double B = 0.0;
};

// Per-age solution slice for working ages. Layout: [xj][phi][eta][e][p][a].
// The work decision is a logit mix over the alternatives (idle, and each
// occupation-hours pair) with taste scale chi; savings are argmax within
// each alternative, stored as pol_a[state * nalts + alt].
struct AgeSlice {
    int np = 1;
    int nalts = 1;
    std::vector<double> V;
    std::vector<uint16_t> pol_a;
};

// Retired ages: layout [e][a].
struct OldSlice {
    std::vector<double> V;
    std::vector<uint16_t> pol_a;
};

struct SolutionTables {
    std::vector<AgeSlice> young; // index t-1, t = 1..T_work_end
    std::vector<OldSlice> old;   // index t-T_work_end-1, t = T_work_end+1..T_max
    HouseholdInputs inputs;

    const AgeSlice& at(int t) const { return young.at(static_cast<size_t>(t - 1)); }
    const OldSlice& old_at(int t, int T_work_end) const {
        return old.at(static_cast<size_t>(t - T_work_end - 1));
    }
};

double flow_utility(double c, double h, double phi, int t, const ModelParams& p);
double bequest_utility(double a_next, const ModelParams& p);
// Consumption-only and non-consumption components of flow utility, used by
// the welfare accounting.
double consumption_utility(double c, const ModelParams& p);

SolutionTables solve_household(const ModelParams& p, const StateSpace& ss,
                               const PolicyRegime& regime, const HouseholdInputs& in);

// chi-scaled log-sum-exp over n alternative values; fills choice
// probabilities when pr is non-null. Values at or below the infeasibility
// sentinel get zero probability; if nothing is feasible the first gets
// probability one.
double logsum_probs(const double* v, int n, double chi, double* pr);

// Continuation values for age t in layout [p][xj][phi][eta][e'][a'], with
// beta*S(t) and the eligibility branch probabilities folded in, exactly as
// the solver builds them. The next slice's V can be overridden by an array in
// the same layout (the welfare accounting passes its own components).
std::vector<double> continuation_table(const SolutionTables& sol, const ModelParams& p,
                                       const StateSpace& ss, const PolicyRegime& regime, int t,
                                       const double* next_young = nullptr,
                                       const double* next_old = nullptr);

inline int cont_index(const StateSpace& ss, int ip, int ixj, int iphi, int ieta, int ie) {
    return ((((ip * StateSpace::NXJ + ixj) * ss.nphi + iphi) * ss.neta + ieta) * ss.ne + ie) *
           ss.na;
}

// Near-indifference savings lottery: mass within one triangular kernel width
// chi (in value units) of the conditional optimum is split across the
// neighboring grid nodes, which keeps the implied distribution continuous in
// prices even though the savings choice itself is a grid argmax.
struct SavingsLottery {
    int n = 0;
    int ia[5];
    double w[5];
};

// value(ia') must return the choice value at savings node ia' (anything at or
// below the infeasibility sentinel is excluded); iap is the argmax.
template <class F>
SavingsLottery savings_lottery(int iap, int na, double chi, F&& value) {
    SavingsLottery lot;
    const double vstar = value(iap);
    double total = 0.0;
    for (int d = -2; d <= 2; ++d) {
        const int ia = iap + d;
        if (ia < 0 || ia >= na) continue;
        double w;
        if (d == 0) {
            w = 1.0;
        } else {
            const double v = value(ia);
            if (v <= -1e300) continue;
            w = 1.0 - (vstar - v) / chi;
            if (w <= 0.0) continue;
        }
        lot.ia[lot.n] = ia;
        lot.w[lot.n] = w;
        ++lot.n;
        total += w;
    }
    for (int i = 0; i < lot.n; ++i) lot.w[i] /= total;
    return lot;
}

// Savings lottery for a retired state (t > T_work_end).
SavingsLottery old_lottery(const SolutionTables& sol, const ModelParams& p, const StateSpace& ss,
                           const PolicyRegime& regime, int t, int ie, int ia);

// Shared per-age context for everything that rebuilds choice values from the
// stored policies (distribution, moments, welfare, diagnostics).
struct ArmContext {
    const SolutionTables* sol = nullptr;
    const ModelParams* p = nullptr;
    const StateSpace* ss = nullptr;
    const PolicyRegime* regime = nullptr;
    EffectiveTech tech;
    int t = 0;
    int np = 1;
    double S = 1.0;
    double one_minus_taur = 1.0;
    double wage_of[3] = {0.0, 0.0, 0.0};
    std::vector<double> cont; // continuation table for age t
    std::vector<double> mu;   // (1 - S) * bequest_utility per savings node
};

ArmContext arm_context(const SolutionTables& sol, const ModelParams& p, const StateSpace& ss,
                       const PolicyRegime& regime, int t, const double* next_young = nullptr,
                       const double* next_old = nullptr);

// Alternative-level invariants for a (xj, eta, e, p) row, shared by every
// (phi, a) state in it.
struct AltRow {
    int nalts = 1;
    int pflag = 0;
    double benefit = 0.0;
    struct Alt {
        int j = 0, ih = 0, ixj_next = 0, elo = 0;
        double whi = 0.0, labor = 0.0, eff = 0.0, e_next = 0.0, hkern = 0.0;
        TaxFlows tax;
    };
    Alt alt[StateSpace::kMaxAlts];
};

AltRow alt_row(const ArmContext& cx, int ixj, int ieta, int ie, int ip);

// One working-age state's alternatives rebuilt from the stored policies.
struct StateArms {
    int nalts = 1;
    double V = 0.0; // chi-logsum over the alternatives
    double value[StateSpace::kMaxAlts];
    double prob[StateSpace::kMaxAlts];
    int iap[StateSpace::kMaxAlts];
    double res[StateSpace::kMaxAlts]; // cash on hand
    double c[StateSpace::kMaxAlts];
    SavingsLottery lot[StateSpace::kMaxAlts]; // filled when want_lottery
};

StateArms state_arms(const ArmContext& cx, const AltRow& row, int ixj, int iphi, int ieta, int ie,
                     int ip, int ia, bool want_lottery);

// Largest Bellman-consistency error |V - T V| / max(1,|V|) over all stored
// states (rebuilds every alternative from the stored policies and
// continuations).
double bellman_residual(const SolutionTables& sol, const ModelParams& p, const StateSpace& ss,
                        const PolicyRegime& regime);

} // namespace olg
