#include "olg/distribution.hpp"

#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace olg {

namespace {

struct AgeAggregates {
    double K = 0.0, L1 = 0.0, L2 = 0.0, C = 0.0;
    double labor_tax = 0.0, ssc = 0.0, asset_tax = 0.0, pension_outlays = 0.0;
    double bequest_flow = 0.0, inherit_tax = 0.0, survivor_mass = 0.0;

    void add(const AgeAggregates& o) {
        K += o.K;
        L1 += o.L1;
        L2 += o.L2;
        C += o.C;
        labor_tax += o.labor_tax;
        ssc += o.ssc;
        asset_tax += o.asset_tax;
        pension_outlays += o.pension_outlays;
        bequest_flow += o.bequest_flow;
        inherit_tax += o.inherit_tax;
        survivor_mass += o.survivor_mass;
    }
};

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

int thread_id() {
#ifdef _OPENMP
    return omp_get_thread_num();
#else
    return 0;
#endif
}

} // namespace

StationaryDistribution forward_iterate(const SolutionTables& sol, const ModelParams& p,
                                       const StateSpace& ss, const PolicyRegime& regime) {
    if (static_cast<int>(sol.young.size()) != p.T_work_end ||
        static_cast<int>(sol.old.size()) != p.T_max - p.T_work_end)
        throw std::runtime_error("forward_iterate: policy tables missing age slices");
    const HouseholdInputs& in = sol.inputs;
    const int na = ss.na, ne = ss.ne, nphi = ss.nphi, neta = ss.neta;
    const int NXJ = StateSpace::NXJ;

    StationaryDistribution dist;

    std::vector<double> bq_net(static_cast<size_t>(na)), bq_tax(static_cast<size_t>(na));
    for (int ia = 0; ia < na; ++ia) {
        bq_net[static_cast<size_t>(ia)] = bequest_after_tax(ss.agrid[static_cast<size_t>(ia)], p);
        bq_tax[static_cast<size_t>(ia)] = inheritance_tax(ss.agrid[static_cast<size_t>(ia)], p);
    }

    // stationary cohort weights: newborn inflow 1, scaled by cumulative survival
    std::vector<double> w(static_cast<size_t>(p.T_max));
    w[0] = 1.0;
    for (int t = 1; t < p.T_max; ++t)
        w[static_cast<size_t>(t)] = w[static_cast<size_t>(t - 1)] * p.survival_at(t);
    double total = 0.0;
    for (double x : w) total += x;
    dist.cohort.resize(static_cast<size_t>(p.T_max));
    for (int t = 0; t < p.T_max; ++t)
        dist.cohort[static_cast<size_t>(t)] = w[static_cast<size_t>(t)] / total;

    dist.young.resize(static_cast<size_t>(p.T_work_end));
    dist.young_np.resize(static_cast<size_t>(p.T_work_end));
    for (int t = 1; t <= p.T_work_end; ++t) {
        const AgeSlice& slice = sol.at(t);
        dist.young_np[static_cast<size_t>(t - 1)] = slice.np;
        dist.young[static_cast<size_t>(t - 1)].assign(slice.V.size(), 0.0);
    }
    dist.old.resize(static_cast<size_t>(p.T_max - p.T_work_end));
    for (auto& m : dist.old) m.assign(static_cast<size_t>(ne * na), 0.0);

    // newborns: zero assets, no experience, no history
    {
        int np1 = sol.at(1).np;
        for (int iphi = 0; iphi < nphi; ++iphi)
            for (int ieta = 0; ieta < neta; ++ieta)
                dist.young[0][static_cast<size_t>(ss.yidx(0, iphi, ieta, 0, 0, np1, 0))] =
                    dist.cohort[0] * ss.phi_w[static_cast<size_t>(iphi)] *
                    ss.eta_w[static_cast<size_t>(ieta)];
    }

    const int nthreads = max_threads();

    for (int t = 1; t <= p.T_work_end; ++t) {
        const std::vector<double>& mass = dist.young[static_cast<size_t>(t - 1)];
        const double S = p.survival_at(t);
        const ArmContext cx = arm_context(sol, p, ss, regime, t);
        const int np = cx.np;
        std::vector<double>* next_y =
            t < p.T_work_end ? &dist.young[static_cast<size_t>(t)] : nullptr;
        const int next_np = t < p.T_work_end ? sol.at(t + 1).np : 1;
        std::vector<double>* next_o = t == p.T_work_end ? &dist.old[0] : nullptr;
        const size_t next_size = next_y ? next_y->size() : dist.old[0].size();

        // threads accumulate into private next-age buffers and per-age partial
        // aggregates; both are reduced in fixed thread order afterwards so the
        // result does not depend on scheduling
        std::vector<std::vector<double>> buf(static_cast<size_t>(nthreads));
        std::vector<AgeAggregates> part(static_cast<size_t>(nthreads));

#pragma omp parallel
        {
            const int tid = thread_id();
            std::vector<double>& nb = buf[static_cast<size_t>(tid)];
            nb.assign(next_size, 0.0);
            AgeAggregates& ag = part[static_cast<size_t>(tid)];

#pragma omp for schedule(static)
            for (int ixj = 0; ixj < NXJ; ++ixj) {
                for (int ieta = 0; ieta < neta; ++ieta)
                    for (int ie = 0; ie < ne; ++ie)
                        for (int ip = 0; ip < np; ++ip) {
                            const int pflag = np == 1 ? sole_eligibility_at(t, regime) : ip;
                            const EligibilityBranches br =
                                eligibility_transition(pflag, t, regime, p);
                            const AltRow row = alt_row(cx, ixj, ieta, ie, ip);
                            for (int iphi = 0; iphi < nphi; ++iphi) {
                                const int base = ss.yidx(ixj, iphi, ieta, ie, ip, np, 0);
                                for (int ia = 0; ia < na; ++ia) {
                                    const double m = mass[static_cast<size_t>(base + ia)];
                                    if (m <= 0.0) continue;
                                    const StateArms arms =
                                        state_arms(cx, row, ixj, iphi, ieta, ie, ip, ia, true);
                                    const double a = ss.agrid[static_cast<size_t>(ia)];
                                    ag.K += m * a;
                                    ag.asset_tax += m * p.tau_r * in.r * a;
                                    ag.survivor_mass += m * S;
                                    for (int k = 0; k < arms.nalts; ++k) {
                                        const double mj = m * arms.prob[k];
                                        if (mj <= 0.0) continue;
                                        const AltRow::Alt& al = row.alt[k];
                                        if (al.j == 1) ag.L1 += mj * al.eff;
                                        if (al.j == 2) ag.L2 += mj * al.eff;
                                        ag.labor_tax += mj * al.tax.income_tax;
                                        ag.ssc += mj * al.tax.ssc;
                                        ag.pension_outlays += mj * al.tax.pension_paid;
                                        const SavingsLottery& lot = arms.lot[k];
                                        for (int l = 0; l < lot.n; ++l) {
                                            const double ml = mj * lot.w[l];
                                            if (ml <= 0.0) continue;
                                            const int iap = lot.ia[l];
                                            const double ap = ss.agrid[static_cast<size_t>(iap)];
                                            ag.C += ml * (arms.res[k] - ap);
                                            ag.bequest_flow +=
                                                ml * (1.0 - S) * bq_net[static_cast<size_t>(iap)];
                                            ag.inherit_tax +=
                                                ml * (1.0 - S) * bq_tax[static_cast<size_t>(iap)];
                                            const double msur = ml * S;
                                            if (msur <= 0.0) continue;
                                            if (next_o) {
                                                nb[static_cast<size_t>(ss.oidx(al.elo, iap))] +=
                                                    msur * (1.0 - al.whi);
                                                nb[static_cast<size_t>(
                                                    ss.oidx(al.elo + 1, iap))] += msur * al.whi;
                                            } else {
                                                for (int b = 0; b < br.n; ++b) {
                                                    const int ipn =
                                                        next_np == 1
                                                            ? 0
                                                            : br.p[static_cast<size_t>(b)];
                                                    const double mb =
                                                        msur * br.prob[static_cast<size_t>(b)];
                                                    if (mb <= 0.0) continue;
                                                    nb[static_cast<size_t>(
                                                        ss.yidx(al.ixj_next, iphi, ieta, al.elo,
                                                                ipn, next_np, iap))] +=
                                                        mb * (1.0 - al.whi);
                                                    nb[static_cast<size_t>(
                                                        ss.yidx(al.ixj_next, iphi, ieta,
                                                                al.elo + 1, ipn, next_np, iap))] +=
                                                        mb * al.whi;
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
            }
        }

        std::vector<double>& next_mass = next_y ? *next_y : dist.old[0];
        for (int tid = 0; tid < nthreads; ++tid) {
            const std::vector<double>& nb = buf[static_cast<size_t>(tid)];
            for (size_t i = 0; i < next_size; ++i) next_mass[i] += nb[i];
            const AgeAggregates& ag = part[static_cast<size_t>(tid)];
            dist.K += ag.K;
            dist.L1 += ag.L1;
            dist.L2 += ag.L2;
            dist.C += ag.C;
            dist.labor_tax += ag.labor_tax;
            dist.ssc += ag.ssc;
            dist.asset_tax += ag.asset_tax;
            dist.pension_outlays += ag.pension_outlays;
            dist.bequest_flow += ag.bequest_flow;
            dist.inherit_tax += ag.inherit_tax;
            dist.survivor_mass += ag.survivor_mass;
        }
    }

    const double one_minus_taur = 1.0 - p.tau_r;
    for (int t = p.T_work_end + 1; t <= p.T_max; ++t) {
        std::vector<double>& mass = dist.old[static_cast<size_t>(t - p.T_work_end - 1)];
        const double S = p.survival_at(t);
        std::vector<double>* next =
            t < p.T_max ? &dist.old[static_cast<size_t>(t - p.T_work_end)] : nullptr;
        for (int ie = 0; ie < ne; ++ie) {
            const double benefit = pension_benefit(ss.egrid[static_cast<size_t>(ie)], regime, p);
            const TaxFlows f0 = post_tax_income_flows(0.0, 0.0, benefit, regime, p);
            for (int ia = 0; ia < na; ++ia) {
                const double m = mass[static_cast<size_t>(ss.oidx(ie, ia))];
                if (m <= 0.0) continue;
                const double a = ss.agrid[static_cast<size_t>(ia)];
                const double res = a + in.Tr + f0.disposable + in.r * a * one_minus_taur;

                dist.K += m * a;
                dist.labor_tax += m * f0.income_tax;
                dist.asset_tax += m * p.tau_r * in.r * a;
                dist.pension_outlays += m * f0.pension_paid;
                dist.survivor_mass += m * S;

                const SavingsLottery lot = old_lottery(sol, p, ss, regime, t, ie, ia);
                for (int l = 0; l < lot.n; ++l) {
                    const double ml = m * lot.w[l];
                    if (ml <= 0.0) continue;
                    const int iap = lot.ia[l];
                    const double ap = ss.agrid[static_cast<size_t>(iap)];
                    dist.C += ml * (res - ap);
                    dist.bequest_flow += ml * (1.0 - S) * bq_net[static_cast<size_t>(iap)];
                    dist.inherit_tax += ml * (1.0 - S) * bq_tax[static_cast<size_t>(iap)];
                    if (next && ml * S > 0.0)
                        (*next)[static_cast<size_t>(ss.oidx(ie, iap))] += ml * S;
                }
            }
        }
    }

    dist.B_implied = dist.survivor_mass > 0.0 ? dist.bequest_flow / dist.survivor_mass : 0.0;
    return dist;
}

void aggregate_labor(const StationaryDistribution& dist, const SolutionTables& sol,
                     const ModelParams& p, const StateSpace& ss, const PolicyRegime& regime,
                     double& L1, double& L2) {
    L1 = L2 = 0.0;
    for (int t = 1; t <= p.T_work_end; ++t) {
        const std::vector<double>& mass = dist.young_at(t);
        const ArmContext cx = arm_context(sol, p, ss, regime, t);
        const int np = cx.np;
        for (int ixj = 0; ixj < StateSpace::NXJ; ++ixj)
            for (int ieta = 0; ieta < ss.neta; ++ieta)
                for (int ie = 0; ie < ss.ne; ++ie)
                    for (int ip = 0; ip < np; ++ip) {
                        const AltRow row = alt_row(cx, ixj, ieta, ie, ip);
                        for (int iphi = 0; iphi < ss.nphi; ++iphi) {
                            const int base = ss.yidx(ixj, iphi, ieta, ie, ip, np, 0);
                            for (int ia = 0; ia < ss.na; ++ia) {
                                const double m = mass[static_cast<size_t>(base + ia)];
                                if (m <= 0.0) continue;
                                const StateArms arms =
                                    state_arms(cx, row, ixj, iphi, ieta, ie, ip, ia, false);
                                for (int k = 1; k < arms.nalts; ++k) {
                                    const double mj = m * arms.prob[k];
                                    if (row.alt[k].j == 1) L1 += mj * row.alt[k].eff;
                                    if (row.alt[k].j == 2) L2 += mj * row.alt[k].eff;
                                }
                            }
                        }
                    }
    }
}

double aggregate_bequests(const StationaryDistribution& dist) {
    return dist.survivor_mass > 0.0 ? dist.bequest_flow / dist.survivor_mass : 0.0;
}

} // namespace olg
