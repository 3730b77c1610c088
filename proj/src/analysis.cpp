#include "olg/analysis.hpp"

#include <cmath>
#include <cstring>
#include <limits>

namespace olg {

namespace {

constexpr double kNegInf = -1e300;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CondMean {
    double num = 0.0;
    double den = 0.0;
    void add(double m, double v) {
        num += m * v;
        den += m;
    }
    double mean() const { return den > 0.0 ? num / den : kNaN; }
};

double ratio_or_nan(double num, double den) { return den != 0.0 ? num / den : kNaN; }

} // namespace

MomentSet compute_moments(const EquilibriumResult& eq, const ModelParams& p, const StateSpace& ss,
                          const PolicyRegime& regime) {
    MomentSet mo;
    const double wage_of[3] = {0.0, eq.prices.w1, eq.prices.w2};
    const double h20 = 20.0 / p.hbar;

    CondMean hours_2559, loghours_2559, lt20_2559, hours_all;
    double worker_2559 = 0.0, sdlog_sq = 0.0;
    double mass_6079 = 0.0, worker_6079 = 0.0, labor_6079 = 0.0;
    CondMean wage_occ[2], pt_occ[2];
    CondMean ew_ft[2], ew_pt[2];     // part-time penalty cells
    CondMean ew_5059[2], ew_2534[2]; // experience premium cells
    CondMean ew_6069[2];
    double workers_occ[2] = {0.0, 0.0};
    double recipient_mass = 0.0;
    double bequest_pretax = 0.0;

    for (int t = 1; t <= p.T_work_end; ++t) {
        const std::vector<double>& mass = eq.dist.young_at(t);
        const double S = p.survival_at(t);
        const bool age2559 = t <= 35;
        const bool age6079 = t >= 36;
        const ArmContext cx = arm_context(eq.sol, p, ss, regime, t);
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
                                if (row.pflag) recipient_mass += m;
                                if (age6079) mass_6079 += m;
                                const StateArms arms =
                                    state_arms(cx, row, ixj, iphi, ieta, ie, ip, ia, true);
                                for (int k = 0; k < arms.nalts; ++k) {
                                    const double mj = m * arms.prob[k];
                                    if (mj <= 0.0) continue;
                                    const AltRow::Alt& al = row.alt[k];
                                    const SavingsLottery& lot = arms.lot[k];
                                    for (int l = 0; l < lot.n; ++l)
                                        bequest_pretax +=
                                            mj * lot.w[l] * (1.0 - S) *
                                            ss.agrid[static_cast<size_t>(lot.ia[l])];
                                    if (k == 0) continue;
                                    const int jo = al.j - 1;
                                    const double h = ss.hours[static_cast<size_t>(al.ih)];
                                    const double ew = wage_of[al.j] * al.eff / h;
                                    hours_all.add(mj, h);
                                    workers_occ[jo] += mj;
                                    wage_occ[jo].add(mj, ew);
                                    pt_occ[jo].add(mj, h < p.F ? 1.0 : 0.0);
                                    if (h >= p.F)
                                        ew_ft[jo].add(mj, ew);
                                    else
                                        ew_pt[jo].add(mj, ew);
                                    if (age2559) {
                                        worker_2559 += mj;
                                        hours_2559.add(mj, h);
                                        loghours_2559.add(mj, std::log(h));
                                        sdlog_sq += mj * std::log(h) * std::log(h);
                                        lt20_2559.add(mj, h < h20 ? 1.0 : 0.0);
                                    }
                                    if (age6079) {
                                        worker_6079 += mj;
                                        labor_6079 += mj * al.eff;
                                    }
                                    if (t >= 26 && t <= 35) ew_5059[jo].add(mj, ew);
                                    if (t <= 10) ew_2534[jo].add(mj, ew);
                                    if (t >= 36 && t <= 45) ew_6069[jo].add(mj, ew);
                                }
                            }
                        }
                    }
    }

    // ages 80+: assets percentile and pension accounting
    std::vector<double> amass(static_cast<size_t>(ss.na), 0.0);
    double old_mass = 0.0;
    for (int t = p.T_work_end + 1; t <= p.T_max; ++t) {
        const std::vector<double>& mass = eq.dist.old_at(t, p.T_work_end);
        const double S = p.survival_at(t);
        for (int ie = 0; ie < ss.ne; ++ie)
            for (int ia = 0; ia < ss.na; ++ia) {
                const double m = mass[static_cast<size_t>(ss.oidx(ie, ia))];
                if (m <= 0.0) continue;
                amass[static_cast<size_t>(ia)] += m;
                old_mass += m;
                recipient_mass += m;
                const SavingsLottery lot = old_lottery(eq.sol, p, ss, regime, t, ie, ia);
                for (int l = 0; l < lot.n; ++l)
                    bequest_pretax += m * lot.w[l] * (1.0 - S) *
                                      ss.agrid[static_cast<size_t>(lot.ia[l])];
            }
    }
    double cum = 0.0;
    mo.assets_p30_80plus = kNaN;
    for (int ia = 0; ia < ss.na; ++ia) {
        cum += amass[static_cast<size_t>(ia)];
        if (old_mass > 0.0 && cum >= 0.3 * old_mass) {
            mo.assets_p30_80plus = ss.agrid[static_cast<size_t>(ia)];
            break;
        }
    }

    mo.mean_hours_25_59 = hours_2559.mean();
    const double ml = loghours_2559.mean();
    mo.sd_log_hours_25_59 =
        worker_2559 > 0.0 ? std::sqrt(std::max(0.0, sdlog_sq / worker_2559 - ml * ml)) : kNaN;
    mo.share_hours_lt20_25_59 = 100.0 * lt20_2559.mean();
    mo.lfp_60_79 = 100.0 * ratio_or_nan(worker_6079, mass_6079);
    mo.mean_hours_25_79 = hours_all.mean();
    for (int jo = 0; jo < 2; ++jo) {
        mo.pt_rate[jo] = 100.0 * pt_occ[jo].mean();
        mo.pt_penalty[jo] = ew_ft[jo].mean() - ew_pt[jo].mean();
        mo.exp_premium[jo] = ew_5059[jo].mean() - ew_2534[jo].mean();
        mo.wage_reduction[jo] = ew_6069[jo].mean() / ew_5059[jo].mean();
    }
    mo.pop_ratio_nl_l = ratio_or_nan(workers_occ[0], workers_occ[1]);
    mo.wage_ratio_nl_l = wage_occ[0].mean() / wage_occ[1].mean();
    mo.mean_pension = ratio_or_nan(eq.dist.pension_outlays, recipient_mass);
    mo.inheritance_rate = ratio_or_nan(bequest_pretax, eq.dist.K);
    mo.labor_60_79 = labor_6079;
    mo.mean_hourly_wage = mean_hourly_wage(eq, p, ss, regime);
    mo.K = eq.dist.K;
    mo.L1 = eq.dist.L1;
    mo.L2 = eq.dist.L2;
    mo.Y = output(eq.dist.K, eq.dist.L1, eq.dist.L2, p);
    mo.tax_revenue =
        eq.dist.labor_tax + eq.dist.asset_tax + eq.dist.inherit_tax + eq.dist.ssc;
    mo.r = eq.prices.r;
    return mo;
}

// ---------------------------------------------------------------------------
// CEV machinery
// ---------------------------------------------------------------------------

AgeUtilityDecomp base_decomp_by_age(const EquilibriumResult& base, const ModelParams& p,
                                    const StateSpace& ss, const PolicyRegime& regime) {
    const HouseholdInputs& in = base.sol.inputs;
    const double one_minus_taur = 1.0 - p.tau_r;
    AgeUtilityDecomp out;
    out.Vc.assign(static_cast<size_t>(p.T_max), kNaN);
    out.Vr.assign(static_cast<size_t>(p.T_max), kNaN);

    // retired block, backward, keeping one next-slice pair
    std::vector<double> Vc_next, Vr_next, Vc_cur, Vr_cur;
    std::vector<double> Vc_old56; // consumption block at t = T_work_end+1 for the seam
    for (int t = p.T_max; t > p.T_work_end; --t) {
        const OldSlice& slice = base.sol.old_at(t, p.T_work_end);
        const std::vector<double>& mass = base.dist.old_at(t, p.T_work_end);
        const double S = p.survival_at(t);
        const double betaS = p.beta * S;
        Vc_cur.assign(slice.V.size(), 0.0);
        Vr_cur.assign(slice.V.size(), 0.0);
        double dot_c = 0.0, dot_r = 0.0, dot_m = 0.0;
        for (int ie = 0; ie < ss.ne; ++ie) {
            const double benefit = pension_benefit(ss.egrid[static_cast<size_t>(ie)], regime, p);
            const double disp = post_tax_income(0.0, 0.0, benefit, regime, p);
            for (int ia = 0; ia < ss.na; ++ia) {
                const int si = ss.oidx(ie, ia);
                const int iap = slice.pol_a[static_cast<size_t>(si)];
                const double a = ss.agrid[static_cast<size_t>(ia)];
                const double ap = ss.agrid[static_cast<size_t>(iap)];
                const double c = a + in.Tr + disp + in.r * a * one_minus_taur - ap;
                double vc, vr;
                if (c <= 0.0) {
                    vc = kNegInf;
                    vr = 0.0;
                } else {
                    vc = consumption_utility(c, p);
                    vr = (1.0 - S) * bequest_utility(ap, p);
                    if (t < p.T_max) {
                        vc += betaS * Vc_next[static_cast<size_t>(ss.oidx(ie, iap))];
                        vr += betaS * Vr_next[static_cast<size_t>(ss.oidx(ie, iap))];
                    }
                }
                Vc_cur[static_cast<size_t>(si)] = vc;
                Vr_cur[static_cast<size_t>(si)] = vr;
                const double m = mass[static_cast<size_t>(si)];
                if (m > 0.0) {
                    dot_c += m * vc;
                    dot_r += m * vr;
                    dot_m += m;
                }
            }
        }
        if (dot_m > 0.0) {
            out.Vc[static_cast<size_t>(t - 1)] = dot_c / dot_m;
            out.Vr[static_cast<size_t>(t - 1)] = dot_r / dot_m;
        }
        std::swap(Vc_next, Vc_cur);
        std::swap(Vr_next, Vr_cur);
    }
    Vc_old56 = Vc_next;
    Vc_next.clear();
    Vr_next.clear();

    // working ages: Vc follows the choice probabilities through the same
    // continuation machinery the solver uses, with Vc substituted for V; Vr
    // is defined residually so Vc + Vr equals the stored value exactly (it
    // absorbs disutility, bequests, and the taste-shock surplus)
    for (int t = p.T_work_end; t >= 1; --t) {
        const AgeSlice& slice = base.sol.at(t);
        const std::vector<double>& mass = base.dist.young_at(t);
        const ArmContext cx = arm_context(base.sol, p, ss, regime, t);
        const int np = cx.np;
        const std::vector<double> contVc = continuation_table(
            base.sol, p, ss, regime, t, Vc_next.empty() ? nullptr : Vc_next.data(),
            Vc_old56.data());
        Vc_cur.assign(slice.V.size(), 0.0);
        Vr_cur.assign(slice.V.size(), 0.0);
        double dot_c = 0.0, dot_r = 0.0, dot_m = 0.0;
        for (int ixj = 0; ixj < StateSpace::NXJ; ++ixj)
            for (int ieta = 0; ieta < ss.neta; ++ieta)
                for (int ie = 0; ie < ss.ne; ++ie)
                    for (int ip = 0; ip < np; ++ip) {
                        const AltRow row = alt_row(cx, ixj, ieta, ie, ip);
                        for (int iphi = 0; iphi < ss.nphi; ++iphi) {
                            const int base_i = ss.yidx(ixj, iphi, ieta, ie, ip, np, 0);
                            for (int ia = 0; ia < ss.na; ++ia) {
                                const int si = base_i + ia;
                                const double V = slice.V[static_cast<size_t>(si)];
                                double vc, vr;
                                if (!(V > kNegInf)) {
                                    vc = kNegInf;
                                    vr = 0.0;
                                } else {
                                    const StateArms arms =
                                        state_arms(cx, row, ixj, iphi, ieta, ie, ip, ia, false);
                                    vc = 0.0;
                                    for (int k = 0; k < arms.nalts; ++k) {
                                        if (arms.prob[k] <= 0.0) continue;
                                        const AltRow::Alt& al = row.alt[k];
                                        const double* lo = &contVc[static_cast<size_t>(
                                            cont_index(ss, ip, al.ixj_next, iphi, ieta, al.elo))];
                                        const double* hi = lo + ss.na;
                                        const double cc = (1.0 - al.whi) * lo[arms.iap[k]] +
                                                          al.whi * hi[arms.iap[k]];
                                        vc += arms.prob[k] *
                                              (consumption_utility(arms.c[k], p) + cc);
                                    }
                                    vr = V - vc;
                                }
                                Vc_cur[static_cast<size_t>(si)] = vc;
                                Vr_cur[static_cast<size_t>(si)] = vr;
                                const double m = mass[static_cast<size_t>(si)];
                                if (m > 0.0) {
                                    dot_c += m * vc;
                                    dot_r += m * vr;
                                    dot_m += m;
                                }
                            }
                        }
                    }
        if (dot_m > 0.0) {
            out.Vc[static_cast<size_t>(t - 1)] = dot_c / dot_m;
            out.Vr[static_cast<size_t>(t - 1)] = dot_r / dot_m;
        }
        std::swap(Vc_next, Vc_cur);
        std::swap(Vr_next, Vr_cur);
    }
    return out;
}

std::vector<double> expected_alt_value_by_age(const EquilibriumResult& base,
                                              const EquilibriumResult& alt, const ModelParams& p,
                                              const StateSpace& ss, const PolicyRegime& base_regime,
                                              const PolicyRegime& alt_regime) {
    (void)alt_regime; // the mapping is read off the alternative's slice shapes
    std::vector<double> out(static_cast<size_t>(p.T_max), kNaN);
    for (int t = 1; t <= p.T_work_end; ++t) {
        const int np_b = base.sol.at(t).np;
        const int np_a = alt.sol.at(t).np;
        const std::vector<double>& mass = base.dist.young_at(t);
        const std::vector<double>& Va = alt.sol.at(t).V;
        double dot = 0.0, tot = 0.0;
        bool defined = true;
        for (int ixj = 0; ixj < StateSpace::NXJ && defined; ++ixj)
            for (int iphi = 0; iphi < ss.nphi && defined; ++iphi)
                for (int ieta = 0; ieta < ss.neta && defined; ++ieta)
                    for (int ie = 0; ie < ss.ne && defined; ++ie)
                        for (int ip = 0; ip < np_b && defined; ++ip) {
                            const int pflag =
                                np_b == 1 ? sole_eligibility_at(t, base_regime) : ip;
                            int ipa = 0;
                            if (np_a == 2) {
                                if (np_b == 2)
                                    ipa = pflag;
                                else if (pflag == 0)
                                    ipa = 0;
                                else {
                                    // an already-eligible cohort cannot be mapped into a regime
                                    // where eligibility is still stochastic at this age
                                    defined = false;
                                    break;
                                }
                            }
                            const int bi = ss.yidx(ixj, iphi, ieta, ie, ip, np_b, 0);
                            const int aiv = ss.yidx(ixj, iphi, ieta, ie, ipa, np_a, 0);
                            for (int ia = 0; ia < ss.na; ++ia) {
                                const double m = mass[static_cast<size_t>(bi + ia)];
                                if (m <= 0.0) continue;
                                dot += m * Va[static_cast<size_t>(aiv + ia)];
                                tot += m;
                            }
                        }
        if (defined && tot > 0.0) out[static_cast<size_t>(t - 1)] = dot / tot;
    }
    for (int t = p.T_work_end + 1; t <= p.T_max; ++t) {
        const std::vector<double>& mass = base.dist.old_at(t, p.T_work_end);
        const std::vector<double>& Va = alt.sol.old_at(t, p.T_work_end).V;
        double dot = 0.0, tot = 0.0;
        for (size_t i = 0; i < mass.size(); ++i) {
            if (mass[i] <= 0.0) continue;
            dot += mass[i] * Va[i];
            tot += mass[i];
        }
        if (tot > 0.0) out[static_cast<size_t>(t - 1)] = dot / tot;
    }
    return out;
}

double solve_cev(double Vc, double Vr, double ev_alt, double sigma) {
    if (ev_alt == Vc + Vr) return 0.0;
    const double ratio = (ev_alt - Vr) / Vc;
    if (!(ratio > 0.0)) return kNaN;
    return std::pow(ratio, 1.0 / (1.0 - sigma)) - 1.0;
}

namespace {

double expected_alt_value_own_dist(const EquilibriumResult& alt, const ModelParams& p,
                                   const StateSpace& ss, int t) {
    (void)ss;
    double dot = 0.0, tot = 0.0;
    if (t <= p.T_work_end) {
        const std::vector<double>& mass = alt.dist.young_at(t);
        const std::vector<double>& V = alt.sol.at(t).V;
        for (size_t i = 0; i < mass.size(); ++i)
            if (mass[i] > 0.0) {
                dot += mass[i] * V[i];
                tot += mass[i];
            }
    } else {
        const std::vector<double>& mass = alt.dist.old_at(t, p.T_work_end);
        const std::vector<double>& V = alt.sol.old_at(t, p.T_work_end).V;
        for (size_t i = 0; i < mass.size(); ++i)
            if (mass[i] > 0.0) {
                dot += mass[i] * V[i];
                tot += mass[i];
            }
    }
    return tot > 0.0 ? dot / tot : kNaN;
}

} // namespace

double cev_long_term(const EquilibriumResult& base, const EquilibriumResult& alt,
                     const ModelParams& p, const StateSpace& ss, const PolicyRegime& base_regime,
                     const PolicyRegime& alt_regime, int age) {
    (void)alt_regime;
    if (&base == &alt) return 0.0;
    const int t = period_of_age(age);
    if (t < 1 || t > p.T_max) throw std::out_of_range("age outside model support");
    AgeUtilityDecomp dec = base_decomp_by_age(base, p, ss, base_regime);
    const double ev = expected_alt_value_own_dist(alt, p, ss, t);
    return 100.0 * solve_cev(dec.Vc[static_cast<size_t>(t - 1)],
                             dec.Vr[static_cast<size_t>(t - 1)], ev, p.sigma);
}

double cev_short_term(const EquilibriumResult& base, const EquilibriumResult& alt,
                      const ModelParams& p, const StateSpace& ss, const PolicyRegime& base_regime,
                      const PolicyRegime& alt_regime, int age) {
    if (&base == &alt) return 0.0;
    const int t = period_of_age(age);
    if (t < 1 || t > p.T_max) throw std::out_of_range("age outside model support");
    AgeUtilityDecomp dec = base_decomp_by_age(base, p, ss, base_regime);
    std::vector<double> ev = expected_alt_value_by_age(base, alt, p, ss, base_regime, alt_regime);
    return 100.0 * solve_cev(dec.Vc[static_cast<size_t>(t - 1)],
                             dec.Vr[static_cast<size_t>(t - 1)],
                             ev[static_cast<size_t>(t - 1)], p.sigma);
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

std::vector<std::string> experiment_names() {
    return {"baseline",          "eliminate_earnings_test",
            "extend_pension_age", "lower_pension",
            "theta_nl_down",      "pi_half",
            "tax_credit_up",      "pension_tax_exempt",
            "pe_theta_half",      "pe_omega_half",
            "pe_pi_half"};
}

bool experiment_is_partial(const std::string& name) {
    return name.rfind("pe_", 0) == 0;
}

PolicyRegime experiment_regime(const std::string& name, const ModelParams& p,
                               const PolicyRegime& base) {
    PolicyRegime r = base;
    r.name = name;
    if (name == "baseline") {
    } else if (name == "eliminate_earnings_test") {
        r.earnings_test_enabled = false;
    } else if (name == "extend_pension_age") {
        r.early_period += 5;
        r.normal_period += 5;
    } else if (name == "lower_pension") {
        r.rho_multiplier = 0.5;
    } else if (name == "theta_nl_down") {
        r.theta_override = {{p.theta[1], p.theta[1]}};
    } else if (name == "pi_half" || name == "pe_pi_half") {
        r.pi_override = {{0.5 * p.pi[0], 0.5 * p.pi[1]}};
    } else if (name == "tax_credit_up") {
        r.tax_credit_multiplier = 1.5;
    } else if (name == "pension_tax_exempt") {
        r.pension_tax_exempt = true;
    } else if (name == "pe_theta_half") {
        r.theta_override = {{0.5 * p.theta[0], 0.5 * p.theta[1]}};
    } else if (name == "pe_omega_half") {
        r.omega_override = {{0.5 * p.omega[0], 0.5 * p.omega[1]}};
    } else {
        throw std::invalid_argument("unknown experiment: " + name);
    }
    return r;
}

ExperimentReport run_experiment(const std::string& name, const ModelParams& p,
                                const StateSpace& ss, const PolicyRegime& base_regime,
                                const EquilibriumResult& base, const SolveOptions& opt) {
    ExperimentReport rep;
    rep.name = name;
    rep.partial_equilibrium = experiment_is_partial(name);
    rep.base = compute_moments(base, p, ss, base_regime);

    if (name == "baseline") {
        rep.alt = rep.base;
        rep.cev_short_25 = 0.0;
        rep.cev_long_25 = 0.0;
        for (int t = 1; t <= p.T_max; ++t) {
            rep.cev_age.push_back(age_of(t));
            rep.cev_by_age.push_back(0.0);
        }
        return rep;
    }

    const PolicyRegime alt_regime = experiment_regime(name, p, base_regime);
    EquilibriumResult alt;
    if (rep.partial_equilibrium) {
        alt.prices = base.prices;
        alt.Tr = base.Tr;
        alt.B = base.B;
        alt.sol = solve_household(p, ss, alt_regime, base.sol.inputs);
        alt.dist = forward_iterate(alt.sol, p, ss, alt_regime);
        alt.K = alt.dist.K;
        alt.L1 = alt.dist.L1;
        alt.L2 = alt.dist.L2;
        alt.Y = output(alt.K, alt.L1, alt.L2, p);
        alt.taxes_total =
            alt.dist.labor_tax + alt.dist.asset_tax + alt.dist.inherit_tax + alt.dist.ssc;
        alt.converged = true;
    } else {
        SolveOptions o = opt;
        o.K0 = base.K;
        o.L10 = base.L1;
        o.L20 = base.L2;
        o.Tr0 = base.Tr;
        o.B0 = base.B;
        alt = solve_equilibrium(p, ss, alt_regime, o);
    }
    rep.converged = alt.converged;
    rep.alt = compute_moments(alt, p, ss, alt_regime);

    auto pct = [](double a, double b) { return 100.0 * (a / b - 1.0); };
    rep.d_output = pct(rep.alt.Y, rep.base.Y);
    rep.d_L1 = pct(rep.alt.L1, rep.base.L1);
    rep.d_L2 = pct(rep.alt.L2, rep.base.L2);
    rep.d_labor_60_79 = pct(rep.alt.labor_60_79, rep.base.labor_60_79);
    rep.d_capital = pct(rep.alt.K, rep.base.K);
    rep.d_tax = pct(rep.alt.tax_revenue, rep.base.tax_revenue);

    if (!rep.partial_equilibrium) {
        AgeUtilityDecomp dec = base_decomp_by_age(base, p, ss, base_regime);
        std::vector<double> ev =
            expected_alt_value_by_age(base, alt, p, ss, base_regime, alt_regime);
        for (int t = 1; t <= p.T_max; ++t) {
            double c = 100.0 * solve_cev(dec.Vc[static_cast<size_t>(t - 1)],
                                         dec.Vr[static_cast<size_t>(t - 1)],
                                         ev[static_cast<size_t>(t - 1)], p.sigma);
            if (std::isnan(c)) continue;
            rep.cev_age.push_back(age_of(t));
            rep.cev_by_age.push_back(c);
        }
        rep.cev_short_25 = rep.cev_by_age.empty() ? kNaN : rep.cev_by_age.front();
        rep.cev_long_25 = cev_long_term(base, alt, p, ss, base_regime, alt_regime, 25);
    } else {
        rep.cev_short_25 = kNaN;
        rep.cev_long_25 = kNaN;
    }
    return rep;
}

} // namespace olg
