#include "olg/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace olg {

double ces_labor(double L1, double L2, const ModelParams& p) {
    if (L1 <= 0.0 || L2 <= 0.0) throw std::invalid_argument("labor inputs must be positive");
    const double s = (p.psi - 1.0) / p.psi;
    return std::pow(p.nu * std::pow(L1, s) + (1.0 - p.nu) * std::pow(L2, s), 1.0 / s);
}

double output(double K, double L1, double L2, const ModelParams& p) {
    if (K <= 0.0) throw std::invalid_argument("capital must be positive");
    double L = ces_labor(L1, L2, p);
    return p.A * std::pow(K, p.alpha) * std::pow(L, 1.0 - p.alpha);
}

Prices firm_prices(double K, double L1, double L2, const ModelParams& p) {
    if (K <= 0.0) throw std::invalid_argument("capital must be positive");
    const double L = ces_labor(L1, L2, p);
    Prices pr;
    pr.A = p.A;
    pr.r = p.alpha * p.A * std::pow(L / K, 1.0 - p.alpha) - p.delta;
    const double common = (1.0 - p.alpha) * p.A * std::pow(K / L, p.alpha);
    pr.w1 = common * p.nu * std::pow(L / L1, 1.0 / p.psi);
    pr.w2 = common * (1.0 - p.nu) * std::pow(L / L2, 1.0 / p.psi);
    return pr;
}

double government_residual(const StationaryDistribution& dist, double Tr) {
    double taxes = dist.labor_tax + dist.asset_tax + dist.inherit_tax + dist.ssc;
    return taxes - Tr - dist.pension_outlays; // population normalized to 1
}

namespace {

double rel(double implied, double current) {
    return std::abs(implied - current) / std::max(1e-8, std::abs(implied));
}

struct EvalOut {
    Prices pr;
    SolutionTables sol;
    StationaryDistribution dist;
    double taxes = 0.0;
    double Tr_implied = 0.0;
    double B_implied = 0.0;
    double share_implied = 0.5; // NL share of implied effective labor
    ResidualReport res;
};

constexpr double kShareLo = 0.02;
constexpr double kShareHi = 0.98;

double clamp_share(double s) { return std::clamp(s, kShareLo, kShareHi); }

} // namespace

EquilibriumResult solve_equilibrium(const ModelParams& p, const StateSpace& ss,
                                    const PolicyRegime& regime, const SolveOptions& opt) {
    EquilibriumResult eq;
    double K = opt.K0, Tr = opt.Tr0, B = opt.B0;
    double T = opt.L10 + opt.L20;                 // total effective labor
    double s = clamp_share(opt.L10 / T);          // NL share of effective labor
    double damp_s = opt.damp_supply, damp_f = opt.damp_fiscal;
    int evals = 0;
    double worst_prev = 1.0;
    double best_worst = 1e300;
    int stalled = 0;

    auto evaluate = [&](double sv) -> EvalOut {
        EvalOut out;
        const double L1 = sv * T, L2 = (1.0 - sv) * T;
        out.pr = firm_prices(K, L1, L2, p);
        HouseholdInputs in{out.pr.r, out.pr.w1, out.pr.w2, Tr, B};
        out.sol = solve_household(p, ss, regime, in);
        out.dist = forward_iterate(out.sol, p, ss, regime);
        out.taxes =
            out.dist.labor_tax + out.dist.asset_tax + out.dist.inherit_tax + out.dist.ssc;
        out.Tr_implied = out.taxes - out.dist.pension_outlays;
        out.B_implied = out.dist.B_implied;
        out.share_implied = out.dist.L1 / (out.dist.L1 + out.dist.L2);
        out.res.capital = rel(out.dist.K, K);
        out.res.labor1 = rel(out.dist.L1, L1);
        out.res.labor2 = rel(out.dist.L2, L2);
        out.res.government = std::abs(government_residual(out.dist, Tr)) / std::max(1e-8, out.taxes);
        out.res.bequests = std::abs(out.B_implied - B) / std::max(1e-8, std::abs(out.B_implied));
        ++evals;
        eq.log.push_back({evals, K, L1, L2, Tr, B, out.res});
        if (opt.verbose)
            std::fprintf(stderr,
                         "eval %3d  K=%.6f L1=%.6f L2=%.6f Tr=%.6f B=%.6f  res K=%.2e L1=%.2e "
                         "L2=%.2e G=%.2e B=%.2e\n",
                         evals, K, L1, L2, Tr, B, out.res.capital, out.res.labor1,
                         out.res.labor2, out.res.government, out.res.bequests);
        return out;
    };

    auto finish = [&](EvalOut&& e, bool ok) {
        eq.converged = ok;
        eq.prices = e.pr;
        eq.Tr = Tr;
        eq.B = B;
        eq.K = K;
        eq.L1 = s * T;
        eq.L2 = (1.0 - s) * T;
        eq.Y = output(K, eq.L1, eq.L2, p);
        eq.taxes_total = e.taxes;
        eq.residuals = e.res;
        eq.walras_gap = (eq.Y - e.dist.C - p.delta * K) / eq.Y;
        eq.sol = std::move(e.sol);
        eq.dist = std::move(e.dist);
    };

    while (true) {
        // inner stage: at fixed (K, T, Tr, B) pin the occupational split by a
        // root-find on the NL share; the excess h(s) = implied_share - s is
        // decreasing in s but can be very steep, so damped iteration on it
        // would crawl — bracket and apply the Illinois false-position rule
        const double htol = std::max(0.3 * opt.tol, std::min(1e-2, 0.1 * worst_prev)) *
                            std::min(s, 1.0 - s);
        EvalOut e = evaluate(s);
        double h = e.share_implied - s;
        if (std::abs(h) > htol && evals < opt.max_iter) {
            // h is decreasing with slope <= -1 (implied share falls as the
            // posted share rises), so the root lies within |h| of s and the
            // first candidate below usually brackets in one evaluation
            double sa = s, ha = h;
            double sb = sa, hb = ha;
            double step = std::abs(h);
            bool bracketed = false;
            for (int k = 0; k < 8 && evals < opt.max_iter; ++k) {
                sb = clamp_share(sb + (ha > 0.0 ? step : -step));
                EvalOut eb = evaluate(sb);
                hb = eb.share_implied - sb;
                if ((ha > 0.0) != (hb > 0.0)) {
                    bracketed = true;
                    if (std::abs(hb) < std::abs(h)) {
                        e = std::move(eb);
                        s = sb;
                        h = hb;
                    }
                    break;
                }
                sa = sb;
                ha = hb;
                if (std::abs(hb) < std::abs(h)) {
                    e = std::move(eb);
                    s = sb;
                    h = hb;
                }
                step *= 2.0;
                if (sb <= kShareLo || sb >= kShareHi) break;
            }
            int side = 0; // Illinois: halve the stale endpoint's residual
            while (bracketed && std::abs(h) > htol && std::abs(sb - sa) > 1e-12 &&
                   evals < opt.max_iter) {
                double sm = (sa * hb - sb * ha) / (hb - ha);
                sm = std::clamp(sm, std::min(sa, sb) + 1e-13, std::max(sa, sb) - 1e-13);
                EvalOut em = evaluate(sm);
                double hm = em.share_implied - sm;
                if (std::abs(hm) < std::abs(h)) {
                    e = std::move(em);
                    s = sm;
                    h = hm;
                }
                if ((hm > 0.0) == (ha > 0.0)) {
                    sa = sm;
                    ha = hm;
                    if (side == -1) hb *= 0.5;
                    side = -1;
                } else {
                    sb = sm;
                    hb = hm;
                    if (side == 1) ha *= 0.5;
                    side = 1;
                }
            }
        }

        const bool ok = e.res.capital < opt.tol && e.res.labor1 < opt.tol &&
                        e.res.labor2 < opt.tol && e.res.government < opt.tol &&
                        e.res.bequests < opt.tol_bequests;
        if (ok || evals >= opt.max_iter) {
            finish(std::move(e), ok);
            return eq;
        }
        worst_prev = e.res.worst(opt.tol_bequests / opt.tol);

        // limit-cycle guard: if the worst (unscaled) residual stops improving,
        // shrink the outer step
        const double worst = e.res.worst(1.0);
        if (worst < best_worst * (1.0 - 1e-3)) {
            best_worst = worst;
            stalled = 0;
        } else if (++stalled >= 5) {
            damp_s = std::max(0.1, damp_s * 0.5);
            damp_f = std::max(0.3, damp_f * 0.5);
            stalled = 0;
            if (opt.verbose)
                std::fprintf(stderr, "oscillation: damping reduced to %.3f/%.3f\n", damp_s,
                             damp_f);
        }

        // s stays at the inner solution: the share margin is far steeper than
        // the aggregates, so nudging it here only re-injects noise
        const double T_implied = e.dist.L1 + e.dist.L2;
        K += damp_s * (e.dist.K - K);
        T += damp_s * (T_implied - T);
        Tr += damp_f * (e.Tr_implied - Tr);
        B += damp_f * (e.B_implied - B);
    }
}

double mean_hourly_wage(const EquilibriumResult& eq, const ModelParams& p, const StateSpace& ss,
                        const PolicyRegime& regime) {
    const double wage_of[3] = {0.0, eq.prices.w1, eq.prices.w2};
    double num = 0.0, den = 0.0;
    for (int t = 1; t <= p.T_work_end; ++t) {
        const std::vector<double>& mass = eq.dist.young_at(t);
        const ArmContext cx = arm_context(eq.sol, p, ss, regime, t);
        const int np = cx.np;
        for (int ixj = 0; ixj < StateSpace::NXJ; ++ixj)
            for (int ieta = 0; ieta < ss.neta; ++ieta)
                for (int ie = 0; ie < ss.ne; ++ie)
                    for (int ip = 0; ip < np; ++ip) {
                        const AltRow row = alt_row(cx, ixj, ieta, ie, ip);
                        for (int iphi = 0; iphi < ss.nphi; ++iphi) {
                            int base = ss.yidx(ixj, iphi, ieta, ie, ip, np, 0);
                            for (int ia = 0; ia < ss.na; ++ia) {
                                double m = mass[static_cast<size_t>(base + ia)];
                                if (m <= 0.0) continue;
                                const StateArms arms =
                                    state_arms(cx, row, ixj, iphi, ieta, ie, ip, ia, false);
                                for (int k = 1; k < arms.nalts; ++k) {
                                    double mj = m * arms.prob[k];
                                    if (mj <= 0.0) continue;
                                    const AltRow::Alt& al = row.alt[k];
                                    double h = ss.hours[static_cast<size_t>(al.ih)];
                                    num += mj * wage_of[al.j] * al.eff / h;
                                    den += mj;
                                }
                            }
                        }
                    }
    }
    if (den <= 0.0) throw std::runtime_error("mean_hourly_wage: no workers");
    return num / den;
}

std::string format_residual_report(const EquilibriumResult& eq) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "converged=%d iters=%zu\n"
                  "K=%.8f L1=%.8f L2=%.8f Tr=%.8f B=%.8f\n"
                  "r=%.6f w1=%.6f w2=%.6f Y=%.6f\n"
                  "residuals: capital=%.3e labor1=%.3e labor2=%.3e government=%.3e bequests=%.3e\n"
                  "walras_gap=%.3e\n",
                  eq.converged ? 1 : 0, eq.log.size(), eq.K, eq.L1, eq.L2, eq.Tr, eq.B,
                  eq.prices.r, eq.prices.w1, eq.prices.w2, eq.Y, eq.residuals.capital,
                  eq.residuals.labor1, eq.residuals.labor2, eq.residuals.government,
                  eq.residuals.bequests, eq.walras_gap);
    return buf;
}

} // namespace olg
