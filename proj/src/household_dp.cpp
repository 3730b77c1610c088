#include "olg/household_dp.hpp"

#include <cassert>
#include <cmath>
#include <cstring>
#include <limits>

namespace olg {

namespace {

constexpr double kNegInf = -1e300;

double upow(double c, double one_minus_sigma) {
    return std::pow(c, one_minus_sigma);
}

} // namespace

Quadrature gauss_hermite(int n) {
    // Newton iteration on the physicists' Hermite polynomials.
    Quadrature q;
    q.nodes.assign(static_cast<size_t>(n), 0.0);
    q.weights.assign(static_cast<size_t>(n), 0.0);
    if (n == 1) {
        q.nodes[0] = 0.0;
        q.weights[0] = std::sqrt(M_PI);
        return q;
    }
    const double eps = 1e-14;
    const int m = (n + 1) / 2;
    std::vector<double> zs(static_cast<size_t>(m)); // positive roots, descending
    double z = 0.0, pp = 0.0;
    for (int i = 0; i < m; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(n, 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * zs[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * zs[1];
        } else {
            z = 2.0 * z - zs[static_cast<size_t>(i - 2)];
        }
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = std::pow(M_PI, -0.25);
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < eps) break;
        }
        zs[static_cast<size_t>(i)] = z;
        q.nodes[static_cast<size_t>(i)] = -z; // ascending order
        q.nodes[static_cast<size_t>(n - 1 - i)] = z;
        q.weights[static_cast<size_t>(i)] = 2.0 / (pp * pp);
        q.weights[static_cast<size_t>(n - 1 - i)] = q.weights[static_cast<size_t>(i)];
    }
    return q;
}

Quadrature normal_nodes(int n, double mean, double sd, double lo) {
    Quadrature gh = gauss_hermite(n);
    Quadrature out;
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = mean + std::sqrt(2.0) * sd * gh.nodes[static_cast<size_t>(i)];
        double w = gh.weights[static_cast<size_t>(i)] * inv_sqrt_pi;
        if (x <= lo) continue;
        out.nodes.push_back(x);
        out.weights.push_back(w);
        total += w;
    }
    if (out.nodes.empty()) throw std::runtime_error("normal_nodes: truncation removed all nodes");
    for (auto& w : out.weights) w /= total;
    return out;
}

void StateSpace::e_weights(double e, int& lo, double& w_hi) const {
    if (e <= egrid.front()) {
        lo = 0;
        w_hi = 0.0;
        return;
    }
    if (e >= egrid.back()) {
        lo = ne - 2;
        w_hi = 1.0;
        return;
    }
    int hi = static_cast<int>(std::upper_bound(egrid.begin(), egrid.end(), e) - egrid.begin());
    lo = hi - 1;
    w_hi = (e - egrid[static_cast<size_t>(lo)]) /
           (egrid[static_cast<size_t>(hi)] - egrid[static_cast<size_t>(lo)]);
}

StateSpace StateSpace::build(const ModelParams& p, const GridSpec& g) {
    StateSpace ss;
    ss.na = g.na;
    ss.ne = g.ne;
    ss.nh = static_cast<int>(g.hours.size());
    ss.nphi = g.nphi;
    ss.neta = g.neta;
    ss.agrid.resize(static_cast<size_t>(g.na));
    for (int i = 0; i < g.na; ++i)
        ss.agrid[static_cast<size_t>(i)] =
            g.amax * std::pow(static_cast<double>(i) / (g.na - 1), g.acurve);
    ss.egrid.resize(static_cast<size_t>(g.ne));
    for (int i = 0; i < g.ne; ++i)
        ss.egrid[static_cast<size_t>(i)] = p.ebar * static_cast<double>(i) / (g.ne - 1);
    ss.hours = g.hours;
    Quadrature qphi = normal_nodes(g.nphi, p.mu_phi, p.delta_phi, 0.0);
    ss.phi = qphi.nodes;
    ss.phi_w = qphi.weights;
    ss.nphi = static_cast<int>(ss.phi.size());
    double eta_sd = p.eta1_sigma_is_variance ? std::sqrt(p.sigma_eta1) : p.sigma_eta1;
    Quadrature qeta = normal_nodes(g.neta, 0.0, eta_sd, -std::numeric_limits<double>::infinity());
    ss.eta = qeta.nodes;
    ss.eta_w = qeta.weights;
    ss.neta = static_cast<int>(ss.eta.size());
    return ss;
}

double consumption_utility(double c, const ModelParams& p) {
    if (c <= 0.0) return kNegInf;
    if (p.sigma == 2.0) return -1.0 / c;
    if (p.sigma == 1.5) return -2.0 / std::sqrt(c);
    if (p.sigma == 3.0) return -0.5 / (c * c);
    return upow(c, 1.0 - p.sigma) / (1.0 - p.sigma);
}

double flow_utility(double c, double h, double phi, int t, const ModelParams& p) {
    if (c <= 0.0) throw std::invalid_argument("flow_utility requires c > 0");
    double u = consumption_utility(c, p);
    if (h > 0.0) {
        double Phi = phi + p.kappa * (t - p.R) * (t > p.R ? 1.0 : 0.0);
        double e = 1.0 + 1.0 / p.gamma;
        u -= Phi * std::pow(h, e) / e + p.xi;
    }
    return u;
}

double bequest_utility(double a_next, const ModelParams& p) {
    double b = bequest_after_tax(a_next, p);
    return p.mu1 * upow(1.0 + b / p.mu2, 1.0 - p.sigma);
}

double logsum_probs(const double* v, int n, double chi, double* pr) {
    assert(n >= 1 && n <= 32);
    double vmax = kNegInf;
    for (int i = 0; i < n; ++i)
        if (v[i] > vmax) vmax = v[i];
    if (vmax <= kNegInf) {
        if (pr) {
            pr[0] = 1.0;
            for (int i = 1; i < n; ++i) pr[i] = 0.0;
        }
        return kNegInf;
    }
    // alternatives more than 30*chi below the best carry weight < 1e-13 and
    // are dropped outright (value error below 1e-14*chi, probability zero)
    const double cut = vmax - 30.0 * chi;
    double e[32];
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        e[i] = v[i] < cut ? 0.0 : std::exp((v[i] - vmax) / chi);
        sum += e[i];
    }
    if (pr)
        for (int i = 0; i < n; ++i) pr[i] = e[i] / sum;
    return vmax + chi * std::log(sum);
}

std::vector<double> continuation_table(const SolutionTables& sol, const ModelParams& p,
                                       const StateSpace& ss, const PolicyRegime& regime, int t,
                                       const double* next_young, const double* next_old) {
    const int na = ss.na, ne = ss.ne, nphi = ss.nphi, neta = ss.neta;
    const int NXJ = StateSpace::NXJ;
    const int np = sol.at(t).np;
    const double betaS = p.beta * p.survival_at(t);
    std::vector<double> EV(static_cast<size_t>(np * NXJ * nphi * neta * ne * na), 0.0);
    if (t == p.T_work_end) {
        const double* src0 = next_old ? next_old : sol.old[0].V.data();
        for (int ip = 0; ip < np; ++ip)
            for (int ixj = 0; ixj < NXJ; ++ixj)
                for (int iphi = 0; iphi < nphi; ++iphi)
                    for (int ieta = 0; ieta < neta; ++ieta)
                        for (int ie = 0; ie < ne; ++ie) {
                            double* dst = EV.data() + cont_index(ss, ip, ixj, iphi, ieta, ie);
                            const double* src = src0 + ss.oidx(ie, 0);
                            for (int ia = 0; ia < na; ++ia) dst[ia] = betaS * src[ia];
                        }
        return EV;
    }
    const AgeSlice& next = sol.at(t + 1);
    const double* srcV = next_young ? next_young : next.V.data();
    for (int ip = 0; ip < np; ++ip) {
        int pflag = np == 1 ? sole_eligibility_at(t, regime) : ip;
        EligibilityBranches br = eligibility_transition(pflag, t, regime, p);
        for (int ixj = 0; ixj < NXJ; ++ixj)
            for (int iphi = 0; iphi < nphi; ++iphi)
                for (int ieta = 0; ieta < neta; ++ieta)
                    for (int ie = 0; ie < ne; ++ie) {
                        double* dst = EV.data() + cont_index(ss, ip, ixj, iphi, ieta, ie);
                        for (int b = 0; b < br.n; ++b) {
                            int ipn = next.np == 1 ? 0 : br.p[static_cast<size_t>(b)];
                            const double* src =
                                srcV + ss.yidx(ixj, iphi, ieta, ie, ipn, next.np, 0);
                            double w = betaS * br.prob[static_cast<size_t>(b)];
                            if (b == 0)
                                for (int ia = 0; ia < na; ++ia) dst[ia] = w * src[ia];
                            else
                                for (int ia = 0; ia < na; ++ia) dst[ia] += w * src[ia];
                        }
                    }
    }
    return EV;
}

ArmContext arm_context(const SolutionTables& sol, const ModelParams& p, const StateSpace& ss,
                       const PolicyRegime& regime, int t, const double* next_young,
                       const double* next_old) {
    ArmContext cx;
    cx.sol = &sol;
    cx.p = &p;
    cx.ss = &ss;
    cx.regime = &regime;
    cx.tech = effective_tech(p, regime);
    cx.t = t;
    cx.np = sol.at(t).np;
    cx.S = p.survival_at(t);
    cx.one_minus_taur = 1.0 - p.tau_r;
    cx.wage_of[1] = sol.inputs.w1;
    cx.wage_of[2] = sol.inputs.w2;
    cx.cont = continuation_table(sol, p, ss, regime, t, next_young, next_old);
    cx.mu.resize(static_cast<size_t>(ss.na));
    for (int ia = 0; ia < ss.na; ++ia)
        cx.mu[static_cast<size_t>(ia)] =
            (1.0 - cx.S) * bequest_utility(ss.agrid[static_cast<size_t>(ia)], p);
    return cx;
}

AltRow alt_row(const ArmContext& cx, int ixj, int ieta, int ie, int ip) {
    const ModelParams& p = *cx.p;
    const StateSpace& ss = *cx.ss;
    AltRow row;
    row.nalts = ss.nalts();
    row.pflag = cx.np == 1 ? sole_eligibility_at(cx.t, *cx.regime) : ip;
    const double e_now = ss.egrid[static_cast<size_t>(ie)];
    row.benefit = row.pflag ? pension_benefit(e_now, *cx.regime, p) : 0.0;
    const Occ jp = StateSpace::xj_occ(ixj);
    const int x = StateSpace::xj_x(ixj);
    const double he = 1.0 + 1.0 / p.gamma;
    for (int k = 0; k < row.nalts; ++k) {
        AltRow::Alt& al = row.alt[k];
        al.j = ss.alt_occ(k);
        al.ih = ss.alt_hours(k);
        if (k > 0) {
            const double h = ss.hours[static_cast<size_t>(al.ih)];
            const Occ jc = static_cast<Occ>(al.j);
            al.eff = effective_labor(h, ss.eta[static_cast<size_t>(ieta)], x, jc, jp, cx.t, p,
                                     cx.tech);
            al.labor = cx.wage_of[al.j] * al.eff;
            al.hkern = std::pow(h, he) / he;
            al.ixj_next = StateSpace::xj_index(jc, experience_update(x, jp, jc));
        }
        al.tax = post_tax_income_flows(0.0, al.labor, row.benefit, *cx.regime, p);
        al.e_next = accrue_e(e_now, cx.t, net_labor_income(al.labor, *cx.regime, p), p);
        ss.e_weights(al.e_next, al.elo, al.whi);
    }
    return row;
}

StateArms state_arms(const ArmContext& cx, const AltRow& row, int ixj, int iphi, int ieta, int ie,
                     int ip, int ia, bool want_lottery) {
    const ModelParams& p = *cx.p;
    const StateSpace& ss = *cx.ss;
    const AgeSlice& slice = cx.sol->at(cx.t);
    const HouseholdInputs& in = cx.sol->inputs;
    const int nalts = row.nalts;
    const double a = ss.agrid[static_cast<size_t>(ia)];
    const double Phi =
        ss.phi[static_cast<size_t>(iphi)] + p.kappa * (cx.t > p.R ? (cx.t - p.R) : 0);
    const int si = ss.yidx(ixj, iphi, ieta, ie, ip, cx.np, ia);
    const uint16_t* pol = slice.pol_a.data() + static_cast<size_t>(si) * static_cast<size_t>(nalts);

    StateArms out;
    out.nalts = nalts;
    for (int k = 0; k < nalts; ++k) {
        const AltRow::Alt& al = row.alt[k];
        const int iap = pol[k];
        const double res = a + in.Tr + in.B + al.tax.disposable + in.r * a * cx.one_minus_taur;
        const double* lo = cx.cont.data() + cont_index(ss, ip, al.ixj_next, iphi, ieta, al.elo);
        const double* hi = lo + ss.na;
        const double ap = ss.agrid[static_cast<size_t>(iap)];
        const double c = res - ap;
        double v;
        if (c <= 0.0) {
            v = kNegInf;
        } else {
            const double w = cx.mu[static_cast<size_t>(iap)] + (1.0 - al.whi) * lo[iap] +
                             al.whi * hi[iap];
            v = consumption_utility(c, p) + w;
            if (k > 0) v += -Phi * al.hkern - p.xi;
        }
        out.value[k] = v;
        out.iap[k] = iap;
        out.res[k] = res;
        out.c[k] = c;
    }
    out.V = logsum_probs(out.value, nalts, p.chi, out.prob);
    if (want_lottery) {
        for (int k = 0; k < nalts; ++k) {
            if (out.prob[k] <= 0.0 || out.value[k] <= kNegInf) {
                out.lot[k].n = 1;
                out.lot[k].ia[0] = out.iap[k];
                out.lot[k].w[0] = 1.0;
                continue;
            }
            const AltRow::Alt& al = row.alt[k];
            const double* lo =
                cx.cont.data() + cont_index(ss, ip, al.ixj_next, iphi, ieta, al.elo);
            const double* hi = lo + ss.na;
            const double res = out.res[k];
            out.lot[k] = savings_lottery(out.iap[k], ss.na, p.chi, [&](int b) {
                const double cb = res - ss.agrid[static_cast<size_t>(b)];
                if (cb <= 0.0) return kNegInf;
                return consumption_utility(cb, p) + cx.mu[static_cast<size_t>(b)] +
                       (1.0 - al.whi) * lo[b] + al.whi * hi[b];
            });
        }
    }
    return out;
}

SavingsLottery old_lottery(const SolutionTables& sol, const ModelParams& p, const StateSpace& ss,
                           const PolicyRegime& regime, int t, int ie, int ia) {
    const OldSlice& os = sol.old_at(t, p.T_work_end);
    const OldSlice* next = t < p.T_max ? &sol.old_at(t + 1, p.T_work_end) : nullptr;
    const HouseholdInputs& in = sol.inputs;
    const double S = p.survival_at(t);
    const double benefit = pension_benefit(ss.egrid[static_cast<size_t>(ie)], regime, p);
    const TaxFlows f0 = post_tax_income_flows(0.0, 0.0, benefit, regime, p);
    const double a = ss.agrid[static_cast<size_t>(ia)];
    const double res = a + in.Tr + f0.disposable + in.r * a * (1.0 - p.tau_r);
    const int iap = os.pol_a[static_cast<size_t>(ss.oidx(ie, ia))];
    return savings_lottery(iap, ss.na, p.chi, [&](int b) {
        const double cb = res - ss.agrid[static_cast<size_t>(b)];
        if (cb <= 0.0) return kNegInf;
        double v = consumption_utility(cb, p) +
                   (1.0 - S) * bequest_utility(ss.agrid[static_cast<size_t>(b)], p);
        if (next) v += p.beta * S * next->V[static_cast<size_t>(ss.oidx(ie, b))];
        return v;
    });
}

namespace {

// Monotone-argmax grid search: value(ia) = max over ia' of u(res[ia]-a[ia'])
// + W[ia'], exploiting that the lowest argmax is non-decreasing in ia
// (supermodular objective: u is concave and res is increasing in a).
struct BlockSolver {
    const double* agrid;
    int na;
    double sigma;

    const double* res;
    const double* W;
    double* val;
    int* arg;

    double ucons(double c) const {
        if (sigma == 2.0) return -1.0 / c;
        return std::pow(c, 1.0 - sigma) / (1.0 - sigma);
    }

    void run() { rec(0, na - 1, 0, na - 1); }

    void rec(int alo, int ahi, int blo, int bhi) {
        if (alo > ahi) return;
        int amid = (alo + ahi) / 2;
        double best = kNegInf;
        int barg = blo;
        double r = res[amid];
        for (int b = blo; b <= bhi; ++b) {
            double c = r - agrid[b];
            if (c <= 0.0) break;
            double v = ucons(c) + W[b];
            if (v > best) {
                best = v;
                barg = b;
            }
        }
        val[amid] = best;
        arg[amid] = barg;
        rec(alo, amid - 1, blo, barg);
        rec(amid + 1, ahi, barg, bhi);
    }
};

struct Workspace {
    std::vector<double> res, W, val;
    std::vector<int> arg;
    void resize(int na) {
        res.resize(static_cast<size_t>(na));
        W.resize(static_cast<size_t>(na));
        val.resize(static_cast<size_t>(na));
        arg.resize(static_cast<size_t>(na));
    }
};

} // namespace

SolutionTables solve_household(const ModelParams& p, const StateSpace& ss,
                               const PolicyRegime& regime, const HouseholdInputs& in) {
    if (regime.normal_period > p.T_work_end)
        throw std::runtime_error("normal eligibility period must precede the retirement period");
    if (ss.nh > 16) throw std::runtime_error("solve_household supports at most 16 hours points");
    SolutionTables sol;
    sol.inputs = in;
    const EffectiveTech tech = effective_tech(p, regime);
    const int na = ss.na, ne = ss.ne, nh = ss.nh, nphi = ss.nphi, neta = ss.neta;
    const int NXJ = StateSpace::NXJ, NX = StateSpace::NX;
    const int nalts = ss.nalts();
    const double one_minus_taur = 1.0 - p.tau_r;

    std::vector<double> mu_grid(static_cast<size_t>(na));
    for (int ia = 0; ia < na; ++ia)
        mu_grid[static_cast<size_t>(ia)] = bequest_utility(ss.agrid[static_cast<size_t>(ia)], p);

    // hours disutility kernel h^(1+1/gamma)/(1+1/gamma)
    std::vector<double> hkernel(static_cast<size_t>(nh));
    const double he = 1.0 + 1.0 / p.gamma;
    for (int ih = 0; ih < nh; ++ih)
        hkernel[static_cast<size_t>(ih)] = std::pow(ss.hours[static_cast<size_t>(ih)], he) / he;

    // ---- retired ages, backward ----
    sol.old.resize(static_cast<size_t>(p.T_max - p.T_work_end));
    std::vector<double> benefit_e(static_cast<size_t>(ne));
    for (int ie = 0; ie < ne; ++ie)
        benefit_e[static_cast<size_t>(ie)] =
            pension_benefit(ss.egrid[static_cast<size_t>(ie)], regime, p);

    {
        Workspace wk;
        wk.resize(na);
        for (int t = p.T_max; t > p.T_work_end; --t) {
            OldSlice& os = sol.old[static_cast<size_t>(t - p.T_work_end - 1)];
            os.V.assign(static_cast<size_t>(ne * na), 0.0);
            os.pol_a.assign(static_cast<size_t>(ne * na), 0);
            const double S = p.survival_at(t);
            const OldSlice* next =
                t < p.T_max ? &sol.old[static_cast<size_t>(t - p.T_work_end)] : nullptr;
            for (int ie = 0; ie < ne; ++ie) {
                TaxFlows f0 =
                    post_tax_income_flows(0.0, 0.0, benefit_e[static_cast<size_t>(ie)], regime, p);
                for (int ia = 0; ia < na; ++ia) {
                    double a = ss.agrid[static_cast<size_t>(ia)];
                    wk.res[static_cast<size_t>(ia)] =
                        a + in.Tr + f0.disposable + in.r * a * one_minus_taur;
                }
                for (int iap = 0; iap < na; ++iap) {
                    double w = (1.0 - S) * mu_grid[static_cast<size_t>(iap)];
                    if (next) w += p.beta * S * next->V[static_cast<size_t>(ss.oidx(ie, iap))];
                    wk.W[static_cast<size_t>(iap)] = w;
                }
                BlockSolver bs{ss.agrid.data(), na,           p.sigma,       wk.res.data(),
                               wk.W.data(),     wk.val.data(), wk.arg.data()};
                bs.run();
                for (int ia = 0; ia < na; ++ia) {
                    os.V[static_cast<size_t>(ss.oidx(ie, ia))] = wk.val[static_cast<size_t>(ia)];
                    os.pol_a[static_cast<size_t>(ss.oidx(ie, ia))] =
                        static_cast<uint16_t>(wk.arg[static_cast<size_t>(ia)]);
                }
            }
        }
    }

    // ---- working ages, backward ----
    sol.young.resize(static_cast<size_t>(p.T_work_end));
    const int ncls = NX + 1;

    for (int t = p.T_work_end; t >= 1; --t) {
        const double S = p.survival_at(t);
        const int np = eligibility_states_at(t, regime);
        AgeSlice& slice = sol.young[static_cast<size_t>(t - 1)];
        slice.np = np;
        slice.nalts = nalts;
        const int n_states = ss.young_slice_size(np);
        slice.V.assign(static_cast<size_t>(n_states), 0.0);
        slice.pol_a.assign(static_cast<size_t>(n_states) * static_cast<size_t>(nalts), 0);

        const std::vector<double> EV = continuation_table(sol, p, ss, regime, t);
        auto ev_idx = [&](int ip, int ixj, int iphi, int ieta, int ie) {
            return ((((ip * NXJ + ixj) * nphi + iphi) * neta + ieta) * ne + ie) * na;
        };

        // wage base per (occupation, hours): w_j * g_j(h) * f_j(t)
        double wbase[2][16];
        const double wage_of[3] = {0.0, in.w1, in.w2};
        for (int jo = 0; jo < 2; ++jo) {
            double f = age_penalty(t, jo, p, tech);
            for (int ih = 1; ih < nh; ++ih)
                wbase[jo][ih] =
                    wage_of[jo + 1] * hours_factor(ss.hours[static_cast<size_t>(ih)], jo, tech) * f;
        }

        const int ngroups = np * nphi * neta * ne;
#pragma omp parallel
        {
            Workspace wk;
            wk.resize(na);
            // per (occupation, class, hours) values/policies for one group
            std::vector<double> Jval(static_cast<size_t>(2 * ncls * nh * na));
            std::vector<int> Ja(static_cast<size_t>(2 * ncls * nh * na));
            std::vector<double> Nval(static_cast<size_t>(na));
            std::vector<int> Na(static_cast<size_t>(na));
            auto jidx = [&](int jo, int k, int ih) {
                return static_cast<size_t>(((jo * ncls + k) * nh + ih) * na);
            };

#pragma omp for schedule(static)
            for (int g = 0; g < ngroups; ++g) {
                const int ie = g % ne;
                const int ieta = (g / ne) % neta;
                const int iphi = (g / (ne * neta)) % nphi;
                const int ip = g / (ne * neta * nphi);
                const int pflag = np == 1 ? sole_eligibility_at(t, regime) : ip;
                const double Phi =
                    ss.phi[static_cast<size_t>(iphi)] + p.kappa * (t > p.R ? (t - p.R) : 0);
                const double m_nl = std::exp(ss.eta[static_cast<size_t>(ieta)]);
                const double e_now = ss.egrid[static_cast<size_t>(ie)];
                const double benefit = pflag ? benefit_e[static_cast<size_t>(ie)] : 0.0;

                // --- not working ---
                {
                    TaxFlows f0 = post_tax_income_flows(0.0, 0.0, benefit, regime, p);
                    double e_next = accrue_e(e_now, t, 0.0, p);
                    int elo;
                    double wh;
                    ss.e_weights(e_next, elo, wh);
                    const double* lo = EV.data() + ev_idx(ip, 0, iphi, ieta, elo);
                    const double* hi = EV.data() + ev_idx(ip, 0, iphi, ieta, elo + 1);
                    for (int iap = 0; iap < na; ++iap)
                        wk.W[static_cast<size_t>(iap)] =
                            (1.0 - S) * mu_grid[static_cast<size_t>(iap)] + (1.0 - wh) * lo[iap] +
                            wh * hi[iap];
                    for (int ia = 0; ia < na; ++ia) {
                        double a = ss.agrid[static_cast<size_t>(ia)];
                        wk.res[static_cast<size_t>(ia)] =
                            a + in.Tr + in.B + f0.disposable + in.r * a * one_minus_taur;
                    }
                    BlockSolver bs{ss.agrid.data(), na,           p.sigma,       wk.res.data(),
                                   wk.W.data(),     wk.val.data(), wk.arg.data()};
                    bs.run();
                    for (int ia = 0; ia < na; ++ia) {
                        Nval[static_cast<size_t>(ia)] = wk.val[static_cast<size_t>(ia)];
                        Na[static_cast<size_t>(ia)] = wk.arg[static_cast<size_t>(ia)];
                    }
                }

                // --- working, by occupation / experience class / hours ---
                for (int jo = 0; jo < 2; ++jo) {
                    const Occ j = jo == 0 ? Occ::NL : Occ::L;
                    const double m = jo == 0 ? m_nl : 1.0;
                    for (int k = 0; k <= NX; ++k) {
                        // class 0: entering from another occupation (premium reset);
                        // class k>=1: staying with experience x=k-1
                        double z = 1.0;
                        int x_next = 0;
                        if (k >= 1) {
                            int x = k - 1;
                            z = 1.0 + tech.omega[static_cast<size_t>(jo)] *
                                          std::min(x, p.xbar[static_cast<size_t>(jo)]);
                            x_next = std::min(x + 1, 35);
                        }
                        const int ixj_next = StateSpace::xj_index(j, x_next);

                        for (int ih = 1; ih < nh; ++ih) {
                            double labor = wbase[jo][ih] * m * z;
                            double lambda = net_labor_income(labor, regime, p);
                            double e_next = accrue_e(e_now, t, lambda, p);
                            int elo;
                            double wh;
                            ss.e_weights(e_next, elo, wh);
                            TaxFlows f0 = post_tax_income_flows(0.0, labor, benefit, regime, p);
                            double flowc = -Phi * hkernel[static_cast<size_t>(ih)] - p.xi;
                            const double* lo = EV.data() + ev_idx(ip, ixj_next, iphi, ieta, elo);
                            const double* hi =
                                EV.data() + ev_idx(ip, ixj_next, iphi, ieta, elo + 1);
                            for (int iap = 0; iap < na; ++iap)
                                wk.W[static_cast<size_t>(iap)] =
                                    (1.0 - S) * mu_grid[static_cast<size_t>(iap)] +
                                    (1.0 - wh) * lo[iap] + wh * hi[iap];
                            for (int ia = 0; ia < na; ++ia) {
                                double a = ss.agrid[static_cast<size_t>(ia)];
                                wk.res[static_cast<size_t>(ia)] =
                                    a + in.Tr + in.B + f0.disposable + in.r * a * one_minus_taur;
                            }
                            BlockSolver bs{ss.agrid.data(), na,           p.sigma,
                                           wk.res.data(),   wk.W.data(),  wk.val.data(),
                                           wk.arg.data()};
                            bs.run();
                            double* jv = Jval.data() + jidx(jo, k, ih);
                            int* ja = Ja.data() + jidx(jo, k, ih);
                            for (int ia = 0; ia < na; ++ia) {
                                double v = wk.val[static_cast<size_t>(ia)];
                                jv[ia] = v > kNegInf ? v + flowc : kNegInf;
                                ja[ia] = wk.arg[static_cast<size_t>(ia)];
                            }
                        }
                    }
                }

                // --- assemble V and per-alternative policies over (j_prev, x) ---
                double varm[StateSpace::kMaxAlts];
                for (int ixj = 0; ixj < NXJ; ++ixj) {
                    const Occ jp = StateSpace::xj_occ(ixj);
                    const int x = StateSpace::xj_x(ixj);
                    const int kNL = jp == Occ::NL ? x + 1 : 0;
                    const int kL = jp == Occ::L ? x + 1 : 0;
                    const int base = ss.yidx(ixj, iphi, ieta, ie, ip, np, 0);
                    for (int ia = 0; ia < na; ++ia) {
                        const int si = base + ia;
                        uint16_t* pol =
                            slice.pol_a.data() + static_cast<size_t>(si) * static_cast<size_t>(nalts);
                        varm[0] = Nval[static_cast<size_t>(ia)];
                        pol[0] = static_cast<uint16_t>(Na[static_cast<size_t>(ia)]);
                        for (int ih = 1; ih < nh; ++ih) {
                            varm[ih] = Jval[jidx(0, kNL, ih) + static_cast<size_t>(ia)];
                            pol[ih] = static_cast<uint16_t>(
                                Ja[jidx(0, kNL, ih) + static_cast<size_t>(ia)]);
                            varm[nh - 1 + ih] = Jval[jidx(1, kL, ih) + static_cast<size_t>(ia)];
                            pol[nh - 1 + ih] = static_cast<uint16_t>(
                                Ja[jidx(1, kL, ih) + static_cast<size_t>(ia)]);
                        }
                        slice.V[static_cast<size_t>(si)] =
                            logsum_probs(varm, nalts, p.chi, nullptr);
                    }
                }
            }
        }
    }
    return sol;
}

double bellman_residual(const SolutionTables& sol, const ModelParams& p, const StateSpace& ss,
                        const PolicyRegime& regime) {
    const double one_minus_taur = 1.0 - p.tau_r;
    const HouseholdInputs& in = sol.inputs;
    double worst = 0.0;
    auto note = [&](double stored, double check, double& acc) {
        double err = std::abs(stored - check) / std::max(1.0, std::abs(stored));
        if (err > acc) acc = err;
    };

    for (int t = p.T_max; t > p.T_work_end; --t) {
        const OldSlice& os = sol.old_at(t, p.T_work_end);
        const OldSlice* next = t < p.T_max ? &sol.old_at(t + 1, p.T_work_end) : nullptr;
        const double S = p.survival_at(t);
        for (int ie = 0; ie < ss.ne; ++ie) {
            double benefit = pension_benefit(ss.egrid[static_cast<size_t>(ie)], regime, p);
            for (int ia = 0; ia < ss.na; ++ia) {
                int si = ss.oidx(ie, ia);
                double stored = os.V[static_cast<size_t>(si)];
                if (stored <= kNegInf) continue;
                double a = ss.agrid[static_cast<size_t>(ia)];
                double ap = ss.agrid[os.pol_a[static_cast<size_t>(si)]];
                double res = a + in.Tr + in.r * a * one_minus_taur +
                             post_tax_income(0.0, 0.0, benefit, regime, p);
                double c = res - ap;
                double v = consumption_utility(c, p) + (1.0 - S) * bequest_utility(ap, p);
                if (next)
                    v += p.beta * S *
                         next->V[static_cast<size_t>(
                             ss.oidx(ie, os.pol_a[static_cast<size_t>(si)]))];
                note(stored, v, worst);
            }
        }
    }

    for (int t = p.T_work_end; t >= 1; --t) {
        const AgeSlice& slice = sol.at(t);
        const int np = slice.np;
        const ArmContext cx = arm_context(sol, p, ss, regime, t);
#pragma omp parallel for schedule(static) reduction(max : worst)
        for (int ixj = 0; ixj < StateSpace::NXJ; ++ixj) {
            double local = 0.0;
            for (int ieta = 0; ieta < ss.neta; ++ieta)
                for (int ie = 0; ie < ss.ne; ++ie)
                    for (int ip = 0; ip < np; ++ip) {
                        const AltRow row = alt_row(cx, ixj, ieta, ie, ip);
                        for (int iphi = 0; iphi < ss.nphi; ++iphi)
                            for (int ia = 0; ia < ss.na; ++ia) {
                                int si = ss.yidx(ixj, iphi, ieta, ie, ip, np, ia);
                                double stored = slice.V[static_cast<size_t>(si)];
                                if (stored <= kNegInf) continue;
                                StateArms arms =
                                    state_arms(cx, row, ixj, iphi, ieta, ie, ip, ia, false);
                                note(stored, arms.V, local);
                            }
                    }
            if (local > worst) worst = local;
        }
    }
    return worst;
}

} // namespace olg
