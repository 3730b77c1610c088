#pragma once

#include "olg/params.hpp"

#include <cmath>

namespace olg {

// Occupation-fit productivity m. Constant over the lifetime; only the
// nonlinear occupation prices the eta1 draw.
inline double occ_productivity(double eta1, Occ j) {
    if (j == Occ::NW) throw std::invalid_argument("non-workers have no wage");
    return j == Occ::NL ? std::exp(eta1) : 1.0;
}

// Effective hours g_j(h) = h^(1+theta_j); the part-time penalty channel.
inline double hours_factor(double h, int j_idx, const EffectiveTech& tech) {
    return std::pow(h, 1.0 + tech.theta[static_cast<size_t>(j_idx)]);
}

// Experience premium: 1 + Omega_j*min(x, xbar_j) while staying in the same
// occupation; switching resets the premium.
inline double experience_factor(int x, Occ j, Occ j_prev, const ModelParams& p,
                                const EffectiveTech& tech) {
    if (j != j_prev || j == Occ::NW) return 1.0;
    int ji = occ_index(j) - 1;
    int xe = std::min(x, p.xbar[static_cast<size_t>(ji)]);
    return 1.0 + tech.omega[static_cast<size_t>(ji)] * xe;
}

// Post-R wage discount, flat until R and constant past Rbar_j.
inline double age_penalty(int t, int j_idx, const ModelParams& p, const EffectiveTech& tech) {
    if (t <= p.R) return 1.0;
    int te = std::min(t, p.rbar[static_cast<size_t>(j_idx)]);
    return std::exp(-std::abs(tech.pi[static_cast<size_t>(j_idx)]) * (te - p.R));
}

inline double effective_labor(double h, double eta1, int x, Occ j, Occ j_prev, int t,
                              const ModelParams& p, const EffectiveTech& tech) {
    if (h == 0.0) return 0.0;
    int ji = occ_index(j) - 1;
    return occ_productivity(eta1, j) * hours_factor(h, ji, tech) *
           experience_factor(x, j, j_prev, p, tech) * age_penalty(t, ji, p, tech);
}

// Experience carried into next period. The 35-cap is behavior-preserving
// because z only reads min(x, xbar_j) and both caps are <= 35.
inline int experience_update(int x_prev, Occ j_prev, Occ j_chosen) {
    if (j_chosen == j_prev && j_chosen != Occ::NW) return std::min(x_prev + 1, 35);
    return 0;
}

} // namespace olg
