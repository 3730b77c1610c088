#pragma once

#include "olg/params.hpp"

#include <array>

namespace olg {

// Model period 1 corresponds to age 25.
inline int age_of(int t) {
    if (t < 1 || t > 80) throw std::out_of_range("period t must lie in [1,80]");
    return 24 + t;
}

inline int period_of_age(int age) { return age - 24; }

// Distribution of next-period eligibility for an agent in state p at period t.
// Eligibility resolves on entry into the reveal period and is absorbing.
struct EligibilityBranches {
    std::array<int, 2> p;
    std::array<double, 2> prob;
    int n = 1;
};

inline EligibilityBranches eligibility_transition(int p, int t, const PolicyRegime& regime,
                                                  const ModelParams& params) {
    EligibilityBranches out;
    int next = t + 1;
    if (p == 1 || next >= regime.normal_period) {
        out.p = {1, 0};
        out.prob = {1.0, 0.0};
        out.n = 1;
    } else if (next == regime.reveal_period()) {
        out.p = {1, 0};
        out.prob = {params.p60_prob, 1.0 - params.p60_prob};
        out.n = 2;
    } else {
        out.p = {0, 0};
        out.prob = {1.0, 0.0};
        out.n = 1;
    }
    return out;
}

// Number of distinct eligibility states that carry mass at period t.
inline int eligibility_states_at(int t, const PolicyRegime& regime) {
    if (t < regime.reveal_period()) return 1; // everyone still ineligible
    if (t >= regime.normal_period) return 1;  // everyone eligible
    return 2;
}

// Eligibility flag of the single slice when only one state exists at t.
inline int sole_eligibility_at(int t, const PolicyRegime& regime) {
    return t >= regime.normal_period ? 1 : 0;
}

} // namespace olg
