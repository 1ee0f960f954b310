#pragma once

// Small named instances used by the tests, the samples and the bench.

#include <vector>

#include "hmbp/core.hpp"
#include "hmbp/solver.hpp"

namespace hmbp::fixtures {

/// Feasible although the b-corrected condition fails at the first position.
inline Instance six_bin_feasible() {
    return Instance(6, WeightProfile({5, 5, 3, 1, 1, 0}), CapacityProfile({17, 17, 17, 17, 17, 8}));
}

/// A feasible partition of six_bin_feasible().
inline Assignment six_bin_solution() {
    return Assignment::from_bins(six_bin_feasible(), {
                                                         {{5, 1}, {3, 3}, {1, 2}},
                                                         {{5, 2}, {3, 2}, {1, 1}, {0, 1}},
                                                         {{5, 3}, {1, 2}, {0, 1}},
                                                         {{5, 3}, {1, 1}, {0, 2}},
                                                         {{5, 3}, {1, 2}, {0, 1}},
                                                         {{3, 1}, {1, 4}, {0, 1}},
                                                     });
}

/// Meets the necessary conditions, yet bin 2 only fits weight-1 balls.
inline Instance pair_infeasible() {
    return Instance(2, WeightProfile({3, 1}), CapacityProfile({5, 3}));
}

/// Feasible iff d is even.
inline Instance pair_even(Int d) {
    return Instance(d, WeightProfile({3, 1}), CapacityProfile({2 * d, 2 * d}));
}

inline Instance pair_odd(Int d) {
    return Instance(d, WeightProfile({3, 1}), CapacityProfile({2 * d + 1, 2 * d}));
}

/// The three-class exchange setting: lead bin full of weight-3 balls.
struct BoostSetting {
    Instance instance;
    Assignment start;
    Int target;
};

inline BoostSetting boost_setting() {
    Instance inst = six_bin_feasible();
    Assignment a = Assignment::from_bins(inst, {
                                                   {{3, 6}},
                                                   {{5, 3}, {1, 2}, {0, 1}},
                                                   {{5, 3}, {1, 2}, {0, 1}},
                                                   {{5, 3}, {1, 1}, {0, 2}},
                                                   {{5, 3}, {1, 1}, {0, 2}},
                                                   {{1, 6}},
                                               });
    return {inst, a, 2};
}

/// Inputs to the gap-shrinking step.
struct ShrinkSetting {
    Instance instance;
    Assignment start;
    MatchingPermutation r;
    Int threshold;
};

/// Light phase shifts then a top release.
inline ShrinkSetting shrink_light() {
    Instance inst = six_bin_feasible();
    Assignment a = Assignment::from_bins(inst, {
                                                   {{5, 2}, {3, 2}, {1, 2}},
                                                   {{5, 1}, {3, 4}, {0, 1}},
                                                   {{5, 3}, {1, 2}, {0, 1}},
                                                   {{5, 3}, {1, 1}, {0, 2}},
                                                   {{5, 3}, {1, 1}, {0, 2}},
                                                   {{1, 6}},
                                               });
    return {inst, a, MatchingPermutation{{0, 3, 1, 2, 5, 4}}, 2};
}

/// Top phase exchanges then a release.
inline ShrinkSetting shrink_top() {
    Instance inst(5, WeightProfile({5, 5, 5, 1, 0}), CapacityProfile({24, 24, 24, 15, 2}));
    Assignment a = Assignment::from_bins(inst, {
                                                   {{5, 5}},
                                                   {{5, 4}, {0, 1}},
                                                   {{5, 4}, {0, 1}},
                                                   {{5, 2}, {1, 3}},
                                                   {{1, 2}, {0, 3}},
                                               });
    return {inst, a, MatchingPermutation{{0, 1, 2, 3, 4}}, 3};
}

/// Hand-tuned capacities C_j = d w_j + delta_j for w = (6,6,4,4,4,0) with
/// delta = (-1,-5,5,3,1,3): same total as C° but a different split.
inline Instance modified_profile(Int d) {
    const std::vector<Int> w{6, 6, 4, 4, 4, 0};
    const std::vector<Int> delta{-1, -5, 5, 3, 1, 3};
    std::vector<Int> c;
    for (std::size_t j = 0; j < w.size(); ++j) {
        c.push_back(d * w[j] + delta[j]);
    }
    return Instance(d, WeightProfile(w), CapacityProfile(c));
}

/// Weights for which optimality of the b-corrected conditions is open.
inline WeightProfile open_question_weights() { return WeightProfile({10, 9, 9, 6, 6, 0}); }

}  // namespace hmbp::fixtures
