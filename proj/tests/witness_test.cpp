#include <gtest/gtest.h>

#include <random>

#include "brute_force.hpp"
#include "hmbp/fixtures.hpp"
#include "hmbp/witness.hpp"

using namespace hmbp;

namespace {

std::vector<Int> caps(const Instance& inst) {
    return {inst.capacities.entries().begin(), inst.capacities.entries().end()};
}

std::vector<Int> delta(const Instance& inst) {
    std::vector<Int> out;
    for (std::size_t j = 0; j < inst.n(); ++j) {
        out.push_back(inst.capacities[j] - inst.d * inst.weights[j]);
    }
    return out;
}

WeightProfile random_profile(std::mt19937& rng, std::size_t max_n, Int max_w, bool distinct) {
    for (;;) {
        std::uniform_int_distribution<std::size_t> len(2, max_n);
        std::uniform_int_distribution<Int> val(0, max_w);
        std::vector<Int> w(len(rng));
        for (auto& v : w) {
            v = val(rng);
        }
        std::sort(w.rbegin(), w.rend());
        if (distinct && std::adjacent_find(w.begin(), w.end()) != w.end()) {
            continue;
        }
        WeightProfile p(w);
        if (!p.all_equal()) {
            return p;
        }
    }
}

}  // namespace

TEST(CCircle, SixBinProfileAndCompanion) {
    const WitnessInstance wit = c_circle(WeightProfile({5, 5, 3, 1, 1, 0}), 6);
    EXPECT_EQ(caps(wit.instance), (std::vector<Int>{29, 29, 21, 7, 7, 0}));
    ASSERT_TRUE(wit.companion);
    std::vector<std::string> bins;
    for (std::size_t j = 0; j < 6; ++j) {
        bins.push_back(format_bin(wit.companion->contents(j)));
    }
    EXPECT_EQ(bins, (std::vector<std::string>{"5^6", "5^5 3^1", "5^1 3^5", "1^6", "1^6", "0^6"}));
    EXPECT_EQ(wit.instance.capacities.total(), 93);
    EXPECT_EQ(gap_vector(*wit.companion, wit.instance.capacities).gaps,
              (std::vector<Int>{-1, 1, 1, 1, 1, 0}));
}

TEST(CCircle, PairFamily) {
    for (Int d = 2; d <= 9; ++d) {
        EXPECT_EQ(caps(c_circle(WeightProfile({3, 1}), d).instance),
                  (std::vector<Int>{3 * d - 1, d + 1}));
    }
}

TEST(CCircle, RepeatedBlocksDelta) {
    for (Int d = 6; d <= 12; ++d) {
        EXPECT_EQ(delta(c_circle(WeightProfile({6, 6, 4, 4, 4, 0}), d).instance),
                  (std::vector<Int>{-1, -1, 3, 1, 1, 3}));
    }
}

TEST(CCircle, Preconditions) {
    EXPECT_THROW(c_circle(WeightProfile({2, 2, 2}), 5), std::invalid_argument);
    EXPECT_THROW(c_circle(WeightProfile({3, 1}), 1), std::invalid_argument);
}

TEST(CCircle, RandomizedInvariants) {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const WeightProfile w = random_profile(rng, 8, 10, false);
        const Int n = static_cast<Int>(w.size());
        std::uniform_int_distribution<Int> dd(n, n + 10);
        const Int d = dd(rng);
        const WitnessInstance wit = c_circle(w, d);
        EXPECT_EQ(wit.instance.capacities.total(), d * w.total() + b_constant(w) - 1);
        ASSERT_TRUE(wit.companion);
        EXPECT_TRUE(is_k_feasible(*wit.companion, wit.instance.capacities, 1));
        const WeightGapProfile gw(w);
        const GapVector g = gap_vector(*wit.companion, wit.instance.capacities);
        EXPECT_EQ(g.gaps[0], -1);
        for (std::size_t j = 1; j < w.size(); ++j) {
            EXPECT_EQ(g.gaps[j], gw.gap(j) - 1);
        }
    }
}

TEST(CCircle, DistinctWeightsDeltaSuffixSums) {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 200; ++trial) {
        const WeightProfile w = random_profile(rng, 7, 12, true);
        const Int d = static_cast<Int>(w.size()) + 2;
        const auto del = delta(c_circle(w, d).instance);
        const WeightGapProfile gw(w);
        const auto b = suffix_b_constants(w);
        Int tail = 0;
        for (std::size_t i = w.size(); i-- > 1;) {
            EXPECT_EQ(del[i], gw.gap(i) - 1);
            EXPECT_EQ(tail, b[i]) << w.to_string() << " i=" << i;
            tail += del[i];
        }
    }
}

TEST(CCircle, OracleConfirmsOnSmallCases) {
    std::mt19937 rng(47);
    for (int trial = 0; trial < 20; ++trial) {
        const WeightProfile w = random_profile(rng, 4, 4, false);
        const Int d = static_cast<Int>(w.size()) + static_cast<Int>(trial % 3);
        const Instance inst = c_circle(w, d).instance;
        const brute::Problem p{d,
                               {w.entries().begin(), w.entries().end()},
                               caps(inst)};
        EXPECT_TRUE(brute::feasible(p, 1)) << w.to_string();
        EXPECT_FALSE(brute::feasible(p, 0)) << w.to_string();
    }
}

TEST(Relaxed, PairAtFirstPositionIsCCircle) {
    EXPECT_EQ(caps(relaxed_witness(WeightProfile({3, 1}), 4, 0).instance),
              (std::vector<Int>{11, 5}));
}

TEST(Relaxed, PairAtSecondPosition) {
    for (Int d = 2; d <= 6; ++d) {
        const WitnessInstance wit = relaxed_witness(WeightProfile({3, 1}), d, 1);
        EXPECT_EQ(wit.kind, WitnessKind::all_equal_tail);
        EXPECT_EQ(caps(wit.instance), (std::vector<Int>{3 * d + 7, d - 1}));
    }
    const WitnessInstance wit = relaxed_witness(WeightProfile({3, 1}), 4, 1);
    const brute::Problem p{4, {3, 1}, caps(wit.instance)};
    EXPECT_FALSE(brute::feasible(p, 1));
}

TEST(Relaxed, DistinctTail) {
    const WitnessInstance wit = relaxed_witness(WeightProfile({4, 2, 1}), 6, 1);
    EXPECT_EQ(caps(wit.instance), (std::vector<Int>{37, 11, 6}));
    const brute::Problem p{6, {4, 2, 1}, caps(wit.instance)};
    EXPECT_FALSE(brute::feasible(p, 1));
    EXPECT_TRUE(verify_witness(wit).ok);
}

TEST(Relaxed, UnsupportedShapes) {
    EXPECT_THROW(relaxed_witness(WeightProfile({6, 4, 4, 0}), 6, 1), std::domain_error);
    EXPECT_THROW(relaxed_witness(WeightProfile({6, 4, 4}), 6, 1), std::domain_error);
    EXPECT_THROW(relaxed_witness(WeightProfile({3, 1}), 1, 1), std::invalid_argument);
    EXPECT_THROW(relaxed_witness(WeightProfile({3, 1}), 4, 2), std::out_of_range);
}

TEST(Relaxed, RandomDistinctTails) {
    std::mt19937 rng(53);
    for (int trial = 0; trial < 200; ++trial) {
        const WeightProfile w = random_profile(rng, 7, 12, true);
        std::uniform_int_distribution<std::size_t> pick(0, w.size() - 1);
        const std::size_t start = pick(rng);
        const Int d = static_cast<Int>(w.size()) + 1;
        const WitnessInstance wit = relaxed_witness(w, d, start);
        const CriteriaReport rep = evaluate_criteria(wit.instance);
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i == start) {
                EXPECT_EQ(rep.rows[i].sufficient_slack, -1);
            } else {
                EXPECT_GE(rep.rows[i].sufficient_slack, 0);
            }
        }
    }
}

TEST(Verify, SixBinOracleBacked) {
    const WitnessCheck check = verify_witness(c_circle(WeightProfile({5, 5, 3, 1, 1, 0}), 6));
    EXPECT_TRUE(check.ok);
    EXPECT_TRUE(check.oracle_backed);
    EXPECT_TRUE(check.failures.empty());
}

TEST(Verify, PairAtFive) {
    const WitnessCheck check = verify_witness(c_circle(WeightProfile({3, 1}), 5));
    EXPECT_TRUE(check.ok);
    EXPECT_TRUE(check.oracle_backed);
}

TEST(Verify, TamperedCapacityRejected) {
    WitnessInstance wit = c_circle(WeightProfile({5, 5, 3, 1, 1, 0}), 6);
    std::vector<Int> c = caps(wit.instance);
    c[0] += 2;
    wit.instance = Instance(wit.instance.d, wit.instance.weights, CapacityProfile(c));
    const WitnessCheck check = verify_witness(wit);
    EXPECT_FALSE(check.ok);
}

TEST(Verify, AnalyticOnlyBeyondDeskScale) {
    const WitnessCheck check = verify_witness(c_circle(WeightProfile({5, 5, 3, 1, 1, 0}), 40));
    EXPECT_TRUE(check.ok);
    EXPECT_FALSE(check.oracle_backed);
}

TEST(Verify, BudgetExceededIsFlagged) {
    WitnessCheckOptions options;
    options.node_budget = 1;
    const WitnessCheck check = verify_witness(c_circle(WeightProfile({5, 5, 3, 1, 1, 0}), 6), options);
    EXPECT_TRUE(check.budget_exceeded);
    EXPECT_FALSE(check.oracle_backed);
    EXPECT_TRUE(check.ok);
}

TEST(Fixtures, ModifiedProfileKeepsTotal) {
    const Instance mod = fixtures::modified_profile(6);
    const Instance circ = c_circle(WeightProfile({6, 6, 4, 4, 4, 0}), 6).instance;
    EXPECT_EQ(caps(mod), (std::vector<Int>{35, 31, 29, 27, 25, 3}));
    EXPECT_EQ(mod.capacities.total(), circ.capacities.total());
}
