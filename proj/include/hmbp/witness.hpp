#pragma once

// Infeasibility witnesses showing that b(w) cannot be lowered.
//
// c_circle builds capacities C° with total d|w| + b(w) - 1 that are
// 1-feasible (a companion partition B° is returned) but not feasible.
// relaxed_witness plants such a profile on a truncation w^{>=i0} and makes
// the earlier capacities generous, so only the condition at i0 fails.

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hmbp/core.hpp"
#include "hmbp/criteria.hpp"
#include "hmbp/oracle.hpp"

namespace hmbp {

enum class WitnessKind { c_circle, relaxed, all_equal_tail };

inline const char* to_string(WitnessKind kind) {
    switch (kind) {
        case WitnessKind::c_circle:
            return "c-circle";
        case WitnessKind::relaxed:
            return "relaxed";
        case WitnessKind::all_equal_tail:
            return "all-equal-tail";
    }
    return "?";
}

struct WitnessInstance {
    Instance instance;
    WitnessKind kind = WitnessKind::c_circle;
    // 0-based start of the planted truncation; 0 for c_circle. The claim is
    // "1-feasible but not feasible" for c_circle and "not start-feasible"
    // (bins start+1..n cannot all be within capacity) otherwise.
    std::size_t start = 0;
    std::optional<Assignment> companion;  // B°, c_circle only

    std::string claim() const {
        if (kind == WitnessKind::c_circle) {
            return "1-feasible, not feasible";
        }
        return "not " + std::to_string(start) + "-feasible";
    }
};

/// The capacity profile C° and its 1-feasible companion B°.
/// Requires at least two distinct weights and d >= n.
inline WitnessInstance c_circle(const WeightProfile& w, Int d) {
    const std::size_t n = w.size();
    if (w.all_equal()) {
        throw std::invalid_argument("c_circle needs at least two distinct weights");
    }
    if (d < static_cast<Int>(n)) {
        throw std::invalid_argument("c_circle needs d >= n (d = " + std::to_string(d) +
                                    ", n = " + std::to_string(n) + ")");
    }
    const ConjugateProfile conj = conjugate(w, n);
    const std::size_t k = conj.k();
    // heights h_0 = n, h_1, ..., h_k and run lengths a_1, ..., a_k.
    std::vector<Int> h{static_cast<Int>(n)};
    std::vector<Int> a{conj.a0};
    for (const auto& run : conj.runs) {
        h.push_back(run.height);
        a.push_back(run.length);
    }
    const Int w1 = w.front();
    const Int w2 = WeightGapProfile(w).second_largest();
    const Int hk = h[k];
    const Int ak = a[k];

    std::vector<Int> cap(n);
    for (Int j = 1; j <= static_cast<Int>(n); ++j) {  // 1-based bin index
        Int value = 0;
        if (j <= hk) {
            value = checked_sub(checked_mul(d, w1), 1);
        } else if (j == hk + 1) {
            value = checked_add(checked_add(checked_mul(hk - 1, w1), checked_mul(d - hk + 1, w2)),
                                ak - 1);
        } else if (j <= h[k - 1]) {
            value = checked_add(checked_mul(d, w2), ak - 1);
        } else {
            std::size_t t = 1;
            while (!(h[k - t] < j && j <= h[k - 1 - t])) {
                ++t;
            }
            value = checked_add(checked_mul(d, w[static_cast<std::size_t>(j - 1)]), a[k - t] - 1);
        }
        cap[static_cast<std::size_t>(j - 1)] = value;
    }
    Instance inst(d, w, CapacityProfile(cap));

    std::vector<BinContents> bins(n);
    const auto top = static_cast<std::size_t>(hk);
    bins[0] = {{w1, d}};
    for (std::size_t j = 1; j < top; ++j) {
        bins[j] = {{w1, d - 1}, {w2, 1}};
    }
    bins[top] = {{w1, hk - 1}, {w2, d - hk + 1}};
    for (std::size_t j = top + 1; j < n; ++j) {
        bins[j] = {{w[j], d}};
    }
    WitnessInstance out{inst, WitnessKind::c_circle, 0, Assignment::from_bins(inst, bins)};
    return out;
}

namespace detail {

inline bool pairwise_distinct(const WeightProfile& w) {
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (w[i] == w[i - 1]) {
            return false;
        }
    }
    return true;
}

}  // namespace detail

/// Capacities on which the b-corrected condition holds at every position
/// except `start` (0-based), where the suffix sum falls one short of
/// d * (w_start + ... + w_n) + b(w^{>=start}). The instance is not
/// start-feasible. The truncation w^{>=start} must be pairwise distinct
/// (handled by c_circle) or a single weight.
inline WitnessInstance relaxed_witness(const WeightProfile& w, Int d, std::size_t start) {
    const std::size_t n = w.size();
    if (start >= n) {
        throw std::out_of_range("relaxation index out of range");
    }
    if (d < static_cast<Int>(n)) {
        throw std::invalid_argument("relaxed witnesses need d >= n (d = " + std::to_string(d) +
                                    ", n = " + std::to_string(n) + ")");
    }
    const WeightProfile tail = w.suffix(start);
    std::vector<Int> cap(n);
    WitnessKind kind = WitnessKind::relaxed;
    if (tail.all_equal()) {
        if (tail.size() != 1) {
            throw std::domain_error(
                "an all-equal truncation of length " + std::to_string(tail.size()) +
                " cannot fall short by one while every later suffix condition holds");
        }
        kind = WitnessKind::all_equal_tail;
        cap[n - 1] = checked_sub(checked_mul(d, tail.front()), 1);
    } else if (detail::pairwise_distinct(tail)) {
        const WitnessInstance planted = c_circle(tail, d);
        for (std::size_t j = start; j < n; ++j) {
            cap[j] = planted.instance.capacities[j - start];
        }
    } else {
        throw std::domain_error("truncation " + tail.to_string() +
                                " mixes repeated and distinct weights; no witness construction "
                                "is known for it");
    }
    const Int extra = checked_add(b_constant(w), checked_mul(static_cast<Int>(n), w.front()));
    for (std::size_t j = 0; j < start; ++j) {
        cap[j] = checked_add(checked_mul(d, w[j]), extra);
    }
    Instance inst(d, w, CapacityProfile(cap));  // throws if (a) fails

    const CriteriaReport report = evaluate_criteria(inst);
    for (std::size_t i = 0; i < n; ++i) {
        const CriteriaRow& row = report.rows[i];
        if (i == start) {
            if (row.sufficient_slack != -1) {
                throw std::logic_error("relaxed witness: suffix at the planted index is not one short");
            }
        } else if (row.sufficient_slack < 0) {
            throw std::logic_error("relaxed witness: condition at position " +
                                   std::to_string(i + 1) + " fails");
        }
    }
    return {inst, kind, start, std::nullopt};
}

struct WitnessCheck {
    bool ok = true;
    bool oracle_backed = false;
    bool budget_exceeded = false;
    std::vector<std::string> passed;
    std::vector<std::string> failures;

    void expect(bool condition, const std::string& what) {
        (condition ? passed : failures).push_back(what);
        ok = ok && condition;
    }
};

struct WitnessCheckOptions {
    bool use_oracle = true;
    std::size_t max_bins = 7;
    Int max_d = 12;
    std::uint64_t node_budget = 10'000'000;
};

/// Re-derives every checkable claim of a witness. Analytic checks always
/// run; the oracle confirms the feasibility claims at desk scale.
inline WitnessCheck verify_witness(const WitnessInstance& wit, const WitnessCheckOptions& options = {}) {
    WitnessCheck check;
    const Instance& inst = wit.instance;
    const WeightProfile& w = inst.weights;
    const CriteriaReport report = evaluate_criteria(inst);

    if (wit.kind == WitnessKind::c_circle) {
        check.expect(inst.capacities.total() ==
                         checked_add(inst.total_weight(), b_constant(w) - 1),
                     "total capacity equals d|w| + b(w) - 1");
        if (wit.companion) {
            const Assignment& b = *wit.companion;
            check.expect(is_k_feasible(b, inst.capacities, 1), "companion is 1-feasible");
            const GapVector gaps = gap_vector(b, inst.capacities);
            bool match = gaps.gaps[0] == -1;
            if (!w.all_equal()) {
                const WeightGapProfile gw(w);
                for (std::size_t j = 1; j < w.size(); ++j) {
                    match = match && gaps.gaps[j] == gw.gap(j) - 1;
                }
            }
            check.expect(match, "companion gaps are (-1, g_2(w) - 1, ..., g_n(w) - 1)");
        }
    } else {
        for (std::size_t i = 0; i < w.size(); ++i) {
            const Int slack = report.rows[i].sufficient_slack;
            if (i == wit.start) {
                check.expect(slack == -1, "suffix sum at position " + std::to_string(i + 1) +
                                              " is one below the corrected bound");
            } else {
                check.expect(slack >= 0, "corrected condition holds at position " +
                                             std::to_string(i + 1));
            }
        }
    }

    const bool small = inst.n() <= options.max_bins && inst.d <= options.max_d;
    if (!options.use_oracle || !small) {
        return check;
    }
    try {
        const OracleOptions oo{options.node_budget};
        if (wit.kind == WitnessKind::c_circle) {
            check.expect(decide(inst, 1, oo).feasible, "oracle: 1-feasible");
            check.expect(!decide(inst, 0, oo).feasible, "oracle: not feasible");
        } else {
            check.expect(!decide(inst, wit.start, oo).feasible,
                         "oracle: not " + std::to_string(wit.start) + "-feasible");
        }
        check.oracle_backed = true;
    } catch (const OracleUndecided&) {
        check.budget_exceeded = true;
    }
    return check;
}

}  // namespace hmbp
