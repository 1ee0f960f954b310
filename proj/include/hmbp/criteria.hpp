#pragma once

// Necessary suffix conditions, their b-corrected sufficient versions, and the
// resulting three-way classification of an instance.

#include <optional>
#include <string>
#include <vector>

#include "hmbp/core.hpp"

namespace hmbp {

struct CriteriaRow {
    Int suffix_capacity = 0;   // C_i + ... + C_n
    Int suffix_demand = 0;     // d * (w_i + ... + w_n)
    Int b = 0;                 // b(w^{>=i})
    Int necessary_slack = 0;   // suffix_capacity - suffix_demand
    Int sufficient_slack = 0;  // necessary_slack - b
};

struct CriteriaReport {
    std::vector<CriteriaRow> rows;  // one per position i = 0..n-1
    Int d_threshold = 0;
    bool meets_threshold = false;

    /// First position with a negative necessary slack.
    std::optional<std::size_t> necessary_violation() const {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].necessary_slack < 0) {
                return i;
            }
        }
        return std::nullopt;
    }

    /// First position with a negative sufficient slack.
    std::optional<std::size_t> sufficient_violation() const {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].sufficient_slack < 0) {
                return i;
            }
        }
        return std::nullopt;
    }
};

inline CriteriaReport evaluate_criteria(const Instance& inst) {
    CriteriaReport report;
    const std::size_t n = inst.n();
    report.rows.resize(n);
    const std::vector<Int> b = suffix_b_constants(inst.weights);
    Int cap = 0;
    Int weight = 0;
    for (std::size_t i = n; i-- > 0;) {
        cap = checked_add(cap, inst.capacities[i]);
        weight = checked_add(weight, inst.weights[i]);
        CriteriaRow& row = report.rows[i];
        row.suffix_capacity = cap;
        row.suffix_demand = checked_mul(inst.d, weight);
        row.b = b[i];
        row.necessary_slack = checked_sub(row.suffix_capacity, row.suffix_demand);
        row.sufficient_slack = checked_sub(row.necessary_slack, row.b);
    }
    report.d_threshold = d_threshold(inst.weights);
    report.meets_threshold = inst.d >= report.d_threshold;
    return report;
}

/// Slack of each necessary condition; a negative entry proves infeasibility.
inline std::vector<Int> necessary_conditions(const Instance& inst) {
    std::vector<Int> out;
    for (const auto& row : evaluate_criteria(inst).rows) {
        out.push_back(row.necessary_slack);
    }
    return out;
}

/// Slack of each b-corrected condition.
inline std::vector<Int> sufficient_conditions(const Instance& inst) {
    std::vector<Int> out;
    for (const auto& row : evaluate_criteria(inst).rows) {
        out.push_back(row.sufficient_slack);
    }
    return out;
}

enum class VerdictKind { infeasible, guaranteed_feasible, indeterminate };

inline const char* to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::infeasible:
            return "Infeasible";
        case VerdictKind::guaranteed_feasible:
            return "GuaranteedFeasible";
        case VerdictKind::indeterminate:
            return "Indeterminate";
    }
    return "?";
}

struct Verdict {
    VerdictKind kind = VerdictKind::indeterminate;
    // Position of the violated condition: necessary for infeasible,
    // sufficient for indeterminate (empty when only d is below threshold).
    std::optional<std::size_t> index;
};

inline Verdict classify(const Instance& inst) {
    if (inst.weights.all_equal()) {
        // Every bin gets d balls of the same weight.
        const Int need = checked_mul(inst.d, inst.weights.front());
        if (inst.capacities[inst.n() - 1] >= need) {
            return {VerdictKind::guaranteed_feasible, std::nullopt};
        }
        return {VerdictKind::infeasible, inst.n() - 1};
    }
    const CriteriaReport report = evaluate_criteria(inst);
    if (auto i = report.necessary_violation()) {
        return {VerdictKind::infeasible, i};
    }
    auto i = report.sufficient_violation();
    if (!i && report.meets_threshold) {
        return {VerdictKind::guaranteed_feasible, std::nullopt};
    }
    return {VerdictKind::indeterminate, i};
}

}  // namespace hmbp
