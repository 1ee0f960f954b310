#pragma once

// Exact decision of k-feasibility and the minimal lead-bin load by
// exhaustive search over per-bin class-count vectors. Ground truth for desk
// scale instances (roughly n <= 7, at most 5 distinct weights, d <= 12).

#include <chrono>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hmbp/core.hpp"

namespace hmbp {

struct OracleOptions {
    std::uint64_t node_budget = 10'000'000;
};

/// The search hit its node budget; nothing is known about the answer.
class OracleUndecided : public std::runtime_error {
public:
    explicit OracleUndecided(std::uint64_t nodes)
        : std::runtime_error("oracle undecided: node budget of " + std::to_string(nodes) +
                             " exceeded"),
          nodes_(nodes) {}
    std::uint64_t nodes() const { return nodes_; }

private:
    std::uint64_t nodes_;
};

struct OracleResult {
    bool feasible = false;
    std::optional<Assignment> witness;
    std::uint64_t nodes_explored = 0;
    std::chrono::microseconds elapsed{0};
};

struct MinLoadResult {
    Int weight = 0;  // minimal w(B_1) over 1-feasible assignments
    Assignment witness;
    std::uint64_t nodes_explored = 0;
    std::chrono::microseconds elapsed{0};
};

namespace detail {

struct StateHash {
    std::size_t operator()(const std::vector<Int>& key) const noexcept {
        std::uint64_t h = 1469598103934665603ULL;
        for (Int v : key) {
            h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h *= 1099511628211ULL;
        }
        return static_cast<std::size_t>(h);
    }
};

class Search {
public:
    Search(const Instance& inst, const OracleOptions& options)
        : inst_(inst),
          layout_(Assignment::layout_for(inst)),
          budget_(options.node_budget) {
        m_ = layout_.num_classes();
        for (std::size_t c = 0; c < m_; ++c) {
            values_.push_back(layout_.class_value(c));
            residual_.push_back(layout_.class_supply(c));
        }
        chosen_.assign(inst.n(), std::vector<Int>(m_, 0));
    }

    // Bins first..n-1 are constrained; bins 0..first-1 take whatever is left.
    bool decide(std::size_t first) {
        first_ = first;
        return fill(static_cast<std::ptrdiff_t>(inst_.n()) - 1);
    }

    // Maximal load that bins 1..n-1 can carry while respecting capacity.
    std::optional<Int> max_tail_load() {
        first_ = 1;
        const Int best = best_load(static_cast<std::ptrdiff_t>(inst_.n()) - 1);
        if (best == kInfeasible) {
            return std::nullopt;
        }
        reconstruct_best(static_cast<std::ptrdiff_t>(inst_.n()) - 1);
        return best;
    }

    // Assignment from the chosen per-bin vectors; unconstrained bins are filled
    // heaviest-first from what remains.
    Assignment witness() const {
        std::vector<std::vector<Int>> counts(m_, std::vector<Int>(inst_.n(), 0));
        std::vector<Int> left = residual_;
        for (std::size_t j = first_; j < inst_.n(); ++j) {
            for (std::size_t c = 0; c < m_; ++c) {
                counts[c][j] = chosen_[j][c];
            }
        }
        std::size_t c = 0;
        for (std::size_t j = 0; j < first_; ++j) {
            Int need = inst_.d;
            while (need > 0) {
                while (left[c] == 0) {
                    ++c;
                }
                const Int take = std::min(need, left[c]);
                counts[c][j] += take;
                left[c] -= take;
                need -= take;
            }
        }
        std::vector<Int> supply;
        for (std::size_t k = 0; k < m_; ++k) {
            supply.push_back(layout_.class_supply(k));
        }
        return Assignment(values_, supply, counts, inst_.d);
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    static constexpr Int kInfeasible = std::numeric_limits<Int>::min();

    std::vector<Int> key(std::ptrdiff_t bin) const {
        std::vector<Int> k;
        k.reserve(m_ + 1);
        k.push_back(bin);
        k.insert(k.end(), residual_.begin(), residual_.end());
        return k;
    }

    void count_node() {
        if (++nodes_ > budget_) {
            throw OracleUndecided(budget_);
        }
    }

    // The p constrained bins with the smallest capacities must be able to take
    // the p*d lightest remaining balls, for every p.
    bool lower_bounds_hold(std::ptrdiff_t bin) const {
        const auto first = static_cast<std::ptrdiff_t>(first_);
        Int cap = 0;
        Int light = 0;
        std::size_t c = m_;
        Int avail = 0;  // balls of class c-1 not yet used for the lightest sum
        for (std::ptrdiff_t j = bin; j >= first; --j) {
            cap += inst_.capacities[static_cast<std::size_t>(j)];
            Int need = inst_.d;
            while (need > 0) {
                if (avail == 0) {
                    --c;
                    avail = residual_[c];
                    continue;
                }
                const Int take = std::min(need, avail);
                light += take * values_[c];
                avail -= take;
                need -= take;
            }
            if (cap < light) {
                return false;
            }
        }
        return true;
    }

    // Lightest possible weight of `count` balls drawn from classes c..m-1.
    std::optional<Int> lightest_fill(std::size_t c, Int count) const {
        Int weight = 0;
        for (std::size_t k = m_; k-- > c && count > 0;) {
            const Int take = std::min(count, residual_[k]);
            weight += take * values_[k];
            count -= take;
        }
        if (count > 0) {
            return std::nullopt;
        }
        return weight;
    }

    // Calls visit(vector) for every class-count vector that sums to d, fits the
    // residual supply and weighs at most `cap`; heaviest class counts first.
    // visit returns true to stop the enumeration.
    bool enumerate(Int cap, const std::function<bool(const std::vector<Int>&, Int)>& visit) {
        std::vector<Int> comp(m_, 0);
        return enumerate_from(0, inst_.d, cap, 0, comp, visit);
    }

    bool enumerate_from(std::size_t c, Int rem, Int cap, Int weight, std::vector<Int>& comp,
                        const std::function<bool(const std::vector<Int>&, Int)>& visit) {
        if (rem == 0) {
            return visit(comp, weight);
        }
        if (c == m_) {
            return false;
        }
        Int hi = std::min(rem, residual_[c]);
        if (values_[c] > 0) {
            hi = std::min(hi, (cap - weight) / values_[c]);
        }
        for (Int x = hi; x >= 0; --x) {
            const Int w = weight + x * values_[c];
            auto rest = lightest_fill(c + 1, rem - x);
            if (!rest || w + *rest > cap) {
                continue;
            }
            comp[c] = x;
            if (enumerate_from(c + 1, rem - x, cap, w, comp, visit)) {
                comp[c] = 0;
                return true;
            }
        }
        comp[c] = 0;
        return false;
    }

    void apply(std::ptrdiff_t bin, const std::vector<Int>& comp) {
        for (std::size_t c = 0; c < m_; ++c) {
            residual_[c] -= comp[c];
        }
        chosen_[static_cast<std::size_t>(bin)] = comp;
    }

    void undo(std::ptrdiff_t bin, const std::vector<Int>& comp) {
        for (std::size_t c = 0; c < m_; ++c) {
            residual_[c] += comp[c];
        }
        std::fill(chosen_[static_cast<std::size_t>(bin)].begin(),
                  chosen_[static_cast<std::size_t>(bin)].end(), 0);
    }

    bool fill(std::ptrdiff_t bin) {
        if (bin < static_cast<std::ptrdiff_t>(first_)) {
            return true;
        }
        if (!lower_bounds_hold(bin)) {
            return false;
        }
        auto k = key(bin);
        if (dead_.contains(k)) {
            return false;
        }
        const Int cap = inst_.capacities[static_cast<std::size_t>(bin)];
        const bool found = enumerate(cap, [&](const std::vector<Int>& comp, Int) {
            count_node();
            apply(bin, comp);
            if (fill(bin - 1)) {
                return true;
            }
            undo(bin, comp);
            return false;
        });
        if (!found) {
            dead_.insert(std::move(k));
        }
        return found;
    }

    Int best_load(std::ptrdiff_t bin) {
        if (bin < static_cast<std::ptrdiff_t>(first_)) {
            return 0;
        }
        if (!lower_bounds_hold(bin)) {
            return kInfeasible;
        }
        auto k = key(bin);
        if (auto it = best_.find(k); it != best_.end()) {
            return it->second;
        }
        Int best = kInfeasible;
        const Int cap = inst_.capacities[static_cast<std::size_t>(bin)];
        enumerate(cap, [&](const std::vector<Int>& comp, Int weight) {
            count_node();
            apply(bin, comp);
            const Int sub = best_load(bin - 1);
            undo(bin, comp);
            if (sub != kInfeasible) {
                best = std::max(best, weight + sub);
            }
            return false;
        });
        best_.emplace(std::move(k), best);
        return best;
    }

    void reconstruct_best(std::ptrdiff_t bin) {
        if (bin < static_cast<std::ptrdiff_t>(first_)) {
            return;
        }
        const Int target = best_load(bin);
        const Int cap = inst_.capacities[static_cast<std::size_t>(bin)];
        std::vector<Int> pick;
        enumerate(cap, [&](const std::vector<Int>& comp, Int weight) {
            apply(bin, comp);
            const Int sub = best_load(bin - 1);
            undo(bin, comp);
            if (sub != kInfeasible && weight + sub == target) {
                pick = comp;
                return true;
            }
            return false;
        });
        apply(bin, pick);
        reconstruct_best(bin - 1);
    }

    const Instance& inst_;
    Assignment layout_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::size_t m_ = 0;
    std::size_t first_ = 0;
    std::vector<Int> values_;
    std::vector<Int> residual_;
    std::vector<std::vector<Int>> chosen_;  // per bin class-count vectors
    std::unordered_set<std::vector<Int>, StateHash> dead_;
    std::unordered_map<std::vector<Int>, Int, StateHash> best_;
};

}  // namespace detail

/// Exact answer to "is there an assignment with bins k..n-1 within capacity".
/// Throws OracleUndecided when the node budget runs out.
inline OracleResult decide(const Instance& inst, std::size_t k, const OracleOptions& options = {}) {
    if (k > inst.n()) {
        throw std::invalid_argument("k = " + std::to_string(k) + " exceeds the bin count " +
                                    std::to_string(inst.n()));
    }
    const auto start = std::chrono::steady_clock::now();
    detail::Search search(inst, options);
    OracleResult result;
    result.feasible = search.decide(k);
    if (result.feasible) {
        result.witness = search.witness();
    }
    result.nodes_explored = search.nodes();
    result.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - start);
    return result;
}

/// Minimal w(B_1) over all 1-feasible assignments. Throws invalid_argument
/// when the instance is not 1-feasible.
inline MinLoadResult min_bin1_weight(const Instance& inst, const OracleOptions& options = {}) {
    const auto start = std::chrono::steady_clock::now();
    detail::Search search(inst, options);
    auto tail = search.max_tail_load();
    if (!tail) {
        throw std::invalid_argument("instance is not 1-feasible");
    }
    MinLoadResult result;
    result.weight = checked_sub(inst.total_weight(), *tail);
    result.witness = search.witness();
    result.nodes_explored = search.nodes();
    result.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - start);
    return result;
}

}  // namespace hmbp
