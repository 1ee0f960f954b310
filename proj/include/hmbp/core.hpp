#pragma once

// Exact integer domain types for high-multiplicity partitioning problems:
// d balls of each weight w_1 >= ... >= w_n go into n bins with capacities
// C_1 >= ... >= C_n, exactly d balls per bin.
//
// Positions are 0-based throughout the library. Text formats and the CLI
// print 1-based bin numbers.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hmbp {

using Int = std::int64_t;

// Checked arithmetic. Totals such as d * n * w_1 reach ~1e9 at threshold
// scale, and products of those feed into comparisons.
inline Int checked_add(Int a, Int b) {
    Int out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw std::overflow_error("integer overflow in addition");
    }
    return out;
}

inline Int checked_sub(Int a, Int b) {
    Int out = 0;
    if (__builtin_sub_overflow(a, b, &out)) {
        throw std::overflow_error("integer overflow in subtraction");
    }
    return out;
}

inline Int checked_mul(Int a, Int b) {
    Int out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw std::overflow_error("integer overflow in multiplication");
    }
    return out;
}

namespace detail {

inline std::string join(std::span<const Int> values, const char* sep = " ") {
    std::ostringstream os;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i != 0) {
            os << sep;
        }
        os << values[i];
    }
    return os.str();
}

inline bool is_non_increasing(std::span<const Int> values) {
    return std::adjacent_find(values.begin(), values.end(),
                              [](Int a, Int b) { return a < b; }) == values.end();
}

}  // namespace detail

/// Non-increasing tuple of non-negative integer weights. Trailing zeros are
/// significant (b changes with them), so they are never stripped.
class WeightProfile {
public:
    WeightProfile() = default;

    explicit WeightProfile(std::vector<Int> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) {
            throw std::invalid_argument("weight profile must have at least one entry");
        }
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (entries_[i] < 0) {
                throw std::invalid_argument("weight at position " + std::to_string(i + 1) +
                                            " is negative");
            }
            if (i > 0 && entries_[i] > entries_[i - 1]) {
                throw std::invalid_argument("weights not non-increasing at position " +
                                            std::to_string(i + 1));
            }
        }
    }

    WeightProfile(std::initializer_list<Int> entries)
        : WeightProfile(std::vector<Int>(entries)) {}

    std::size_t size() const { return entries_.size(); }
    Int operator[](std::size_t i) const { return entries_[i]; }
    Int front() const { return entries_.front(); }
    Int back() const { return entries_.back(); }
    std::span<const Int> entries() const { return entries_; }

    /// |w| = w_1 + ... + w_n.
    Int total() const {
        Int sum = 0;
        for (Int v : entries_) {
            sum = checked_add(sum, v);
        }
        return sum;
    }

    bool all_equal() const { return entries_.front() == entries_.back(); }

    std::size_t count_nonzero() const {
        return static_cast<std::size_t>(
            std::count_if(entries_.begin(), entries_.end(), [](Int v) { return v != 0; }));
    }

    /// Distinct values, largest first.
    std::vector<Int> distinct_values() const {
        std::vector<Int> out;
        for (Int v : entries_) {
            if (out.empty() || out.back() != v) {
                out.push_back(v);
            }
        }
        return out;
    }

    std::size_t multiplicity(Int value) const {
        return static_cast<std::size_t>(std::count(entries_.begin(), entries_.end(), value));
    }

    /// Suffix (w_start, ..., w_n).
    WeightProfile suffix(std::size_t start) const {
        if (start >= entries_.size()) {
            throw std::out_of_range("suffix start " + std::to_string(start) +
                                    " out of range for " + std::to_string(entries_.size()) +
                                    " weights");
        }
        return WeightProfile(std::vector<Int>(entries_.begin() + static_cast<std::ptrdiff_t>(start),
                                              entries_.end()));
    }

    std::string to_string() const { return detail::join(entries_); }

    friend bool operator==(const WeightProfile&, const WeightProfile&) = default;

private:
    std::vector<Int> entries_;
};

/// Non-increasing tuple of integer capacities. Negative entries are legal and
/// simply make the problem infeasible.
class CapacityProfile {
public:
    CapacityProfile() = default;

    explicit CapacityProfile(std::vector<Int> entries) : entries_(std::move(entries)) {
        if (entries_.empty()) {
            throw std::invalid_argument("capacity profile must have at least one entry");
        }
        for (std::size_t i = 1; i < entries_.size(); ++i) {
            if (entries_[i] > entries_[i - 1]) {
                throw std::invalid_argument("capacities not non-increasing at position " +
                                            std::to_string(i + 1));
            }
        }
    }

    CapacityProfile(std::initializer_list<Int> entries)
        : CapacityProfile(std::vector<Int>(entries)) {}

    std::size_t size() const { return entries_.size(); }
    Int operator[](std::size_t i) const { return entries_[i]; }
    std::span<const Int> entries() const { return entries_; }

    Int total() const { return suffix_total(0); }

    /// C_start + ... + C_n.
    Int suffix_total(std::size_t start) const {
        Int sum = 0;
        for (std::size_t i = start; i < entries_.size(); ++i) {
            sum = checked_add(sum, entries_[i]);
        }
        return sum;
    }

    CapacityProfile suffix(std::size_t start) const {
        if (start >= entries_.size()) {
            throw std::out_of_range("suffix start " + std::to_string(start) +
                                    " out of range for " + std::to_string(entries_.size()) +
                                    " capacities");
        }
        return CapacityProfile(std::vector<Int>(
            entries_.begin() + static_cast<std::ptrdiff_t>(start), entries_.end()));
    }

    std::string to_string() const { return detail::join(entries_); }

    friend bool operator==(const CapacityProfile&, const CapacityProfile&) = default;

private:
    std::vector<Int> entries_;
};

/// The problem BP(d, C; w).
struct Instance {
    Int d = 1;
    WeightProfile weights;
    CapacityProfile capacities;

    Instance() = default;

    Instance(Int d_, WeightProfile w, CapacityProfile c)
        : d(d_), weights(std::move(w)), capacities(std::move(c)) {
        if (d < 1) {
            throw std::invalid_argument("multiplicity d must be positive");
        }
        if (weights.size() != capacities.size()) {
            throw std::invalid_argument("weights and capacities differ in length (" +
                                        std::to_string(weights.size()) + " vs " +
                                        std::to_string(capacities.size()) + ")");
        }
    }

    std::size_t n() const { return weights.size(); }

    /// d * |w|, the total weight of all balls.
    Int total_weight() const { return checked_mul(d, weights.total()); }

    /// (d, C^{>=start}, w^{>=start}).
    Instance truncated(std::size_t start) const {
        return Instance(d, weights.suffix(start), capacities.suffix(start));
    }

    friend bool operator==(const Instance&, const Instance&) = default;
};

// ---------------------------------------------------------------------------
// Conjugate partitions and the correction constant b.

struct ConjugateRun {
    Int height = 0;  // column height h_t
    Int length = 0;  // run length a_t
    friend bool operator==(const ConjugateRun&, const ConjugateRun&) = default;
};

/// lambda' in run-length form (rows^{a0}, h_1^{a_1}, ..., h_k^{a_k}) with
/// rows > h_1 > ... > h_k > 0.
struct ConjugateProfile {
    Int rows = 0;
    Int a0 = 0;
    std::vector<ConjugateRun> runs;

    std::size_t k() const { return runs.size(); }

    /// Expanded lambda'_1, lambda'_2, ...
    std::vector<Int> expand() const {
        std::vector<Int> out(static_cast<std::size_t>(a0), rows);
        for (const auto& run : runs) {
            out.insert(out.end(), static_cast<std::size_t>(run.length), run.height);
        }
        return out;
    }

    friend bool operator==(const ConjugateProfile&, const ConjugateProfile&) = default;
};

/// Conjugate of w viewed as a partition with exactly `rows` parts (entries
/// past w's length count as zeros; dropped entries must be zero).
inline ConjugateProfile conjugate(const WeightProfile& w, std::size_t rows) {
    if (rows == 0 || rows < w.count_nonzero()) {
        throw std::invalid_argument("rows (" + std::to_string(rows) +
                                    ") smaller than the number of nonzero parts (" +
                                    std::to_string(w.count_nonzero()) + ")");
    }
    ConjugateProfile out;
    out.rows = static_cast<Int>(rows);
    if (w.front() == 0) {
        return out;
    }
    // Column j has height #{i : w_i >= j}; heights only change at the
    // distinct values of w, so walk the distinct values from the bottom.
    std::vector<Int> parts(w.entries().begin(), w.entries().end());
    parts.resize(std::max(parts.size(), rows), 0);
    parts.resize(rows);

    Int column = 0;  // columns emitted so far
    for (std::size_t i = rows; i-- > 0;) {
        const Int value = parts[i];
        if (value <= column) {
            continue;
        }
        const Int height = static_cast<Int>(i + 1);
        const Int length = value - column;
        if (height == out.rows) {
            out.a0 = length;
        } else {
            out.runs.push_back({height, length});
        }
        column = value;
    }
    return out;
}

/// b(lambda) from the run-length form of lambda'.
inline Int b_constant(const ConjugateProfile& conj) {
    if (conj.runs.empty()) {
        return 0;
    }
    Int sum = 0;
    Int previous = conj.rows;
    for (const auto& run : conj.runs) {
        sum = checked_add(sum, checked_mul(previous - run.height, run.length - 1));
        previous = run.height;
    }
    const auto& last = conj.runs.back();
    return checked_add(sum, checked_mul(last.height - 1, last.length - 1));
}

/// b(w), using exactly the length of w as the number of rows.
inline Int b_constant(const WeightProfile& w) {
    return b_constant(conjugate(w, w.size()));
}

/// b(w^{>=i}) for i = 0..n-1.
inline std::vector<Int> suffix_b_constants(const WeightProfile& w) {
    std::vector<Int> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        out[i] = b_constant(w.suffix(i));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Gap sequence of a weight profile.

/// Predecessor/successor structure of w and the gap sequence g_2(w)..g_n(w).
/// Only defined when w has at least two distinct entries.
class WeightGapProfile {
public:
    explicit WeightGapProfile(const WeightProfile& w) : values_(w.distinct_values()) {
        if (values_.size() < 2) {
            throw std::invalid_argument("gap sequence needs at least two distinct weights");
        }
        gaps_.reserve(w.size() - 1);
        for (std::size_t i = 1; i < w.size(); ++i) {
            const Int value = w[i];
            if (value == values_.front()) {
                gaps_.push_back(value - values_[1]);
            } else {
                gaps_.push_back(*predecessor(value) - value);
            }
        }
    }

    /// g_{i}(w) for 0-based position i >= 1.
    Int gap(std::size_t i) const {
        if (i == 0 || i > gaps_.size()) {
            throw std::out_of_range("gap sequence is indexed from position 1");
        }
        return gaps_[i - 1];
    }

    /// (g_2(w), ..., g_n(w)).
    std::span<const Int> gaps() const { return gaps_; }

    Int second_largest() const { return values_[1]; }
    Int largest() const { return values_.front(); }

    /// Nearest strictly larger weight value; empty for the top value.
    std::optional<Int> predecessor(Int value) const {
        auto it = std::find(values_.begin(), values_.end(), value);
        if (it == values_.end()) {
            throw std::invalid_argument("value " + std::to_string(value) + " is not a weight");
        }
        if (it == values_.begin()) {
            return std::nullopt;
        }
        return *(it - 1);
    }

    /// Nearest strictly smaller weight value; empty for the bottom value.
    std::optional<Int> successor(Int value) const {
        auto it = std::find(values_.begin(), values_.end(), value);
        if (it == values_.end()) {
            throw std::invalid_argument("value " + std::to_string(value) + " is not a weight");
        }
        if (it + 1 == values_.end()) {
            return std::nullopt;
        }
        return *(it + 1);
    }

private:
    std::vector<Int> values_;
    std::vector<Int> gaps_;
};

inline WeightGapProfile weight_gap_profile(const WeightProfile& w) { return WeightGapProfile(w); }

/// n^3 * w_1 * (2n + w_1): the multiplicity beyond which the b-corrected
/// suffix conditions guarantee feasibility.
inline Int d_threshold(const WeightProfile& w) {
    const Int n = static_cast<Int>(w.size());
    const Int w1 = w.front();
    return checked_mul(checked_mul(checked_mul(checked_mul(n, n), n), w1),
                       checked_add(checked_mul(2, n), w1));
}

/// Shift weights so that w_n = 0; capacities shift by d * w_n. The result is
/// feasible exactly when the input is.
inline Instance normalize(const Instance& inst) {
    const Int shift = inst.weights.back();
    if (shift == 0) {
        return inst;
    }
    std::vector<Int> w(inst.weights.entries().begin(), inst.weights.entries().end());
    std::vector<Int> c(inst.capacities.entries().begin(), inst.capacities.entries().end());
    const Int cap_shift = checked_mul(inst.d, shift);
    for (auto& v : w) {
        v -= shift;
    }
    for (auto& v : c) {
        v = checked_sub(v, cap_shift);
    }
    return Instance(inst.d, WeightProfile(std::move(w)), CapacityProfile(std::move(c)));
}

// ---------------------------------------------------------------------------
// Assignments.

/// `count` balls of weight `value`.
struct Balls {
    Int value = 0;
    Int count = 0;
    friend bool operator==(const Balls&, const Balls&) = default;
};

using BinContents = std::vector<Balls>;

/// Count matrix: counts[c][j] balls of the c-th distinct weight value in bin
/// j. Storage is per distinct value, so memory is O(m * n) regardless of d.
class Assignment {
public:
    Assignment() = default;

    /// Validates non-negativity, per-bin totals d and per-class supplies.
    Assignment(std::vector<Int> class_values, std::vector<Int> class_supply,
               std::vector<std::vector<Int>> counts, Int per_bin)
        : values_(std::move(class_values)),
          supply_(std::move(class_supply)),
          counts_(std::move(counts)),
          per_bin_(per_bin) {
        if (values_.empty() || values_.size() != supply_.size() || values_.size() != counts_.size()) {
            throw std::invalid_argument("assignment class tables have inconsistent sizes");
        }
        for (std::size_t c = 1; c < values_.size(); ++c) {
            if (values_[c] >= values_[c - 1]) {
                throw std::invalid_argument("assignment class values must be strictly decreasing");
            }
        }
        const std::size_t bins = counts_.front().size();
        for (std::size_t c = 0; c < counts_.size(); ++c) {
            if (counts_[c].size() != bins) {
                throw std::invalid_argument("assignment count rows differ in length");
            }
            Int row = 0;
            for (Int x : counts_[c]) {
                if (x < 0) {
                    throw std::invalid_argument("assignment has a negative count");
                }
                row = checked_add(row, x);
            }
            if (row != supply_[c]) {
                throw std::invalid_argument("balls of weight " + std::to_string(values_[c]) +
                                            " total " + std::to_string(row) + ", expected " +
                                            std::to_string(supply_[c]));
            }
        }
        for (std::size_t j = 0; j < bins; ++j) {
            if (bin_size(j) != per_bin_) {
                throw std::invalid_argument("bin " + std::to_string(j + 1) + " holds " +
                                            std::to_string(bin_size(j)) + " balls, expected " +
                                            std::to_string(per_bin_));
            }
        }
    }

    /// Empty-bin layout for an instance; counts are all zero (not valid until filled).
    static Assignment layout_for(const Instance& inst) {
        Assignment a;
        a.values_ = inst.weights.distinct_values();
        a.per_bin_ = inst.d;
        for (Int v : a.values_) {
            a.supply_.push_back(checked_mul(inst.d, static_cast<Int>(inst.weights.multiplicity(v))));
        }
        a.counts_.assign(a.values_.size(), std::vector<Int>(inst.n(), 0));
        return a;
    }

    /// Bin j holds d balls of weight w_j.
    static Assignment diagonal(const Instance& inst) {
        Assignment a = layout_for(inst);
        for (std::size_t j = 0; j < inst.n(); ++j) {
            a.counts_[*a.class_of(inst.weights[j])][j] = inst.d;
        }
        return a;
    }

    /// Build from per-bin contents such as {{5,1},{3,3},{1,2}}.
    static Assignment from_bins(const Instance& inst, const std::vector<BinContents>& bins) {
        if (bins.size() != inst.n()) {
            throw std::invalid_argument("expected " + std::to_string(inst.n()) + " bins, got " +
                                        std::to_string(bins.size()));
        }
        Assignment a = layout_for(inst);
        for (std::size_t j = 0; j < bins.size(); ++j) {
            for (const auto& balls : bins[j]) {
                auto c = a.class_of(balls.value);
                if (!c) {
                    throw std::invalid_argument("weight " + std::to_string(balls.value) +
                                                " is not part of the instance");
                }
                a.counts_[*c][j] = checked_add(a.counts_[*c][j], balls.count);
            }
        }
        return Assignment(a.values_, a.supply_, a.counts_, a.per_bin_);
    }

    std::size_t num_classes() const { return values_.size(); }
    std::size_t num_bins() const { return counts_.empty() ? 0 : counts_.front().size(); }
    Int per_bin() const { return per_bin_; }
    Int class_value(std::size_t c) const { return values_[c]; }
    Int class_supply(std::size_t c) const { return supply_[c]; }
    std::span<const Int> class_values() const { return values_; }
    Int count(std::size_t c, std::size_t bin) const { return counts_[c][bin]; }

    std::optional<std::size_t> class_of(Int value) const {
        auto it = std::find(values_.begin(), values_.end(), value);
        if (it == values_.end()) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - values_.begin());
    }

    /// Number of balls of weight `value` in `bin` (0 for foreign values).
    Int count_of_value(Int value, std::size_t bin) const {
        auto c = class_of(value);
        return c ? counts_[*c][bin] : 0;
    }

    Int bin_size(std::size_t bin) const {
        Int sum = 0;
        for (const auto& row : counts_) {
            sum += row[bin];
        }
        return sum;
    }

    /// w(B_bin).
    Int bin_weight(std::size_t bin) const {
        Int sum = 0;
        for (std::size_t c = 0; c < values_.size(); ++c) {
            sum = checked_add(sum, checked_mul(values_[c], counts_[c][bin]));
        }
        return sum;
    }

    /// Non-zero classes of a bin, heaviest first.
    BinContents contents(std::size_t bin) const {
        BinContents out;
        for (std::size_t c = 0; c < values_.size(); ++c) {
            if (counts_[c][bin] > 0) {
                out.push_back({values_[c], counts_[c][bin]});
            }
        }
        return out;
    }

    /// Moves `from_a` out of bin a into bin b and `from_b` out of bin b into
    /// bin a. Both lists must carry the same number of balls; the call is
    /// all-or-nothing.
    void exchange(std::size_t a, std::size_t b, std::span<const Balls> from_a,
                  std::span<const Balls> from_b) {
        if (a >= num_bins() || b >= num_bins()) {
            throw std::out_of_range("exchange bin out of range");
        }
        Int out_a = 0;
        Int out_b = 0;
        std::vector<Int> delta(values_.size(), 0);  // net change of bin a per class
        for (const auto& balls : from_a) {
            if (balls.count < 0) {
                throw std::invalid_argument("exchange with a negative count");
            }
            delta[require_class(balls.value)] -= balls.count;
            out_a += balls.count;
        }
        for (const auto& balls : from_b) {
            if (balls.count < 0) {
                throw std::invalid_argument("exchange with a negative count");
            }
            delta[require_class(balls.value)] += balls.count;
            out_b += balls.count;
        }
        if (out_a != out_b) {
            throw std::invalid_argument("exchange moves unequal numbers of balls");
        }
        for (std::size_t c = 0; c < values_.size(); ++c) {
            if (counts_[c][a] + delta[c] < 0 || counts_[c][b] - delta[c] < 0) {
                throw std::invalid_argument("exchange needs more balls of weight " +
                                            std::to_string(values_[c]) + " than available");
            }
        }
        if (a == b) {
            return;
        }
        for (std::size_t c = 0; c < values_.size(); ++c) {
            counts_[c][a] += delta[c];
            counts_[c][b] -= delta[c];
        }
    }

    /// Swap `count` balls of weight va in bin a with as many of weight vb in bin b.
    void swap_balls(std::size_t a, Int va, std::size_t b, Int vb, Int count = 1) {
        const Balls out_a{va, count};
        const Balls out_b{vb, count};
        exchange(a, b, std::span<const Balls>(&out_a, 1), std::span<const Balls>(&out_b, 1));
    }

    /// Replace bins start..n-1 with the bins of `sub`, an assignment of the
    /// truncated instance. The classes of `sub` must be a subset of ours and
    /// the suffix must currently hold exactly the same multiset.
    void assign_suffix(std::size_t start, const Assignment& sub) {
        if (start + sub.num_bins() != num_bins() || sub.per_bin_ != per_bin_) {
            throw std::invalid_argument("suffix assignment has the wrong shape");
        }
        std::vector<std::vector<Int>> next = counts_;
        for (auto& row : next) {
            std::fill(row.begin() + static_cast<std::ptrdiff_t>(start), row.end(), 0);
        }
        for (std::size_t c = 0; c < sub.num_classes(); ++c) {
            const std::size_t mine = require_class(sub.values_[c]);
            for (std::size_t j = 0; j < sub.num_bins(); ++j) {
                next[mine][start + j] = sub.counts_[c][j];
            }
        }
        Assignment check(values_, supply_, std::move(next), per_bin_);
        counts_ = std::move(check.counts_);
    }

    /// The bins start..n-1 as an assignment of (d, C^{>=start}, w^{>=start}).
    /// Requires that these bins hold exactly the suffix multiset.
    Assignment suffix(const Instance& inst, std::size_t start) const {
        const Instance sub = inst.truncated(start);
        Assignment out = layout_for(sub);
        for (std::size_t c = 0; c < values_.size(); ++c) {
            auto sc = out.class_of(values_[c]);
            for (std::size_t j = start; j < num_bins(); ++j) {
                if (counts_[c][j] == 0) {
                    continue;
                }
                if (!sc) {
                    throw std::invalid_argument("bins from position " + std::to_string(start + 1) +
                                                " hold weight " + std::to_string(values_[c]) +
                                                " outside the suffix");
                }
                out.counts_[*sc][j - start] = counts_[c][j];
            }
        }
        return Assignment(out.values_, out.supply_, out.counts_, out.per_bin_);
    }

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    std::size_t require_class(Int value) const {
        auto c = class_of(value);
        if (!c) {
            throw std::invalid_argument("weight " + std::to_string(value) + " is not a ball class");
        }
        return *c;
    }

    std::vector<Int> values_;
    std::vector<Int> supply_;
    std::vector<std::vector<Int>> counts_;
    Int per_bin_ = 0;
};

/// Per-bin gaps g_j = C_j - w(B_j).
struct GapVector {
    std::vector<Int> gaps;

    Int total() const {
        Int sum = 0;
        for (Int g : gaps) {
            sum = checked_add(sum, g);
        }
        return sum;
    }
};

inline GapVector gap_vector(const Assignment& a, const CapacityProfile& c) {
    if (a.num_bins() != c.size()) {
        throw std::invalid_argument("assignment has " + std::to_string(a.num_bins()) +
                                    " bins but there are " + std::to_string(c.size()) +
                                    " capacities");
    }
    GapVector out;
    out.gaps.reserve(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        out.gaps.push_back(checked_sub(c[j], a.bin_weight(j)));
    }
    return out;
}

/// True iff every bin past the first k is within capacity.
inline bool is_k_feasible(const Assignment& a, const CapacityProfile& c, std::size_t k) {
    const GapVector g = gap_vector(a, c);
    for (std::size_t j = k; j < g.gaps.size(); ++j) {
        if (g.gaps[j] < 0) {
            return false;
        }
    }
    return true;
}

/// `5^1 3^3 1^2` style rendering of one bin.
inline std::string format_bin(const BinContents& bin) {
    std::ostringstream os;
    for (std::size_t i = 0; i < bin.size(); ++i) {
        if (i != 0) {
            os << ' ';
        }
        os << bin[i].value << '^' << bin[i].count;
    }
    return os.str();
}

}  // namespace hmbp
