#pragma once

// Constructive feasibility engine. Starting from any assignment, bins are
// fixed from the last one upwards: at stage s the bins s..n-1 are first
// normalized to hold exactly the balls of weights w_s..w_n, then a descent on
// the truncated problem drives the load of bin s under its capacity while
// keeping bins s+1..n-1 feasible. Every descent round either lowers that load
// or ends feasible, so the construction terminates.
//
// A descent round tries, in order:
//   single-swap   trade a top-weight ball of the lead bin for a lighter ball
//                 of a bin with at least w_1 spare capacity;
//   boost-3way    weight-preserving three-class exchanges that raise the
//                 number of top-weight balls in the lead bin to N;
//   shrink        a perfect matching R (weight position i -> bin R_i holding
//                 at least r balls of weight w_i) followed by gap shrinking.
//
// Stalls are reported, never masked: they happen when an instance sits below
// the multiplicity threshold or violates the b-corrected sum condition.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hmbp/core.hpp"
#include "hmbp/criteria.hpp"
#include "hmbp/matching.hpp"
#include "hmbp/oracle.hpp"

namespace hmbp {

struct OracleLimits {
    std::size_t max_bins = 7;
    std::size_t max_classes = 5;
    Int max_d = 12;
    std::uint64_t node_budget = 10'000'000;

    bool admits(const Instance& inst) const {
        return inst.n() <= max_bins && inst.weights.distinct_values().size() <= max_classes &&
               inst.d <= max_d;
    }
};

struct SolverConfig {
    std::optional<Int> r;           // matching threshold, default 2 * n * w_1
    std::optional<Int> N;           // top-weight target, default (n - 1) * n * r
    std::optional<Int> max_rounds;  // per stage, default d * w_1 + 1
    bool fallback_to_oracle = false;
    OracleLimits oracle_limits;

    Int resolved_r(const Instance& inst) const {
        if (r) {
            return std::max<Int>(*r, 1);
        }
        const Int n = static_cast<Int>(inst.n());
        return std::max<Int>(checked_mul(checked_mul(2, n), inst.weights.front()), 1);
    }

    Int resolved_N(const Instance& inst) const {
        if (N) {
            return *N;
        }
        const Int n = static_cast<Int>(inst.n());
        return checked_mul(checked_mul(n - 1, n), resolved_r(inst));
    }

    Int resolved_max_rounds(const Instance& inst) const {
        if (max_rounds) {
            return *max_rounds;
        }
        return checked_add(checked_mul(inst.d, inst.weights.front()), 1);
    }
};

/// R with R[0] = 0: weight position i is served by bin R[i].
struct MatchingPermutation {
    std::vector<std::size_t> bin_of;

    std::size_t operator[](std::size_t i) const { return bin_of[i]; }
    std::size_t size() const { return bin_of.size(); }

    bool valid() const {
        if (bin_of.empty() || bin_of[0] != 0) {
            return false;
        }
        std::vector<bool> seen(bin_of.size(), false);
        for (std::size_t b : bin_of) {
            if (b >= bin_of.size() || seen[b]) {
                return false;
            }
            seen[b] = true;
        }
        return true;
    }

    /// Smallest n_i(B_{R_i}) over i >= 1.
    Int min_count(const Instance& inst, const Assignment& a) const {
        Int low = std::numeric_limits<Int>::max();
        for (std::size_t i = 1; i < bin_of.size(); ++i) {
            low = std::min(low, a.count_of_value(inst.weights[i], bin_of[i]));
        }
        return low;
    }
};

// ---------------------------------------------------------------------------
// Trace of moves.

enum class MoveKind {
    single_swap,
    boost_exchange,
    gap_shift,
    gap_release,
    top_exchange,
    top_release,
    stage_normalize,
};

inline const char* to_string(MoveKind kind) {
    switch (kind) {
        case MoveKind::single_swap:
            return "single-swap";
        case MoveKind::boost_exchange:
            return "boost-3way";
        case MoveKind::gap_shift:
            return "gap-shift";
        case MoveKind::gap_release:
            return "gap-release";
        case MoveKind::top_exchange:
            return "top-exchange";
        case MoveKind::top_release:
            return "top-release";
        case MoveKind::stage_normalize:
            return "stage-normalize";
    }
    return "?";
}

inline std::optional<MoveKind> move_kind_from_string(const std::string& name) {
    for (MoveKind kind : {MoveKind::single_swap, MoveKind::boost_exchange, MoveKind::gap_shift,
                          MoveKind::gap_release, MoveKind::top_exchange, MoveKind::top_release,
                          MoveKind::stage_normalize}) {
        if (name == to_string(kind)) {
            return kind;
        }
    }
    return std::nullopt;
}

/// One exchange between two bins. Weight positions i, j, l and the
/// multiplier t are recorded for the gap-shrinking moves.
struct Move {
    MoveKind kind = MoveKind::single_swap;
    std::size_t bin_a = 0;
    std::size_t bin_b = 0;
    BinContents from_a;
    BinContents from_b;
    Int lead_weight = 0;  // w of the stage's lead bin after the move
    Int reps = 1;
    std::optional<std::size_t> i, j, l;
    std::optional<Int> t;

    void apply(Assignment& a) const { a.exchange(bin_a, bin_b, from_a, from_b); }

    friend bool operator==(const Move&, const Move&) = default;
};

namespace detail {

inline std::string format_balls(const BinContents& balls) {
    if (balls.empty()) {
        return "-";
    }
    std::ostringstream os;
    for (std::size_t k = 0; k < balls.size(); ++k) {
        if (k != 0) {
            os << ',';
        }
        os << balls[k].value << '^' << balls[k].count;
    }
    return os.str();
}

inline BinContents parse_balls(const std::string& text) {
    BinContents out;
    if (text == "-") {
        return out;
    }
    std::istringstream is(text);
    std::string item;
    while (std::getline(is, item, ',')) {
        const auto caret = item.find('^');
        if (caret == std::string::npos) {
            throw std::invalid_argument("malformed ball group '" + item + "'");
        }
        out.push_back({std::stoll(item.substr(0, caret)), std::stoll(item.substr(caret + 1))});
    }
    return out;
}

}  // namespace detail

/// Ordered log of moves; one text line per move.
struct DescentTrace {
    std::vector<Move> moves;

    std::size_t count(MoveKind kind) const {
        return static_cast<std::size_t>(std::count_if(
            moves.begin(), moves.end(), [kind](const Move& m) { return m.kind == kind; }));
    }

    void replay(Assignment& a) const {
        for (const auto& move : moves) {
            move.apply(a);
        }
    }

    /// Shift every bin index by `offset` (stage traces into full-instance bins).
    void append_shifted(const DescentTrace& other, std::size_t offset) {
        for (Move move : other.moves) {
            move.bin_a += offset;
            move.bin_b += offset;
            moves.push_back(std::move(move));
        }
    }

    /// Format: `kind bin_a bin_b from_a from_b lead=W [reps=Q] [i=..] [j=..]
    /// [l=..] [t=..]` with 1-based bins and weight positions.
    std::string to_text() const {
        std::ostringstream os;
        os << "# kind bin_a bin_b from_a from_b lead [reps i j l t]\n";
        for (const auto& m : moves) {
            os << to_string(m.kind) << ' ' << m.bin_a + 1 << ' ' << m.bin_b + 1 << ' '
               << detail::format_balls(m.from_a) << ' ' << detail::format_balls(m.from_b)
               << " lead=" << m.lead_weight;
            if (m.reps != 1) {
                os << " reps=" << m.reps;
            }
            if (m.i) {
                os << " i=" << *m.i + 1;
            }
            if (m.j) {
                os << " j=" << *m.j + 1;
            }
            if (m.l) {
                os << " l=" << *m.l + 1;
            }
            if (m.t) {
                os << " t=" << *m.t;
            }
            os << '\n';
        }
        return os.str();
    }

    static DescentTrace parse(const std::string& text) {
        DescentTrace trace;
        std::istringstream is(text);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(is, line)) {
            ++line_no;
            if (line.empty() || line[0] == '#') {
                continue;
            }
            std::istringstream ls(line);
            std::string kind, from_a, from_b, field;
            Move m;
            std::size_t a = 0, b = 0;
            if (!(ls >> kind >> a >> b >> from_a >> from_b) || a == 0 || b == 0) {
                throw std::invalid_argument("trace line " + std::to_string(line_no) +
                                            ": malformed move");
            }
            auto k = move_kind_from_string(kind);
            if (!k) {
                throw std::invalid_argument("trace line " + std::to_string(line_no) +
                                            ": unknown move kind '" + kind + "'");
            }
            m.kind = *k;
            m.bin_a = a - 1;
            m.bin_b = b - 1;
            m.from_a = detail::parse_balls(from_a);
            m.from_b = detail::parse_balls(from_b);
            while (ls >> field) {
                const auto eq = field.find('=');
                if (eq == std::string::npos) {
                    throw std::invalid_argument("trace line " + std::to_string(line_no) +
                                                ": malformed field '" + field + "'");
                }
                const std::string name = field.substr(0, eq);
                const Int value = std::stoll(field.substr(eq + 1));
                if (name == "lead") {
                    m.lead_weight = value;
                } else if (name == "reps") {
                    m.reps = value;
                } else if (name == "i") {
                    m.i = static_cast<std::size_t>(value - 1);
                } else if (name == "j") {
                    m.j = static_cast<std::size_t>(value - 1);
                } else if (name == "l") {
                    m.l = static_cast<std::size_t>(value - 1);
                } else if (name == "t") {
                    m.t = value;
                } else {
                    throw std::invalid_argument("trace line " + std::to_string(line_no) +
                                                ": unknown field '" + name + "'");
                }
            }
            trace.moves.push_back(std::move(m));
        }
        return trace;
    }
};

// ---------------------------------------------------------------------------
// Stalls.

struct Stall {
    std::string step;    // which operation gave up
    std::string reason;
    std::vector<std::size_t> deficient_set;  // weight positions, matching stalls only
};

class SolverStall : public std::runtime_error {
public:
    explicit SolverStall(Stall stall, std::optional<Assignment> partial = std::nullopt)
        : std::runtime_error(stall.step + ": " + stall.reason),
          stall_(std::move(stall)),
          partial_(std::move(partial)) {}

    const Stall& stall() const { return stall_; }
    const std::optional<Assignment>& partial() const { return partial_; }

private:
    Stall stall_;
    std::optional<Assignment> partial_;
};

// ---------------------------------------------------------------------------
// Stage normalization.

/// Rearranges `prev` so that bins start..n-1 hold exactly d balls of each of
/// w_start..w_n. Only swaps of a lighter ball from bins 0..start-1 against a
/// heavier ball in the suffix are used, so suffix loads never increase.
/// Requires bins start+1..n-1 to be within capacity.
inline Assignment initial_stage_partition(const Instance& inst, std::size_t start, Assignment prev,
                                          DescentTrace* trace = nullptr) {
    const std::size_t n = inst.n();
    if (start >= n) {
        throw std::out_of_range("stage start out of range");
    }
    if (!is_k_feasible(prev, inst.capacities, start + 1)) {
        throw std::invalid_argument("bins after position " + std::to_string(start + 1) +
                                    " are not all within capacity");
    }
    const std::size_t m = prev.num_classes();
    std::vector<Int> target(m, 0);  // suffix supply per class
    for (std::size_t t = start; t < n; ++t) {
        target[*prev.class_of(inst.weights[t])] += inst.d;
    }
    auto held = [&](std::size_t c) {
        Int sum = 0;
        for (std::size_t j = start; j < n; ++j) {
            sum += prev.count(c, j);
        }
        return sum;
    };
    for (;;) {
        // Heaviest class with too many balls in the suffix, lightest class
        // with too few; the former is strictly heavier.
        std::optional<std::size_t> excess, deficit;
        for (std::size_t c = 0; c < m; ++c) {
            const Int h = held(c);
            if (h > target[c] && !excess) {
                excess = c;
            }
            if (h < target[c]) {
                deficit = c;
            }
        }
        if (!excess) {
            break;
        }
        std::size_t in_suffix = start;
        while (prev.count(*excess, in_suffix) == 0) {
            ++in_suffix;
        }
        std::size_t in_prefix = 0;
        while (prev.count(*deficit, in_prefix) == 0) {
            ++in_prefix;
        }
        const Int q = std::min({held(*excess) - target[*excess], target[*deficit] - held(*deficit),
                                prev.count(*excess, in_suffix), prev.count(*deficit, in_prefix)});
        const Int heavy = prev.class_value(*excess);
        const Int light = prev.class_value(*deficit);
        prev.swap_balls(in_suffix, heavy, in_prefix, light, q);
        if (trace) {
            Move move;
            move.kind = MoveKind::stage_normalize;
            move.bin_a = in_suffix;
            move.bin_b = in_prefix;
            move.from_a = {{heavy, q}};
            move.from_b = {{light, q}};
            move.lead_weight = prev.bin_weight(start);
            move.reps = 1;
            trace->moves.push_back(std::move(move));
        }
    }
    return prev;
}

// ---------------------------------------------------------------------------
// Descent steps. All of them act on a 1-feasible assignment of one
// (possibly truncated) instance whose lead bin is bin 0.

namespace detail {

inline Int gap_of(const Instance& inst, const Assignment& a, std::size_t bin) {
    return checked_sub(inst.capacities[bin], a.bin_weight(bin));
}

inline void require_shapes(const Instance& inst, const Assignment& a) {
    if (a.num_bins() != inst.n() || a.per_bin() != inst.d) {
        throw std::invalid_argument("assignment does not match the instance");
    }
    for (std::size_t j = 0; j < inst.n(); ++j) {
        if (!a.class_of(inst.weights[j])) {
            throw std::invalid_argument("assignment classes do not match the instance weights");
        }
    }
}

inline bool single_swap_in_place(const Instance& inst, Assignment& a, DescentTrace* trace) {
    const Int w1 = inst.weights.front();
    if (a.count_of_value(w1, 0) == 0 || gap_of(inst, a, 0) >= 0) {
        return false;
    }
    for (std::size_t bin = 1; bin < inst.n(); ++bin) {
        if (gap_of(inst, a, bin) < w1) {
            continue;
        }
        // Lightest ball in the bin; it differs from w_1 whenever the lead bin
        // is over capacity.
        for (std::size_t c = a.num_classes(); c-- > 0;) {
            const Int v = a.class_value(c);
            if (v >= w1 || a.count(c, bin) == 0) {
                continue;
            }
            a.swap_balls(0, w1, bin, v);
            if (trace) {
                trace->moves.push_back({MoveKind::single_swap, 0, bin, {{w1, 1}}, {{v, 1}},
                                        a.bin_weight(0), 1, std::nullopt, std::nullopt,
                                        std::nullopt, std::nullopt});
            }
            return true;
        }
    }
    return false;
}

// Returns true once the lead bin holds at least N top-weight balls.
inline bool boost_in_place(const Instance& inst, Assignment& a, Int target, DescentTrace* trace) {
    const std::size_t m = a.num_classes();
    const Int w1 = a.class_value(0);
    for (;;) {
        const Int have = a.count(0, 0);
        if (have >= target) {
            return true;
        }
        std::vector<std::size_t> partners(inst.n() - 1);
        std::iota(partners.begin(), partners.end(), std::size_t{1});
        std::stable_sort(partners.begin(), partners.end(), [&](std::size_t x, std::size_t y) {
            return a.count(0, x) > a.count(0, y);
        });
        bool moved = false;
        for (std::size_t partner : partners) {
            for (std::size_t k = 1; k < m && !moved; ++k) {
                for (std::size_t t = k + 1; t < m && !moved; ++t) {
                    const Int wk = a.class_value(k);
                    const Int wt = a.class_value(t);
                    const Int out_k = w1 - wt;  // w_k balls leaving the lead bin
                    const Int in_t = w1 - wk;   // w_t balls entering it
                    const Int in_1 = wk - wt;   // w_1 balls entering it
                    if (a.count(k, 0) < out_k || a.count(t, partner) < in_t ||
                        a.count(0, partner) < in_1) {
                        continue;
                    }
                    const Int reps = std::min({a.count(k, 0) / out_k, a.count(t, partner) / in_t,
                                               a.count(0, partner) / in_1,
                                               (target - have + in_1 - 1) / in_1});
                    const BinContents from_lead{{wk, out_k * reps}};
                    const BinContents from_partner{{w1, in_1 * reps}, {wt, in_t * reps}};
                    a.exchange(0, partner, from_lead, from_partner);
                    if (trace) {
                        trace->moves.push_back({MoveKind::boost_exchange, 0, partner, from_lead,
                                                from_partner, a.bin_weight(0), reps, std::nullopt,
                                                std::nullopt, std::nullopt, std::nullopt});
                    }
                    moved = true;
                }
            }
            if (moved) {
                break;
            }
        }
        if (!moved) {
            return false;
        }
    }
}

inline BipartiteGraph count_graph(const Instance& inst, const Assignment& a, Int threshold) {
    const std::size_t size = inst.n() - 1;
    BipartiteGraph g(size);
    for (std::size_t i = 1; i < inst.n(); ++i) {
        for (std::size_t bin = 1; bin < inst.n(); ++bin) {
            if (a.count_of_value(inst.weights[i], bin) >= threshold) {
                g.add_edge(i - 1, bin - 1);
            }
        }
    }
    return g;
}

inline MatchingPermutation to_permutation(const std::vector<std::size_t>& match) {
    MatchingPermutation r;
    r.bin_of.push_back(0);
    for (std::size_t right : match) {
        r.bin_of.push_back(right + 1);
    }
    return r;
}

}  // namespace detail

/// Trades one top-weight ball of the lead bin for the lightest ball of the
/// first bin with at least w_1 spare capacity. Empty when the lead bin is
/// within capacity, holds no top-weight ball, or no such bin exists.
inline std::optional<Assignment> single_swap(const Instance& inst, Assignment a) {
    detail::require_shapes(inst, a);
    if (!is_k_feasible(a, inst.capacities, 1)) {
        return std::nullopt;
    }
    if (!detail::single_swap_in_place(inst, a, nullptr)) {
        return std::nullopt;
    }
    return a;
}

/// Repeats weight-preserving three-class exchanges between the lead bin and
/// the partner with the most top-weight balls until the lead bin holds
/// N = cfg.resolved_N(inst) of them. Loads of both bins never change.
inline Assignment boost_w1_count(const Instance& inst, Assignment a, const SolverConfig& cfg,
                                 DescentTrace* trace = nullptr) {
    detail::require_shapes(inst, a);
    if (!is_k_feasible(a, inst.capacities, 1)) {
        throw std::invalid_argument("boost needs a 1-feasible assignment");
    }
    const Int target = cfg.resolved_N(inst);
    if (!detail::boost_in_place(inst, a, target, trace)) {
        const Int have = a.count(0, 0);
        throw SolverStall({"boost",
                           "no three-class exchange available with " + std::to_string(have) +
                               " of " + std::to_string(target) + " top-weight balls in the lead bin",
                           {}},
                          std::move(a));
    }
    return a;
}

/// Perfect matching between weight positions 1..n-1 and bins 1..n-1 using
/// edges with n_i(B_j) >= r. Throws SolverStall with a Hall-violating set.
inline MatchingPermutation find_permutation(const Instance& inst, const Assignment& a, Int r) {
    detail::require_shapes(inst, a);
    const BipartiteGraph g = detail::count_graph(inst, a, r);
    if (auto match = g.perfect_matching()) {
        return detail::to_permutation(*match);
    }
    Stall stall{"matching", "", {}};
    const auto lefts = g.hall_violator();
    std::ostringstream os;
    os << "no perfect matching at threshold r=" << r << "; weight positions {";
    for (std::size_t k = 0; k < lefts.size(); ++k) {
        stall.deficient_set.push_back(lefts[k] + 1);
        os << (k ? "," : "") << lefts[k] + 2;
    }
    os << "} reach only " << g.neighbours(lefts).size() << " bins";
    stall.reason = os.str();
    throw SolverStall(std::move(stall));
}

/// Perfect matching maximizing min_i n_i(B_{R_i}); always exists.
inline std::pair<MatchingPermutation, Int> bottleneck_permutation(const Instance& inst,
                                                                  const Assignment& a) {
    std::vector<Int> levels{0};
    for (std::size_t i = 1; i < inst.n(); ++i) {
        for (std::size_t bin = 1; bin < inst.n(); ++bin) {
            levels.push_back(a.count_of_value(inst.weights[i], bin));
        }
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    std::size_t lo = 0;  // levels[lo] always admits a perfect matching
    std::size_t hi = levels.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi + 1) / 2;
        if (detail::count_graph(inst, a, levels[mid]).perfect_matching()) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    auto match = detail::count_graph(inst, a, levels[lo]).perfect_matching();
    return {detail::to_permutation(*match), levels[lo]};
}

namespace detail {

inline void require_ball(const Assignment& a, Int value, std::size_t bin, Int count,
                         const char* step) {
    if (a.count_of_value(value, bin) < count) {
        throw SolverStall({step, "bin " + std::to_string(bin + 1) + " lacks " +
                                     std::to_string(count) + " ball(s) of weight " +
                                     std::to_string(value),
                           {}},
                          a);
    }
}

// Gap shrinking. Light phase: for positions i with w_i < w2 (second largest
// weight), from the bottom up, shift balls so that bin R_i ends with gap
// below g_i(w), releasing a top ball from the lead bin as soon as some bin
// gains w_1 spare capacity. Top phase: the same for positions with w_i >= w2.
inline void shrink_in_place(const Instance& inst, Assignment& a, const MatchingPermutation& r,
                            const WeightGapProfile& gw, DescentTrace* trace) {
    const std::size_t n = inst.n();
    const auto& w = inst.weights;
    const Int w1 = w.front();
    const Int w2 = gw.second_largest();
    auto gap = [&](std::size_t bin) { return gap_of(inst, a, bin); };
    auto record = [&](MoveKind kind, std::size_t bin_a, std::size_t bin_b, BinContents from_a,
                      BinContents from_b, std::optional<std::size_t> i,
                      std::optional<std::size_t> j, std::optional<std::size_t> l,
                      std::optional<Int> t) {
        if (trace) {
            trace->moves.push_back({kind, bin_a, bin_b, std::move(from_a), std::move(from_b),
                                    a.bin_weight(0), 1, i, j, l, t});
        }
    };

    for (std::size_t i = n - 1; i >= 1 && w[i] < w2; --i) {
        const std::size_t ri = r[i];
        while (gap(ri) >= gw.gap(i)) {
            const Int heavier = *gw.predecessor(w[i]);
            std::size_t j = i;
            while (w[j - 1] != heavier) {
                --j;
            }
            --j;  // largest j < i with w_j = p(w_i)
            const std::size_t rj = r[j];
            require_ball(a, w[i], ri, 1, "shrink light phase");
            require_ball(a, heavier, rj, 1, "shrink light phase");
            a.swap_balls(ri, w[i], rj, heavier);
            record(MoveKind::gap_shift, ri, rj, {{w[i], 1}}, {{heavier, 1}}, i, j, std::nullopt,
                   std::nullopt);
            if (gap(rj) >= w1) {
                require_ball(a, w1, 0, 1, "shrink light release");
                a.swap_balls(0, w1, rj, w[i]);
                record(MoveKind::gap_release, 0, rj, {{w1, 1}}, {{w[i], 1}}, i, j, std::nullopt,
                       std::nullopt);
                return;
            }
        }
    }

    for (std::size_t i = 1; i < n && w[i] >= w2; ++i) {
        const std::size_t ri = r[i];
        while (gap(ri) >= gw.gap(i)) {
            if (a.count_of_value(w2, ri) == 0) {
                std::size_t j = i + 1;
                while (j < n && w[j] != w2) {
                    ++j;
                }
                if (j == n) {
                    throw SolverStall({"shrink top phase",
                                       "no position after " + std::to_string(i + 1) +
                                           " carries the second largest weight",
                                       {}},
                                      a);
                }
                std::size_t l = j + 1;
                while (l < n && !(w[l] < w2 && a.count_of_value(w[l], ri) > 0)) {
                    ++l;
                }
                if (l == n) {
                    throw SolverStall({"shrink top phase",
                                       "bin " + std::to_string(ri + 1) +
                                           " holds no ball lighter than the second largest weight",
                                       {}},
                                      a);
                }
                const std::size_t rj = r[j];
                const Int t = (w[j] - w[l]) / gw.gap(i);
                require_ball(a, w2, rj, t + 1, "shrink top phase");
                require_ball(a, w1, ri, t, "shrink top phase");
                BinContents from_j{{w2, t + 1}};
                BinContents from_i;
                if (t > 0) {
                    from_i.push_back({w1, t});
                }
                from_i.push_back({w[l], 1});
                a.exchange(rj, ri, from_j, from_i);
                record(MoveKind::top_exchange, rj, ri, std::move(from_j), std::move(from_i), i, j,
                       l, t);
            } else {
                require_ball(a, w1, 0, 1, "shrink top release");
                a.swap_balls(0, w1, ri, w2);
                record(MoveKind::top_release, 0, ri, {{w1, 1}}, {{w2, 1}}, i, std::nullopt,
                       std::nullopt, std::nullopt);
                return;
            }
        }
    }
}

}  // namespace detail

/// Gap shrinking for a 1-feasible assignment whose bins 1..n-1 all have gap
/// below w_1, given R. The result is 1-feasible and either has a lighter lead
/// bin or gaps g_{R_i} < g_i(w) for every i >= 1. Throws SolverStall when a
/// required ball is missing (R below the matching threshold).
inline Assignment shrink_gaps(const Instance& inst, Assignment a, const MatchingPermutation& r,
                              const WeightGapProfile& gw, DescentTrace* trace = nullptr) {
    detail::require_shapes(inst, a);
    if (!r.valid() || r.size() != inst.n()) {
        throw std::invalid_argument("R must be a permutation of the bins fixing bin 1");
    }
    if (!is_k_feasible(a, inst.capacities, 1)) {
        throw std::invalid_argument("gap shrinking needs a 1-feasible assignment");
    }
    for (std::size_t bin = 1; bin < inst.n(); ++bin) {
        if (detail::gap_of(inst, a, bin) >= inst.weights.front()) {
            throw std::invalid_argument("bin " + std::to_string(bin + 1) +
                                        " has gap of at least w_1; use a single swap first");
        }
    }
    detail::shrink_in_place(inst, a, r, gw, trace);
    return a;
}

struct DescentOutcome {
    Assignment assignment;
    DescentTrace trace;
    Int rounds = 0;
    Int relaxed_matchings = 0;  // rounds that fell back to the bottleneck matching
    std::optional<Stall> stall;

    bool feasible() const { return !stall; }
};

/// Drives the lead bin of a 1-feasible assignment under capacity.
inline DescentOutcome descend(const Instance& inst, Assignment a, const SolverConfig& cfg) {
    detail::require_shapes(inst, a);
    if (!is_k_feasible(a, inst.capacities, 1)) {
        throw std::invalid_argument("descent needs a 1-feasible assignment");
    }
    DescentOutcome out;
    const Int r = cfg.resolved_r(inst);
    const Int target = cfg.resolved_N(inst);
    const Int max_rounds = cfg.resolved_max_rounds(inst);
    std::optional<WeightGapProfile> gw;
    if (!inst.weights.all_equal()) {
        gw.emplace(inst.weights);
    }
    auto finish = [&](Stall stall) {
        out.stall = std::move(stall);
        out.assignment = std::move(a);
        return std::move(out);
    };

    while (a.bin_weight(0) > inst.capacities[0]) {
        if (out.rounds >= max_rounds) {
            return finish({"descent", "round limit of " + std::to_string(max_rounds) + " reached",
                           {}});
        }
        ++out.rounds;
        if (!gw) {
            return finish({"descent", "all weights equal and the lead bin is over capacity", {}});
        }
        const Int before = a.bin_weight(0);
        if (detail::single_swap_in_place(inst, a, &out.trace)) {
            continue;
        }
        // A shortfall here is not fatal: the shrinking step checks ball
        // availability move by move.
        detail::boost_in_place(inst, a, target, &out.trace);
        if (detail::single_swap_in_place(inst, a, &out.trace)) {
            continue;
        }
        if (a.count_of_value(inst.weights.front(), 0) == 0) {
            return finish({"descent", "lead bin holds no top-weight ball", {}});
        }
        MatchingPermutation perm;
        try {
            perm = find_permutation(inst, a, r);
        } catch (const SolverStall&) {
            perm = bottleneck_permutation(inst, a).first;
            ++out.relaxed_matchings;
        }
        try {
            detail::shrink_in_place(inst, a, perm, *gw, &out.trace);
        } catch (const SolverStall& e) {
            return finish(e.stall());
        }
        if (a.bin_weight(0) >= before && a.bin_weight(0) > inst.capacities[0]) {
            return finish({"descent",
                           "gaps cannot shrink further but the lead bin is still over capacity; "
                           "total capacity is below the b-corrected bound",
                           {}});
        }
    }
    out.assignment = std::move(a);
    return out;
}

// ---------------------------------------------------------------------------
// Full solve.

enum class SolveStatus { feasible, infeasible, stalled };
enum class SolveMethod { constructed, oracle, necessary_conditions, none };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::feasible:
            return "feasible";
        case SolveStatus::infeasible:
            return "infeasible";
        case SolveStatus::stalled:
            return "stalled";
    }
    return "?";
}

inline const char* to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::constructed:
            return "constructed";
        case SolveMethod::oracle:
            return "oracle";
        case SolveMethod::necessary_conditions:
            return "necessary conditions";
        case SolveMethod::none:
            return "none";
    }
    return "?";
}

struct SolveResult {
    SolveStatus status = SolveStatus::stalled;
    SolveMethod method = SolveMethod::none;
    std::optional<Assignment> assignment;
    Assignment start;  // replaying `trace` on `start` yields the constructed assignment
    DescentTrace trace;
    Int rounds = 0;
    Int relaxed_matchings = 0;
    std::optional<Stall> stall;
    std::optional<std::size_t> stalled_stage;
    std::optional<std::size_t> violated_index;  // necessary condition that failed
};

/// Solve from a given starting assignment by descending induction over the
/// stages n-1, ..., 0.
inline SolveResult solve_from(const Instance& inst, Assignment start, const SolverConfig& cfg) {
    detail::require_shapes(inst, start);
    SolveResult result;
    result.start = start;
    const CriteriaReport report = evaluate_criteria(inst);
    if (auto i = report.necessary_violation()) {
        result.status = SolveStatus::infeasible;
        result.method = SolveMethod::necessary_conditions;
        result.violated_index = i;
        return result;
    }

    Assignment a = std::move(start);
    for (std::size_t s = inst.n(); s-- > 0;) {
        a = initial_stage_partition(inst, s, std::move(a), &result.trace);
        const Instance sub = inst.truncated(s);
        if (sub.weights.all_equal()) {
            continue;  // every suffix bin holds d equal balls; capacities suffice
        }
        DescentOutcome outcome = descend(sub, a.suffix(inst, s), cfg);
        result.trace.append_shifted(outcome.trace, s);
        result.rounds += outcome.rounds;
        result.relaxed_matchings += outcome.relaxed_matchings;
        if (outcome.stall) {
            result.stall = std::move(outcome.stall);
            result.stalled_stage = s;
            if (cfg.fallback_to_oracle && cfg.oracle_limits.admits(inst)) {
                try {
                    OracleResult oracle =
                        decide(inst, 0, OracleOptions{cfg.oracle_limits.node_budget});
                    result.method = SolveMethod::oracle;
                    result.status = oracle.feasible ? SolveStatus::feasible : SolveStatus::infeasible;
                    result.assignment = std::move(oracle.witness);
                } catch (const OracleUndecided&) {
                    result.status = SolveStatus::stalled;
                }
            } else {
                result.status = SolveStatus::stalled;
            }
            return result;
        }
        a.assign_suffix(s, outcome.assignment);
    }
    if (!is_k_feasible(a, inst.capacities, 0)) {
        throw std::logic_error("constructed assignment violates a capacity");
    }
    result.status = SolveStatus::feasible;
    result.method = SolveMethod::constructed;
    result.assignment = std::move(a);
    return result;
}

inline SolveResult solve(const Instance& inst, const SolverConfig& cfg = {}) {
    return solve_from(inst, Assignment::diagonal(inst), cfg);
}

}  // namespace hmbp
