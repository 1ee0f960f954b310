// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every check is exact; time limits are part of each criterion.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hmbp/hmbp.hpp"

using namespace hmbp;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& what) {
        if (!condition && ok) {
            ok = false;
            detail = what;
        }
    }
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void run(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    const auto start = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.ok = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (out.ok && secs > limit_s) {
        out.ok = false;
        out.detail = "took longer than the limit";
    }
    if (!out.ok) {
        ++failures;
    }
    std::printf("%s %d %s [%.3f s, limit %.3g s]%s%s\n", out.ok ? "PASS" : "FAIL", id, title, secs,
                limit_s, out.detail.empty() ? "" : " : ", out.detail.c_str());
    std::fflush(stdout);
}

WeightProfile random_weights(std::mt19937& rng, std::size_t max_n, Int max_w, bool strictly) {
    std::uniform_int_distribution<std::size_t> len(strictly ? 1 : 2, max_n);
    std::uniform_int_distribution<Int> val(0, max_w);
    for (;;) {
        std::vector<Int> w(len(rng));
        for (auto& v : w) {
            v = val(rng);
        }
        std::sort(w.rbegin(), w.rend());
        if (strictly) {
            if (std::adjacent_find(w.begin(), w.end()) == w.end()) {
                return WeightProfile(w);
            }
            continue;
        }
        WeightProfile p(w);
        if (!p.all_equal()) {
            return p;
        }
    }
}

std::string describe(const Instance& inst) {
    return "d=" + std::to_string(inst.d) + " w=(" + inst.weights.to_string() + ") C=(" +
           inst.capacities.to_string() + ")";
}

Outcome b_constants() {
    Outcome out;
    out.require(b_constant(WeightProfile({3, 3, 0})) == 4, "b(3,3,0)");
    out.require(b_constant(WeightProfile({3, 3})) == 0, "b(3,3)");
    out.require(b_constant(WeightProfile({5, 5, 3, 1, 1, 0})) == 4, "b(5,5,3,1,1,0)");
    out.require(suffix_b_constants(WeightProfile({6, 6, 4, 4, 4, 0})) ==
                    std::vector<Int>{7, 6, 9, 6, 3, 0},
                "b row of (6,6,4,4,4,0)");
    return out;
}

Outcome gap_identity() {
    Outcome out;
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 1000; ++trial) {
        const WeightProfile w = random_weights(rng, 8, 10, false);
        Int sum = 0;
        const WeightGapProfile gw(w);
        for (Int g : gw.gaps()) {
            sum += g - 1;
        }
        out.require(sum == b_constant(w), "gap sum differs from b for " + w.to_string());
    }
    for (int trial = 0; trial < 1000; ++trial) {
        const WeightProfile w = random_weights(rng, 8, 10, true);
        const Int n = static_cast<Int>(w.size());
        out.require(b_constant(w) == w.front() - w.back() - n + 1,
                    "strictly decreasing formula fails for " + w.to_string());
    }
    return out;
}

Outcome oracle_examples() {
    Outcome out;
    out.require(decide(fixtures::six_bin_feasible(), 0).feasible, "six-bin instance");
    out.require(!decide(fixtures::pair_infeasible(), 0).feasible, "(3,1) with C=(5,3)");
    for (Int d = 1; d <= 8; ++d) {
        out.require(decide(fixtures::pair_even(d), 0).feasible == (d % 2 == 0),
                    "(2d,2d) at d=" + std::to_string(d));
    }
    const Instance circ = c_circle(WeightProfile({5, 5, 3, 1, 1, 0}), 6).instance;
    out.require(decide(circ, 1).feasible, "C° not 1-feasible");
    out.require(!decide(circ, 0).feasible, "C° feasible");
    out.require(!decide(fixtures::modified_profile(6), 0).feasible, "modified profile feasible");
    return out;
}

Outcome witness_sweep() {
    Outcome out;
    std::mt19937 rng(7);
    int undecided = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const WeightProfile w = random_weights(rng, 6, 6, false);
        const Int n = static_cast<Int>(w.size());
        std::uniform_int_distribution<Int> dd(n, n + 4);
        const Int d = dd(rng);
        const WitnessInstance wit = c_circle(w, d);
        const Instance& inst = wit.instance;
        out.require(inst.capacities.total() == d * w.total() + b_constant(w) - 1,
                    "total capacity for " + describe(inst));
        for (std::size_t j = 1; j < inst.n(); ++j) {
            out.require(inst.capacities[j] <= inst.capacities[j - 1], "monotonicity " + describe(inst));
        }
        const GapVector g = gap_vector(*wit.companion, inst.capacities);
        const WeightGapProfile gw(w);
        out.require(g.gaps[0] == -1, "companion lead gap " + describe(inst));
        for (std::size_t j = 1; j < inst.n(); ++j) {
            out.require(g.gaps[j] == gw.gap(j) - 1, "companion gap " + describe(inst));
        }
        try {
            out.require(decide(inst, 1).feasible, "oracle: not 1-feasible " + describe(inst));
            out.require(!decide(inst, 0).feasible, "oracle: feasible " + describe(inst));
        } catch (const OracleUndecided&) {
            ++undecided;
        }
    }
    out.require(undecided == 0, std::to_string(undecided) + " instances exceeded the oracle budget");
    return out;
}

Outcome trace_regression() {
    Outcome out;
    {
        const auto s = fixtures::shrink_light();
        DescentTrace trace;
        const Assignment res =
            shrink_gaps(s.instance, s.start, s.r, WeightGapProfile(s.instance.weights), &trace);
        const std::string expected =
            "# kind bin_a bin_b from_a from_b lead [reps i j l t]\n"
            "gap-shift 5 6 0^1 1^1 lead=18 i=6 j=5\n"
            "gap-shift 6 2 1^1 3^1 lead=18 i=5 j=3\n"
            "top-release 1 2 5^1 3^1 lead=16 i=3\n";
        out.require(trace.to_text() == expected, "light-phase trace:\n" + trace.to_text());
        out.require(res == fixtures::six_bin_solution(), "light-phase final partition");
    }
    {
        const auto s = fixtures::shrink_top();
        DescentTrace trace;
        const Assignment res =
            shrink_gaps(s.instance, s.start, s.r, WeightGapProfile(s.instance.weights), &trace);
        const std::string expected =
            "# kind bin_a bin_b from_a from_b lead [reps i j l t]\n"
            "top-exchange 4 2 1^1 0^1 lead=25 i=2 j=4 l=5 t=0\n"
            "top-exchange 4 3 1^1 0^1 lead=25 i=3 j=4 l=5 t=0\n"
            "top-release 1 4 5^1 1^1 lead=21 i=4\n";
        out.require(trace.to_text() == expected, "top-phase trace:\n" + trace.to_text());
        out.require(res.bin_weight(0) == 21, "top-phase lead weight");
    }
    return out;
}

Outcome threshold_construction() {
    Outcome out;
    std::mt19937 rng(99);
    const std::vector<WeightProfile> families{WeightProfile({5, 5, 3, 1, 1, 0}), WeightProfile({3, 1}),
                                              WeightProfile({5, 5, 5, 1, 0})};
    int runs = 0, solved = 0;
    Int rounds = 0;
    for (const auto& w : families) {
        const Int d = d_threshold(w);
        for (int trial = 0; trial < 50; ++trial) {
            const CapacityProfile tight = tight_profile(w, d);
            std::vector<Int> c(tight.entries().begin(), tight.entries().end());
            std::uniform_int_distribution<int> steps(0, 4);
            std::uniform_int_distribution<std::size_t> upto(1, c.size());
            std::uniform_int_distribution<Int> amount(0, 3 * w.front());
            for (int k = steps(rng); k > 0; --k) {
                const std::size_t j = upto(rng);
                const Int x = amount(rng);
                for (std::size_t i = 0; i < j; ++i) {
                    c[i] += x;
                }
            }
            // Moving capacity to a later bin only raises suffix sums, and
            // pushes the diagonal start over capacity.
            for (int k = 0; k < 8 && c.size() > 1; ++k) {
                const std::size_t i = std::uniform_int_distribution<std::size_t>(0, c.size() - 2)(rng);
                const std::size_t j = std::uniform_int_distribution<std::size_t>(i + 1, c.size() - 1)(rng);
                const Int room = j == i + 1 ? (c[i] - c[j]) / 2 : std::min(c[i] - c[i + 1], c[j - 1] - c[j]);
                if (room <= 0) {
                    continue;
                }
                const Int x = std::uniform_int_distribution<Int>(0, room)(rng);
                c[i] -= x;
                c[j] += x;
            }
            const Instance inst(d, w, CapacityProfile(c));
            out.require(classify(inst).kind == VerdictKind::guaranteed_feasible,
                        "profile not guaranteed " + describe(inst));
            const SolveResult res = solve(inst);
            ++runs;
            const bool good = res.status == SolveStatus::feasible &&
                              res.method == SolveMethod::constructed &&
                              is_k_feasible(*res.assignment, inst.capacities, 0);
            solved += good ? 1 : 0;
            rounds += res.rounds;
            out.require(good, "solve did not construct a feasible assignment for " + describe(inst) +
                                  (res.stall ? " (" + res.stall->step + ": " + res.stall->reason + ")"
                                             : ""));
        }
    }
    if (out.ok) {
        out.detail = std::to_string(solved) + "/" + std::to_string(runs) + " constructed, " +
                     std::to_string(rounds) + " descent rounds";
    }
    return out;
}

Outcome consistency() {
    Outcome out;
    std::mt19937 rng(4242);
    int classify_checks = 0, solve_checks = 0, truncation_checks = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        std::uniform_int_distribution<std::size_t> len(1, 5);
        std::uniform_int_distribution<Int> val(0, 5);
        std::uniform_int_distribution<Int> dd(1, 8);
        std::vector<Int> w(len(rng));
        for (auto& v : w) {
            v = val(rng);
        }
        std::sort(w.rbegin(), w.rend());
        const Int d = dd(rng);
        std::uniform_int_distribution<Int> jitter(-2, 2 + w.front());
        std::vector<Int> c;
        for (Int v : w) {
            c.push_back(d * v + jitter(rng));
        }
        std::sort(c.rbegin(), c.rend());
        const Instance inst(d, WeightProfile(w), CapacityProfile(c));
        const bool feasible = decide(inst, 0).feasible;
        if (classify(inst).kind == VerdictKind::infeasible) {
            ++classify_checks;
            out.require(!feasible, "classify infeasible but oracle feasible: " + describe(inst));
        }
        const SolveResult res = solve(inst);
        if (res.status == SolveStatus::feasible) {
            ++solve_checks;
            out.require(feasible, "solve feasible but oracle infeasible: " + describe(inst));
        }
        std::uniform_int_distribution<std::size_t> pick_i(0, inst.n() - 1);
        const std::size_t i = pick_i(rng);
        const Instance tail = inst.truncated(i);
        std::uniform_int_distribution<std::size_t> pick_j(0, tail.n());
        const std::size_t j = pick_j(rng);
        ++truncation_checks;
        out.require(decide(inst, i + j).feasible == decide(tail, j).feasible,
                    "truncation equivalence fails: " + describe(inst) + " i=" + std::to_string(i + 1) +
                        " j=" + std::to_string(j));
    }
    if (out.ok) {
        out.detail = std::to_string(classify_checks) + " infeasible verdicts, " +
                     std::to_string(solve_checks) + " constructions, " +
                     std::to_string(truncation_checks) + " truncation pairs, 0 violations";
    }
    return out;
}

Outcome exploration_data() {
    // The optimal orders of magnitude of the multiplicity thresholds are not
    // decidable at desk scale. Only the data path is checked: the sweep runs
    // and its rows never contradict the oracle.
    Outcome out;
    for (const auto& w : {WeightProfile({3, 1}), WeightProfile({2, 1, 0})}) {
        for (const auto& row : run_bench(w, 1, 8, BenchMode::tight)) {
            out.require(!(row.verdict == "Infeasible" && row.oracle == "feasible"),
                        "bench row contradicts oracle");
            out.require(!(row.oracle == "infeasible" && row.verdict == "GuaranteedFeasible"),
                        "bench row contradicts oracle");
        }
    }
    out.detail = "bound magnitudes not reproducible at desk scale; sweep data only, no bound asserted";
    return out;
}

}  // namespace

int main() {
    run(1, "b-constant regression", 0.001, b_constants);
    run(2, "gap sum identity and strictly decreasing formula", 1.0, gap_identity);
    run(3, "oracle on the worked examples", 30.0, oracle_examples);
    run(4, "witness soundness sweep", 300.0, witness_sweep);
    run(5, "gap-shrinking trace regression", 0.002, trace_regression);
    run(6, "construction at the multiplicity threshold", 120.0, threshold_construction);
    run(7, "oracle / classify / solve consistency", 600.0, consistency);
    run(8, "threshold exploration (data only)", 60.0, exploration_data);
    return failures == 0 ? 0 : 1;
}
