#pragma once

// Threshold exploration: for a weight profile and a range of d, build either
// the tight b-corrected capacities or the C° witness, then record the
// classifier verdict, the solver outcome and (at desk scale) the oracle.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hmbp/core.hpp"
#include "hmbp/criteria.hpp"
#include "hmbp/oracle.hpp"
#include "hmbp/solver.hpp"
#include "hmbp/witness.hpp"

namespace hmbp {

/// C_i = d w_i + b(w^{>=i}) - b(w^{>=i+1}); any non-monotone entry is raised
/// to its successor, which keeps every suffix sum at or above its bound.
inline CapacityProfile tight_profile(const WeightProfile& w, Int d) {
    const std::vector<Int> b = suffix_b_constants(w);
    const std::size_t n = w.size();
    std::vector<Int> c(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Int next = i + 1 < n ? b[i + 1] : 0;
        c[i] = checked_add(checked_mul(d, w[i]), b[i] - next);
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        c[i] = std::max(c[i], c[i + 1]);
    }
    return CapacityProfile(c);
}

enum class BenchMode { tight, witness };

inline const char* to_string(BenchMode mode) {
    return mode == BenchMode::tight ? "tight" : "witness";
}

struct BenchRow {
    std::string w_id;
    Int d = 0;
    BenchMode mode = BenchMode::tight;
    std::string verdict;
    std::string oracle;  // feasible | infeasible | undecided | skipped
    Int rounds = 0;
    bool stall = false;
    double ms = 0;
};

inline constexpr const char* kBenchHeader = "w_id,d,mode,verdict,oracle,rounds,stall,ms";

inline std::string weight_id(const WeightProfile& w) {
    return detail::join(w.entries(), "-");
}

inline std::string to_csv(const BenchRow& row) {
    char ms[32];
    std::snprintf(ms, sizeof ms, "%.3f", row.ms);
    std::ostringstream os;
    os << row.w_id << ',' << row.d << ',' << to_string(row.mode) << ',' << row.verdict << ','
       << row.oracle << ',' << row.rounds << ',' << (row.stall ? 1 : 0) << ',' << ms;
    return os.str();
}

struct BenchOptions {
    SolverConfig solver;
    OracleLimits oracle;
    unsigned jobs = 1;
};

inline Instance bench_instance(const WeightProfile& w, Int d, BenchMode mode) {
    if (mode == BenchMode::tight) {
        return Instance(d, w, tight_profile(w, d));
    }
    return c_circle(w, d).instance;
}

inline BenchRow bench_one(const WeightProfile& w, Int d, BenchMode mode, const BenchOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    const Instance inst = bench_instance(w, d, mode);
    BenchRow row;
    row.w_id = weight_id(w);
    row.d = d;
    row.mode = mode;
    row.verdict = to_string(classify(inst).kind);
    SolverConfig cfg = options.solver;
    cfg.fallback_to_oracle = false;  // the oracle column is reported separately
    const SolveResult solved = solve(inst, cfg);
    row.rounds = solved.rounds;
    row.stall = solved.status == SolveStatus::stalled;
    if (options.oracle.admits(inst)) {
        try {
            row.oracle = decide(inst, 0, OracleOptions{options.oracle.node_budget}).feasible
                             ? "feasible"
                             : "infeasible";
        } catch (const OracleUndecided&) {
            row.oracle = "undecided";
        }
    } else {
        row.oracle = "skipped";
    }
    row.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                 .count();
    return row;
}

/// One row per d in [d_min, d_max], in d order. Witness mode skips d < n,
/// where C° is not defined.
inline std::vector<BenchRow> run_bench(const WeightProfile& w, Int d_min, Int d_max,
                                       BenchMode mode, const BenchOptions& options = {}) {
    std::vector<Int> ds;
    for (Int d = std::max<Int>(d_min, 1); d <= d_max; ++d) {
        if (mode == BenchMode::witness && d < static_cast<Int>(w.size())) {
            continue;
        }
        ds.push_back(d);
    }
    std::vector<BenchRow> rows(ds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < ds.size(); k = next++) {
            rows[k] = bench_one(w, ds[k], mode, options);
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(ds.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }
    return rows;
}

/// Smallest d from which every later row in the sweep is feasible, by the
/// oracle where it ran and by construction otherwise.
inline std::optional<Int> empirical_min_feasible_d(const std::vector<BenchRow>& rows) {
    std::optional<Int> best;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
        const bool feasible =
            it->oracle == "feasible" || (it->oracle != "infeasible" && !it->stall);
        if (!feasible) {
            break;
        }
        best = it->d;
    }
    return best;
}

}  // namespace hmbp
