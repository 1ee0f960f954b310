// hmbp: check, solve and stress-test high-multiplicity partitioning instances.
//
// Exit codes: 0 feasible, 1 infeasible, 2 undecided, 3 input error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "hmbp/hmbp.hpp"

namespace {

using namespace hmbp;

enum Exit : int { kFeasible = 0, kInfeasible = 1, kUndecided = 2, kInputError = 3 };

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    if (path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), {}};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InputError("cannot open " + path);
    }
    return {std::istreambuf_iterator<char>(in), {}};
}

Instance load(const std::string& path) {
    try {
        return parse_instance(read_file(path));
    } catch (const std::invalid_argument& e) {
        throw InputError(path + ": " + e.what());
    }
}

WeightProfile weights_from(const std::vector<Int>& values) {
    try {
        return WeightProfile(values);
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string("--w: ") + e.what());
    }
}

int cmd_check(const std::string& path) {
    const Instance inst = load(path);
    const CriteriaReport report = evaluate_criteria(inst);
    std::cout << "i  suffix_C  suffix_dw  b  slack  corrected_slack\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        std::cout << i + 1 << "  " << row.suffix_capacity << "  " << row.suffix_demand << "  "
                  << row.b << "  " << row.necessary_slack << "  " << row.sufficient_slack << '\n';
    }
    std::cout << "d threshold: " << report.d_threshold << " (d = " << inst.d << ")\n";
    const Verdict verdict = classify(inst);
    switch (verdict.kind) {
        case VerdictKind::infeasible: {
            const auto& row = report.rows[*verdict.index];
            std::cout << "necessary condition violated at i=" << *verdict.index + 1
                      << ": capacity " << row.suffix_capacity << " < demand " << row.suffix_demand
                      << "; verdict Infeasible\n";
            return kInfeasible;
        }
        case VerdictKind::guaranteed_feasible:
            std::cout << "verdict GuaranteedFeasible\n";
            return kFeasible;
        case VerdictKind::indeterminate:
            if (verdict.index) {
                const auto& row = report.rows[*verdict.index];
                std::cout << "violated at i=" << *verdict.index + 1 << ": slack "
                          << row.necessary_slack << " < b=" << row.b << "; verdict Indeterminate\n";
            } else {
                std::cout << "d = " << inst.d << " is below the threshold "
                          << report.d_threshold << "; verdict Indeterminate\n";
            }
            return kUndecided;
    }
    return kUndecided;
}

struct SolveFlags {
    std::optional<Int> r, N, max_rounds;
    bool fallback = false;
    std::string trace_path;
};

int cmd_solve(const std::string& path, const SolveFlags& flags) {
    const Instance inst = load(path);
    SolverConfig cfg;
    cfg.r = flags.r;
    cfg.N = flags.N;
    cfg.max_rounds = flags.max_rounds;
    cfg.fallback_to_oracle = flags.fallback;
    const SolveResult result = solve(inst, cfg);
    std::cout << "status: " << to_string(result.status) << " (" << to_string(result.method)
              << ")\nrounds: " << result.rounds << '\n';
    if (result.relaxed_matchings > 0) {
        std::cout << "rounds below the matching threshold: " << result.relaxed_matchings << '\n';
    }
    if (result.violated_index) {
        std::cout << "necessary condition violated at i=" << *result.violated_index + 1 << '\n';
    }
    if (result.stall) {
        std::cout << "stall at stage " << *result.stalled_stage + 1 << ": " << result.stall->step
                  << ": " << result.stall->reason << '\n';
    }
    if (result.assignment) {
        std::cout << render_assignment(*result.assignment, inst.capacities);
    }
    if (!flags.trace_path.empty()) {
        std::ofstream out(flags.trace_path);
        if (!out) {
            throw InputError("cannot write " + flags.trace_path);
        }
        out << result.trace.to_text();
    }
    switch (result.status) {
        case SolveStatus::feasible:
            return kFeasible;
        case SolveStatus::infeasible:
            return kInfeasible;
        case SolveStatus::stalled:
            return kUndecided;
    }
    return kUndecided;
}

int cmd_oracle(const std::string& path, std::size_t k, std::uint64_t budget, bool wmin) {
    const Instance inst = load(path);
    const OracleOptions options{budget};
    try {
        if (wmin) {
            try {
                const MinLoadResult res = min_bin1_weight(inst, options);
                std::cout << "minimal bin-1 load: " << res.weight << "\nnodes: "
                          << res.nodes_explored << "\n"
                          << render_assignment(res.witness, inst.capacities);
                return kFeasible;
            } catch (const std::invalid_argument&) {
                std::cout << "not 1-feasible\n";
                return kInfeasible;
            }
        }
        if (k > inst.n()) {
            throw InputError("--k must be at most " + std::to_string(inst.n()));
        }
        const OracleResult res = decide(inst, k, options);
        std::cout << (res.feasible ? "feasible" : "infeasible") << " (bins " << k + 1 << ".."
                  << inst.n() << " constrained)\nnodes: " << res.nodes_explored
                  << "\nelapsed_us: " << res.elapsed.count() << '\n';
        if (res.witness) {
            std::cout << render_assignment(*res.witness, inst.capacities);
        }
        return res.feasible ? kFeasible : kInfeasible;
    } catch (const OracleUndecided& e) {
        std::cout << "undecided: " << e.what() << '\n';
        return kUndecided;
    }
}

int cmd_witness(const std::vector<Int>& w_values, Int d, std::optional<std::size_t> relax) {
    const WeightProfile w = weights_from(w_values);
    WitnessInstance wit = [&] {
        try {
            if (relax) {
                if (*relax < 1 || *relax > w.size()) {
                    throw InputError("--relax must lie in 1.." + std::to_string(w.size()));
                }
                return relaxed_witness(w, d, *relax - 1);
            }
            return c_circle(w, d);
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        } catch (const std::domain_error& e) {
            throw InputError(e.what());
        }
    }();
    std::vector<std::string> header{"construction: " + std::string(to_string(wit.kind)) +
                                        (relax ? " at i0=" + std::to_string(*relax) : ""),
                                    "claim: " + wit.claim()};
    if (wit.companion) {
        for (std::size_t j = 0; j < wit.companion->num_bins(); ++j) {
            header.push_back("companion bin " + std::to_string(j + 1) + ": " +
                             format_bin(wit.companion->contents(j)));
        }
    }
    std::cout << render_instance(wit.instance, header);
    return kFeasible;
}

int cmd_info(const std::vector<Int>& w_values) {
    const WeightProfile w = weights_from(w_values);
    const ConjugateProfile conj = conjugate(w, w.size());
    std::cout << "w: " << w.to_string() << "\nconjugate runs: " << conj.rows << '^' << conj.a0;
    for (const auto& run : conj.runs) {
        std::cout << ' ' << run.height << '^' << run.length;
    }
    std::cout << "\nb by suffix: " << detail::join(suffix_b_constants(w)) << '\n';
    if (w.all_equal()) {
        std::cout << "weight gaps: none (all weights equal)\n";
    } else {
        const WeightGapProfile gw(w);
        std::cout << "weight gaps: " << detail::join(gw.gaps())
                  << "\nsecond largest: " << gw.second_largest()
                  << "\nd threshold: " << d_threshold(w) << '\n';
    }
    return kFeasible;
}

struct BenchFlags {
    std::vector<Int> w;
    Int d_min = 1;
    Int d_max = 8;
    std::string mode = "tight";
    std::string out;
    unsigned jobs = 1;
    std::uint64_t budget = 10'000'000;
};

int cmd_bench(const BenchFlags& flags) {
    const WeightProfile w = weights_from(flags.w);
    BenchOptions options;
    options.jobs = flags.jobs;
    options.oracle.node_budget = flags.budget;
    const BenchMode mode = flags.mode == "witness" ? BenchMode::witness : BenchMode::tight;
    if (mode == BenchMode::witness && w.all_equal()) {
        throw InputError("witness mode needs at least two distinct weights");
    }
    const auto rows = run_bench(w, flags.d_min, flags.d_max, mode, options);
    std::ofstream file;
    if (!flags.out.empty()) {
        file.open(flags.out);
        if (!file) {
            throw InputError("cannot write " + flags.out);
        }
    }
    std::ostream& out = flags.out.empty() ? std::cout : file;
    out << kBenchHeader << '\n';
    for (const auto& row : rows) {
        out << to_csv(row) << '\n';
    }
    if (!w.all_equal()) {
        std::cerr << "d threshold: " << d_threshold(w) << '\n';
    }
    if (auto d = empirical_min_feasible_d(rows); d && !rows.empty()) {
        std::cerr << "feasible from d = " << *d << " through " << rows.back().d << '\n';
    } else {
        std::cerr << "no feasible tail in the sweep\n";
    }
    return kFeasible;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"High-multiplicity partitioning: criteria, solver, oracle and witnesses"};
    app.require_subcommand(1);

    std::string path;
    auto* check = app.add_subcommand("check", "Print suffix conditions and the verdict");
    check->add_option("file", path, "Instance file ('-' for stdin)")->required();

    SolveFlags solve_flags;
    auto* solve_cmd = app.add_subcommand("solve", "Construct a feasible assignment");
    solve_cmd->add_option("file", path, "Instance file ('-' for stdin)")->required();
    solve_cmd->add_option("--r", solve_flags.r, "Matching threshold");
    solve_cmd->add_option("--N", solve_flags.N, "Top-weight target for the lead bin");
    solve_cmd->add_option("--max-rounds", solve_flags.max_rounds, "Round limit per stage");
    solve_cmd->add_flag("--fallback-oracle", solve_flags.fallback,
                        "Ask the exact oracle when the construction stalls");
    solve_cmd->add_option("--trace", solve_flags.trace_path, "Write the move log here");

    std::size_t k = 0;
    std::uint64_t budget = 10'000'000;
    bool wmin = false;
    auto* oracle = app.add_subcommand("oracle", "Exact decision by exhaustive search");
    oracle->add_option("file", path, "Instance file ('-' for stdin)")->required();
    oracle->add_option("--k", k, "Leave the first k bins unconstrained");
    oracle->add_option("--budget", budget, "Search node budget");
    oracle->add_flag("--wmin", wmin, "Minimal bin-1 load over 1-feasible assignments");

    std::vector<Int> w;
    Int d = 0;
    std::optional<std::size_t> relax;
    auto* witness = app.add_subcommand("witness", "Emit an infeasibility witness instance");
    witness->add_option("--w", w, "Weights, non-increasing")->required();
    witness->add_option("--d", d, "Balls per weight")->required();
    witness->add_option("--relax", relax, "Plant the witness on the truncation at this position");

    auto* info = app.add_subcommand("info", "Conjugate runs, b values and weight gaps");
    info->add_option("--w", w, "Weights, non-increasing")->required();

    BenchFlags bench_flags;
    auto* bench = app.add_subcommand("bench", "Sweep d and write CSV rows");
    bench->add_option("--w", bench_flags.w, "Weights, non-increasing")->required();
    bench->add_option("--d-min", bench_flags.d_min, "First d");
    bench->add_option("--d-max", bench_flags.d_max, "Last d");
    bench->add_option("--mode", bench_flags.mode, "tight or witness")
        ->check(CLI::IsMember({"tight", "witness"}));
    bench->add_option("--out", bench_flags.out, "CSV path (default stdout)");
    bench->add_option("--jobs", bench_flags.jobs, "Worker threads");
    bench->add_option("--budget", bench_flags.budget, "Oracle node budget");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInputError;
    }

    try {
        if (check->parsed()) {
            return cmd_check(path);
        }
        if (solve_cmd->parsed()) {
            return cmd_solve(path, solve_flags);
        }
        if (oracle->parsed()) {
            return cmd_oracle(path, k, budget, wmin);
        }
        if (witness->parsed()) {
            return cmd_witness(w, d, relax);
        }
        if (info->parsed()) {
            return cmd_info(w);
        }
        if (bench->parsed()) {
            return cmd_bench(bench_flags);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const std::overflow_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
