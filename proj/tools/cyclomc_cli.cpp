/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

// Command-line front end. Talks to the verifier exclusively through the
// shared-library C API.

#include <cyclomc.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

constexpr int kExitSafe = 0;
constexpr int kExitUnsafe = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitError = 3;

int fail(const char * stage, char * error) {
    std::cerr << "error: " << stage;
    if (error) {
        std::cerr << ": " << error;
        cyclomc_string_free(error);
    }
    std::cerr << "\n";
    return kExitError;
}

} // namespace

int main(int argc, char ** argv) {
    CLI::App app{"cyclomc - a safety verifier for linear CHC systems"};
    app.set_version_flag("--version", cyclomc_version());

    std::string input;
    std::string strategy = "portfolio";
    std::string engine = "naive";
    std::string predicates_file;
    std::string solver;
    std::string emit_proof;
    std::string itp = "general";
    long bound = 16;
    std::uint64_t seed = 0;
    long max_unrollings = 64, max_refinements = 256, max_loop_iterations = 10000, timeout_ms = 0;
    bool show_stats = false;
    bool print_parsed = false;

    app.add_option("problem", input, "problem file (native or SMT-LIB2 HORN)")->required();
    app.add_option("--strategy", strategy, "bmc|forward|predabs|impact|impact-mc|spdr|back-bmc|portfolio")
        ->capture_default_str();
    app.add_option("--engine", engine, "impact-mc refinement engine: naive|ind|indpdr|indpdr-mbp")
        ->capture_default_str();
    app.add_option("--bound", bound, "unrolling bound for bmc/forward/back-bmc")->capture_default_str();
    app.add_option("--predicates", predicates_file, "candidate predicates for predabs, one per line");
    app.add_option("--seed", seed, "replayable nondeterminism seed")->capture_default_str();
    app.add_option("--solver", solver, "external SMT-LIB2 solver command (overrides CYCLOMC_SOLVER)");
    app.add_option("--emit-proof", emit_proof, "write the final proof as GraphViz DOT to this path");
    app.add_option("--itp", itp, "interpolant construction: strongest|weakest|general")->capture_default_str();
    app.add_option("--max-unrollings", max_unrollings)->capture_default_str();
    app.add_option("--max-refinements", max_refinements)->capture_default_str();
    app.add_option("--max-loop-iterations", max_loop_iterations)->capture_default_str();
    app.add_option("--timeout-ms", timeout_ms, "per-query timeout for external solvers")
        ->capture_default_str();
    app.add_flag("--stats", show_stats, "print backend statistics");
    app.add_flag("--print", print_parsed, "print the parsed problem and exit");

    CLI11_PARSE(app, argc, argv);

    char * error = nullptr;
    cyclomc_problem * problem = nullptr;
    if (cyclomc_problem_from_file(input.c_str(), &problem, &error) != CYCLOMC_OK) {
        return fail("parse", error);
    }

    if (print_parsed) {
        char * text = nullptr;
        cyclomc_problem_print(problem, &text);
        std::cout << text;
        cyclomc_string_free(text);
        cyclomc_problem_free(problem);
        return kExitSafe;
    }

    cyclomc_options * options = cyclomc_options_new();
    if (cyclomc_options_set_strategy(options, strategy.c_str()) != CYCLOMC_OK) {
        std::cerr << "error: unknown strategy '" << strategy << "'\n";
        return kExitError;
    }
    if (cyclomc_options_set_engine(options, engine.c_str()) != CYCLOMC_OK) {
        std::cerr << "error: unknown engine '" << engine << "'\n";
        return kExitError;
    }
    if (cyclomc_options_set_interpolant_strength(options, itp.c_str()) != CYCLOMC_OK) {
        std::cerr << "error: unknown interpolant strength '" << itp << "'\n";
        return kExitError;
    }
    cyclomc_options_set_bound(options, bound);
    cyclomc_options_set_seed(options, seed);
    if (!solver.empty()) cyclomc_options_set_solver(options, solver.c_str());
    if (cyclomc_options_set_budget(options, max_unrollings, max_refinements, max_loop_iterations,
                                   timeout_ms) != CYCLOMC_OK) {
        std::cerr << "error: budgets must be positive\n";
        return kExitError;
    }
    if (!predicates_file.empty()) {
        std::ifstream in(predicates_file);
        if (!in) {
            std::cerr << "error: cannot open " << predicates_file << "\n";
            return kExitError;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        cyclomc_options_set_predicates(options, buf.str().c_str());
    }

    cyclomc_result * result = nullptr;
    if (cyclomc_run(problem, options, &result, &error) != CYCLOMC_OK) { return fail("run", error); }

    cyclomc_verdict verdict = cyclomc_result_verdict(result);
    int exit_code = kExitUnknown;
    switch (verdict) {
        case CYCLOMC_VERDICT_SAFE:
            std::cout << "verdict: SAFE\n";
            std::cout << "invariant: " << cyclomc_result_invariant(result) << "\n";
            exit_code = kExitSafe;
            break;
        case CYCLOMC_VERDICT_BOUNDED_SAFE:
            std::cout << "verdict: BOUNDED_SAFE\n";
            std::cout << "bound: " << cyclomc_result_bound(result) << "\n";
            exit_code = kExitSafe;
            break;
        case CYCLOMC_VERDICT_UNSAFE: {
            std::cout << "verdict: UNSAFE\n";
            size_t len = cyclomc_result_trace_length(result);
            std::cout << "trace-length: " << (len == 0 ? 0 : len - 1) << "\n";
            for (size_t i = 0; i < len; ++i) {
                std::cout << "trace[" << i << "]: " << cyclomc_result_trace_state(result, i) << "\n";
            }
            exit_code = kExitUnsafe;
            break;
        }
        case CYCLOMC_VERDICT_UNKNOWN:
            std::cout << "verdict: UNKNOWN\n";
            std::cout << "reason: " << cyclomc_result_reason(result) << "\n";
            exit_code = kExitUnknown;
            break;
    }

    int expected = 0;
    if (cyclomc_problem_expectation(problem, &expected)) {
        bool matches = (expected == 1 && (verdict == CYCLOMC_VERDICT_SAFE)) ||
                       (expected == 0 && verdict == CYCLOMC_VERDICT_UNSAFE) ||
                       verdict == CYCLOMC_VERDICT_UNKNOWN ||
                       verdict == CYCLOMC_VERDICT_BOUNDED_SAFE;
        std::cout << "expected: " << (expected ? "safe" : "unsafe") << (matches ? "" : " (MISMATCH)")
                  << "\n";
    }

    if (!emit_proof.empty()) {
        const char * dot = cyclomc_result_proof_dot(result);
        if (dot) {
            std::ofstream out(emit_proof);
            out << dot;
            std::cout << "proof: " << emit_proof << "\n";
        } else {
            std::cout << "proof: none\n";
        }
    }
    if (show_stats) { std::cout << "stats: " << cyclomc_result_stats(result) << "\n"; }
    if (show_stats && cyclomc_result_note(result)) {
        std::cout << "note: " << cyclomc_result_note(result) << "\n";
    }

    cyclomc_result_free(result);
    cyclomc_options_free(options);
    cyclomc_problem_free(problem);
    return exit_code;
}
