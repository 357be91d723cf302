/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <cyclomc.h>

#include <doctest.h>

#include <string>

namespace {

const char * kBranchingSystem = R"((vars (x Int))
(init (= x 0))
(trans (or (= x' (+ x 1)) (= x' (- 1 (* 2 x)))))
(assert (<= x 2))
(expect unsafe)
)";

struct ProblemHandle {
    cyclomc_problem * p = nullptr;
    ~ProblemHandle() { cyclomc_problem_free(p); }
};

struct OptionsHandle {
    cyclomc_options * o = cyclomc_options_new();
    ~OptionsHandle() { cyclomc_options_free(o); }
};

struct ResultHandle {
    cyclomc_result * r = nullptr;
    ~ResultHandle() { cyclomc_result_free(r); }
};

} // namespace

TEST_CASE("capi: version string") {
    CHECK(std::string(cyclomc_version()).find('.') != std::string::npos);
}

TEST_CASE("capi: parse, expectation, print round trip") {
    ProblemHandle h;
    char * err = nullptr;
    REQUIRE(cyclomc_problem_from_string(kBranchingSystem, &h.p, &err) == CYCLOMC_OK);
    REQUIRE(h.p != nullptr);

    int expected = -1;
    CHECK(cyclomc_problem_expectation(h.p, &expected) == 1);
    CHECK(expected == 0);

    char * printed = nullptr;
    REQUIRE(cyclomc_problem_print(h.p, &printed) == CYCLOMC_OK);
    ProblemHandle again;
    REQUIRE(cyclomc_problem_from_string(printed, &again.p, &err) == CYCLOMC_OK);
    cyclomc_string_free(printed);
}

TEST_CASE("capi: parse errors carry diagnostics through the error out-param") {
    cyclomc_problem * p = nullptr;
    char * err = nullptr;
    CHECK(cyclomc_problem_from_string("(vars (x Int)) (init (= z 0)) (trans true) (assert true)", &p,
                                      &err) == CYCLOMC_ERR_PARSE);
    REQUIRE(err != nullptr);
    CHECK(std::string(err).find("unknown variable") != std::string::npos);
    cyclomc_string_free(err);
    CHECK(p == nullptr);
}

TEST_CASE("capi: rejected arguments") {
    OptionsHandle o;
    CHECK(cyclomc_options_set_strategy(o.o, "quantum") == CYCLOMC_ERR_INVALID_ARGUMENT);
    CHECK(cyclomc_options_set_engine(o.o, "rainbow") == CYCLOMC_ERR_INVALID_ARGUMENT);
    CHECK(cyclomc_options_set_bound(o.o, -1) == CYCLOMC_ERR_INVALID_ARGUMENT);
    CHECK(cyclomc_options_set_budget(o.o, 0, 1, 1, 0) == CYCLOMC_ERR_INVALID_ARGUMENT);
    CHECK(cyclomc_options_set_interpolant_strength(o.o, "mild") == CYCLOMC_ERR_INVALID_ARGUMENT);
    CHECK(cyclomc_options_set_strategy(nullptr, "bmc") == CYCLOMC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("capi: unsafe run exposes the trace") {
    ProblemHandle h;
    char * err = nullptr;
    REQUIRE(cyclomc_problem_from_string(kBranchingSystem, &h.p, &err) == CYCLOMC_OK);
    OptionsHandle o;
    REQUIRE(cyclomc_options_set_strategy(o.o, "spdr") == CYCLOMC_OK);
    ResultHandle r;
    REQUIRE(cyclomc_run(h.p, o.o, &r.r, &err) == CYCLOMC_OK);
    CHECK(cyclomc_result_verdict(r.r) == CYCLOMC_VERDICT_UNSAFE);
    REQUIRE(cyclomc_result_trace_length(r.r) == 4);
    CHECK(std::string(cyclomc_result_trace_state(r.r, 0)) == "(x 0)");
    CHECK(std::string(cyclomc_result_trace_state(r.r, 3)) == "(x 3)");
    CHECK(cyclomc_result_trace_state(r.r, 4) == nullptr);
    CHECK(cyclomc_result_invariant(r.r) == nullptr);
    CHECK(std::string(cyclomc_result_stats(r.r)).find("queries=") == 0);
}

TEST_CASE("capi: bounded and safe runs") {
    ProblemHandle h;
    char * err = nullptr;
    REQUIRE(cyclomc_problem_from_string(kBranchingSystem, &h.p, &err) == CYCLOMC_OK);
    OptionsHandle o;
    REQUIRE(cyclomc_options_set_strategy(o.o, "bmc") == CYCLOMC_OK);
    REQUIRE(cyclomc_options_set_bound(o.o, 2) == CYCLOMC_OK);
    ResultHandle r;
    REQUIRE(cyclomc_run(h.p, o.o, &r.r, &err) == CYCLOMC_OK);
    CHECK(cyclomc_result_verdict(r.r) == CYCLOMC_VERDICT_BOUNDED_SAFE);
    CHECK(cyclomc_result_bound(r.r) == 2);
    CHECK(cyclomc_result_proof_dot(r.r) != nullptr);
    CHECK(std::string(cyclomc_result_proof_dot(r.r)).find("digraph proof") == 0);

    ProblemHandle safe;
    const char * counter = "(vars (x Int)) (init (= x 0)) (trans (= x' (+ x 1))) (assert (>= x 0))";
    REQUIRE(cyclomc_problem_from_string(counter, &safe.p, &err) == CYCLOMC_OK);
    OptionsHandle o2;
    REQUIRE(cyclomc_options_set_strategy(o2.o, "impact") == CYCLOMC_OK);
    ResultHandle r2;
    REQUIRE(cyclomc_run(safe.p, o2.o, &r2.r, &err) == CYCLOMC_OK);
    CHECK(cyclomc_result_verdict(r2.r) == CYCLOMC_VERDICT_SAFE);
    REQUIRE(cyclomc_result_invariant(r2.r) != nullptr);
    CHECK(std::string(cyclomc_result_invariant(r2.r)).size() > 0);
}

TEST_CASE("capi: predicates option drives the predabs strategy") {
    ProblemHandle h;
    char * err = nullptr;
    const char * counter = "(vars (x Int)) (init (= x 0)) (trans (= x' (+ x 1))) (assert (>= x 0))";
    REQUIRE(cyclomc_problem_from_string(counter, &h.p, &err) == CYCLOMC_OK);
    OptionsHandle o;
    REQUIRE(cyclomc_options_set_strategy(o.o, "predabs") == CYCLOMC_OK);
    REQUIRE(cyclomc_options_set_predicates(o.o, "(>= x 0)\n(>= x 1)\n") == CYCLOMC_OK);
    ResultHandle r;
    REQUIRE(cyclomc_run(h.p, o.o, &r.r, &err) == CYCLOMC_OK);
    CHECK(cyclomc_result_verdict(r.r) == CYCLOMC_VERDICT_SAFE);
}

TEST_CASE("capi: every impact-mc engine refutes the running example") {
    ProblemHandle h;
    char * err = nullptr;
    REQUIRE(cyclomc_problem_from_string(kBranchingSystem, &h.p, &err) == CYCLOMC_OK);
    for (const char * engine : {"naive", "ind", "indpdr", "indpdr-mbp"}) {
        OptionsHandle o;
        REQUIRE(cyclomc_options_set_strategy(o.o, "impact-mc") == CYCLOMC_OK);
        REQUIRE(cyclomc_options_set_engine(o.o, engine) == CYCLOMC_OK);
        ResultHandle r;
        CAPTURE(engine);
        REQUIRE(cyclomc_run(h.p, o.o, &r.r, &err) == CYCLOMC_OK);
        CHECK(cyclomc_result_verdict(r.r) == CYCLOMC_VERDICT_UNSAFE);
        CHECK(cyclomc_result_trace_length(r.r) == 4);
    }
}
