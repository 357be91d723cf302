/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

/*
 * C interface to the cyclomc safety verifier for linear constrained Horn
 * clause systems. The library is consumed through opaque handles; every
 * entry point returns a status code and reports details through out
 * parameters. Strings returned through cyclomc_result_* accessors are
 * owned by the result handle; strings returned through char ** out
 * parameters must be released with cyclomc_string_free.
 */

#ifndef CYCLOMC_H
#define CYCLOMC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct cyclomc_problem cyclomc_problem;
typedef struct cyclomc_options cyclomc_options;
typedef struct cyclomc_result cyclomc_result;

typedef enum cyclomc_status {
    CYCLOMC_OK = 0,
    CYCLOMC_ERR_PARSE = 1,
    CYCLOMC_ERR_INVALID_ARGUMENT = 2,
    CYCLOMC_ERR_SOLVER = 3,
    CYCLOMC_ERR_INTERNAL = 4
} cyclomc_status;

typedef enum cyclomc_verdict {
    CYCLOMC_VERDICT_SAFE = 0,
    CYCLOMC_VERDICT_UNSAFE = 1,
    CYCLOMC_VERDICT_BOUNDED_SAFE = 2,
    CYCLOMC_VERDICT_UNKNOWN = 3
} cyclomc_verdict;

const char * cyclomc_version(void);

void cyclomc_string_free(char * s);

/* Problem files: the native s-expression format or the SMT-LIB2 HORN
 * single-predicate linear subset. On failure, *error (when non-NULL)
 * receives a diagnostic. */
cyclomc_status cyclomc_problem_from_string(const char * text, cyclomc_problem ** out, char ** error);
cyclomc_status cyclomc_problem_from_file(const char * path, cyclomc_problem ** out, char ** error);
void cyclomc_problem_free(cyclomc_problem * p);

/* Canonical native-format rendering of a parsed problem. */
cyclomc_status cyclomc_problem_print(const cyclomc_problem * p, char ** out);
/* 1 when the problem carries an (expect ...) annotation; *expected_safe is
 * set accordingly. */
int cyclomc_problem_expectation(const cyclomc_problem * p, int * expected_safe);

cyclomc_options * cyclomc_options_new(void);
void cyclomc_options_free(cyclomc_options * o);

/* Strategy: bmc, forward, predabs, impact, impact-mc, spdr, back-bmc,
 * portfolio. Engine (impact-mc only): naive, ind, indpdr, indpdr-mbp. */
cyclomc_status cyclomc_options_set_strategy(cyclomc_options * o, const char * strategy);
cyclomc_status cyclomc_options_set_engine(cyclomc_options * o, const char * engine);
cyclomc_status cyclomc_options_set_bound(cyclomc_options * o, long bound);
cyclomc_status cyclomc_options_set_seed(cyclomc_options * o, uint64_t seed);
/* Path (possibly with arguments) of an external SMT-LIB2 solver; empty or
 * NULL selects the built-in engine. The CYCLOMC_SOLVER environment
 * variable applies when unset. */
cyclomc_status cyclomc_options_set_solver(cyclomc_options * o, const char * solver_command);
cyclomc_status cyclomc_options_set_interpolant_strength(cyclomc_options * o, const char * strength);
cyclomc_status cyclomc_options_set_budget(cyclomc_options * o, long max_unrollings,
                                          long max_refinements, long max_loop_iterations,
                                          long query_timeout_ms);
/* Candidate predicates for predabs, one formula per line over the problem
 * variables. */
cyclomc_status cyclomc_options_set_predicates(cyclomc_options * o, const char * text);

cyclomc_status cyclomc_run(const cyclomc_problem * p, const cyclomc_options * o,
                           cyclomc_result ** out, char ** error);

cyclomc_verdict cyclomc_result_verdict(const cyclomc_result * r);
/* BOUNDED_SAFE only: the verified bound. */
long cyclomc_result_bound(const cyclomc_result * r);
/* SAFE only: the inductive invariant, rendered in the term grammar. */
const char * cyclomc_result_invariant(const cyclomc_result * r);
/* UNKNOWN only: the reason. */
const char * cyclomc_result_reason(const cyclomc_result * r);
/* UNSAFE only: number of states in the counterexample trace. */
size_t cyclomc_result_trace_length(const cyclomc_result * r);
/* One trace state as "(x 0) (y 1)"; NULL when out of range. */
const char * cyclomc_result_trace_state(const cyclomc_result * r, size_t index);
/* GraphViz rendering of the final partial proof; NULL when the strategy
 * produced none. */
const char * cyclomc_result_proof_dot(const cyclomc_result * r);
/* "queries=<n> entailments=<n> refinements=<n> wall_ms=<n>" */
const char * cyclomc_result_stats(const cyclomc_result * r);
/* Semantic caveat for the run (e.g. the rational-relaxation note for Int
 * variables), or NULL. */
const char * cyclomc_result_note(const cyclomc_result * r);
void cyclomc_result_free(cyclomc_result * r);

#ifdef __cplusplus
}
#endif

#endif /* CYCLOMC_H */
