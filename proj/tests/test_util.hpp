/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_TESTS_TEST_UTIL_HPP
#define CYCLOMC_TESTS_TEST_UTIL_HPP

#include "front/problem.hpp"
#include "logic/ops.hpp"
#include "logic/transition_system.hpp"

#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace cyclomc::testutil {

inline Var mk_int(const std::string & name) { return Var(name, Sort::Int); }
inline Var mk_real(const std::string & name) { return Var(name, Sort::Real); }

inline Formula atom(const Var & v, Rel rel, long c) {
    return mk_atom(LinTerm(v), rel, LinTerm::constant(Rational(c)));
}

inline Formula parse(const std::string & text, const std::vector<Var> & vars) {
    VarScope scope;
    for (auto const & v : vars) {
        scope[v.str()] = v;
        scope[v.primed().str()] = v.primed();
    }
    return parse_formula(text, scope);
}

inline std::shared_ptr<const TransitionSystem> make_system(const std::vector<Var> & vars,
                                                           const std::string & init,
                                                           const std::string & trans,
                                                           const std::string & assertion) {
    return std::make_shared<TransitionSystem>(vars, parse(init, vars), parse(trans, vars),
                                              parse(assertion, vars));
}

/// The running example: x=0, (x' = x+1 or x' = 1-2x), x <= 2.
inline std::shared_ptr<const TransitionSystem> branching_system() {
    Var x = mk_int("x");
    return make_system({x}, "(= x 0)", "(or (= x' (+ x 1)) (= x' (- 1 (* 2 x))))", "(<= x 2)");
}

/// x=0, x' = x+1, x >= 0 (safe).
inline std::shared_ptr<const TransitionSystem> counter_system() {
    Var x = mk_int("x");
    return make_system({x}, "(= x 0)", "(= x' (+ x 1))", "(>= x 0)");
}

/// Exact one-variable decision oracle for quantified tests: whether some
/// rational value of v satisfies the quantifier-free formula under m. The
/// atoms' critical points partition the line; testing every region decides
/// the query exactly.
bool exists_rational_witness(const Formula & f, const Var & v, const Model & m);

/// Explicit-state breadth-first search over integer states; the systems it
/// receives must keep every reachable state inside the box |x_i| <= bound.
/// Returns the smallest depth at which the assertion breaks, or -1 when
/// safe within max_depth.
long bfs_unsafe_depth(const TransitionSystem & ts, long box_bound, long max_depth);

struct RandomSystemOptions {
    int dims = 1;
    long box = 6;
    int guarded_updates = 2;
};

/// Box-clamped random system: guarded linear updates conjoined with
/// |x_i'| <= box, so reachability stays finite.
std::shared_ptr<const TransitionSystem> random_box_system(std::mt19937_64 & rng,
                                                          const RandomSystemOptions & opts);

/// Random quantifier-free formula over the given variables, coefficients
/// in [-4, 4].
Formula random_formula(std::mt19937_64 & rng, const std::vector<Var> & vars, int depth);

/// Random total model; Int variables get integers in [-8, 8].
Model random_model(std::mt19937_64 & rng, const std::vector<Var> & vars);

} // namespace cyclomc::testutil

#endif
