/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "test_util.hpp"

#include "backend/session.hpp"
#include "front/problem.hpp"

#include <doctest.h>

using namespace cyclomc;
using namespace cyclomc::testutil;

namespace {

const char * kBranchingNative = R"((vars (x Int))
(init (= x 0))
(trans (or (= x' (+ x 1)) (= x' (- 1 (* 2 x)))))
(assert (<= x 2))
(expect unsafe)
)";

} // namespace

TEST_CASE("parse_problem: the running example in native format") {
    ProblemFile p = parse_problem(kBranchingNative);
    REQUIRE(p.system);
    CHECK(p.system->state_vars().size() == 1);
    CHECK(p.expect_safe.has_value());
    CHECK_FALSE(*p.expect_safe);

    auto want = branching_system();
    auto session = make_internal_session();
    CHECK(session->check_entailment(p.system->init(), want->init()).is_valid());
    CHECK(session->check_entailment(want->trans(), p.system->trans()).is_valid());
    CHECK(session->check_entailment(p.system->trans(), want->trans()).is_valid());
    CHECK(session->check_entailment(want->assertion(), p.system->assertion()).is_valid());
}

TEST_CASE("parse_problem: empty init parses to bottom") {
    ProblemFile p = parse_problem("(vars (x Int)) (init false) (trans (= x' x)) (assert true)");
    CHECK(is_false(p.system->init()));
}

TEST_CASE("parse_problem: nonlinear atoms are rejected with position info") {
    const char * text = "(vars (x Int) (y Int))\n(init (= x 0))\n(trans (<= (* x y) 1))\n(assert true)";
    CHECK_THROWS_WITH_AS(parse_problem(text), doctest::Contains("nonlinear"), ProblemError);
}

TEST_CASE("parse_problem: diagnostics carry line and column") {
    try {
        parse_problem("(vars (x Int))\n(init (= z 0))\n(trans (= x' x))\n(assert true)");
        FAIL("expected a ProblemError");
    } catch (const ProblemError & e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        CHECK(std::string(e.what()).find("unknown variable") != std::string::npos);
    }
}

TEST_CASE("print_problem round-trips structurally") {
    ProblemFile p = parse_problem(kBranchingNative);
    std::string printed = print_problem(p);
    ProblemFile again = parse_problem(printed);
    CHECK(equal(p.system->init(), again.system->init()));
    CHECK(equal(p.system->trans(), again.system->trans()));
    CHECK(equal(p.system->assertion(), again.system->assertion()));
    CHECK(p.expect_safe == again.expect_safe);
    // And printing is a fixpoint.
    CHECK(print_problem(again) == printed);
}

TEST_CASE("parse_problem: SMT-LIB2 HORN single-predicate subset") {
    const char * horn = R"(
(set-logic HORN)
(declare-fun P (Int) Bool)
(assert (forall ((x Int)) (=> (= x 0) (P x))))
(assert (forall ((x Int) (y Int)) (=> (and (P x) (or (= y (+ x 1)) (= y (- 1 (* 2 x))))) (P y))))
(assert (forall ((x Int)) (=> (and (P x) (> x 2)) false)))
(check-sat)
)";
    ProblemFile p = parse_problem(horn);
    REQUIRE(p.system);
    auto want = branching_system();
    auto session = make_internal_session();
    // The state variable is canonically named; compare semantically after
    // renaming through the shared shape.
    REQUIRE(p.system->state_vars().size() == 1);
    Var v = p.system->state_vars()[0];
    Var x = mk_int("x");
    std::map<Var, Var> ren{{v, x}, {v.primed(), x.primed()}};
    CHECK(session->check_entailment(rename(p.system->init(), ren), want->init()).is_valid());
    CHECK(session->check_entailment(want->init(), rename(p.system->init(), ren)).is_valid());
    CHECK(session->check_entailment(rename(p.system->trans(), ren), want->trans()).is_valid());
    CHECK(session->check_entailment(want->trans(), rename(p.system->trans(), ren)).is_valid());
    CHECK(session->check_entailment(rename(p.system->assertion(), ren), want->assertion()).is_valid());
    CHECK(session->check_entailment(want->assertion(), rename(p.system->assertion(), ren)).is_valid());
}

TEST_CASE("parse_problem: HORN head terms and local variables project away") {
    // P(x+1) heads and helper locals are normalized through projection.
    const char * horn = R"(
(set-logic HORN)
(declare-fun Inv (Int) Bool)
(assert (forall ((x Int)) (=> (= x 3) (Inv (+ x 1)))))
(assert (forall ((a Int) (b Int)) (=> (and (Inv a) (= b (+ a a))) (Inv b))))
(assert (forall ((x Int)) (=> (and (Inv x) (> x 100)) false)))
)";
    ProblemFile p = parse_problem(horn);
    Var v = p.system->state_vars()[0];
    Model m4;
    m4.set(v, Rational(4));
    CHECK(evaluate(p.system->init(), m4));
    Model m3;
    m3.set(v, Rational(3));
    CHECK_FALSE(evaluate(p.system->init(), m3));
}

TEST_CASE("parse_problem: multiple predicates are rejected with the control-state diagnostic") {
    const char * horn = R"(
(set-logic HORN)
(declare-fun P (Int) Bool)
(declare-fun Q (Int) Bool)
(assert (forall ((x Int)) (=> (= x 0) (P x))))
)";
    CHECK_THROWS_WITH_AS(parse_problem(horn), doctest::Contains("exactly one control state"),
                         ProblemError);
}

TEST_CASE("parse_problem: nonlinear HORN clauses are rejected") {
    const char * horn = R"(
(set-logic HORN)
(declare-fun P (Int) Bool)
(assert (forall ((x Int)) (=> (= x 0) (P x))))
(assert (forall ((x Int) (y Int)) (=> (and (P x) (P y) (= x y)) (P y))))
)";
    CHECK_THROWS_WITH_AS(parse_problem(horn), doctest::Contains("multiple predicate occurrences"),
                         ProblemError);
}

TEST_CASE("parse_formula_lines reads one predicate per line") {
    auto ts = counter_system();
    VarScope scope = scope_of(*ts, false);
    std::vector<Formula> preds = parse_formula_lines("(>= x 0)\n; comment\n(>= x 1)\n\n", scope);
    REQUIRE(preds.size() == 2);
    Var x = mk_int("x");
    CHECK(equal(preds[0], atom(x, Rel::Ge, 0)));
    CHECK(equal(preds[1], atom(x, Rel::Ge, 1)));
}

TEST_CASE("formula print/parse round trip covers the grammar") {
    Var x = mk_int("x"), y = mk_real("y");
    VarScope scope{{"x", x}, {"y", y}};
    std::vector<const char *> samples = {
        "(<= (+ (* 2 x) (* (- 3) y)) (/ 1 2))",
        "(and (= x 0) (or (distinct y 1) (< y (- 2))))",
        "(=> (>= x 1) (> y 0))",
        "(exists ((z Int)) (= z (+ x 1)))",
        "true",
        "false",
    };
    for (auto * s : samples) {
        Formula f = parse_formula(s, scope);
        Formula g = parse_formula(print_formula(f), scope);
        CAPTURE(s);
        CHECK(equal(f, g));
    }
}

TEST_CASE("rational sexpr helpers round trip") {
    for (auto const & r : {Rational(0), Rational(-3), Rational(22, 7), Rational(-5, 2)}) {
        Sexpr e = parse_sexpr(print_rational_sexpr(r));
        CHECK(parse_rational_sexpr(e) == r);
    }
}

TEST_CASE("missing sections are reported by name") {
    CHECK_THROWS_WITH_AS(parse_problem("(vars (x Int)) (trans (= x' x)) (assert true)"),
                         doctest::Contains("missing (init"), ProblemError);
    CHECK_THROWS_WITH_AS(parse_problem("(init true) (trans true) (assert true)"),
                         doctest::Contains("missing (vars"), ProblemError);
    CHECK_THROWS_AS(parse_problem(""), ProblemError);
}
