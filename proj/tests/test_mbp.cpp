/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "test_util.hpp"

#include "backend/session.hpp"
#include "qelim/mbp.hpp"
#include "qelim/qelim.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace cyclomc;
using namespace cyclomc::testutil;

namespace {

Model model_of(std::initializer_list<std::pair<Var, long>> entries) {
    Model m;
    for (auto const & [v, c] : entries) m.set(v, Rational(c));
    return m;
}

} // namespace

TEST_CASE("mbp: equality witness substitution selects the satisfied disjunct") {
    Var x = mk_int("x"), y = mk_int("y");
    Formula f = parse("(and (or (= y (+ x 1)) (= y (- 1 (* 2 x)))) (> y 2))", {x, y});
    Model m = model_of({{x, 2}, {y, 3}});
    Formula psi = mbp(MbpFlavor::LoosWeispfenning, f, {y}, m);
    // The satisfied disjunct y = x+1 substitutes into y > 2, giving
    // x+1 > 2, i.e. x >= 2 after integer tightening.
    CHECK(evaluate(psi, m));
    auto session = make_internal_session();
    CHECK(session->check_entailment(psi, atom(x, Rel::Ge, 2)).is_valid());
    CHECK(session->check_entailment(atom(x, Rel::Ge, 2), psi).is_valid());
}

TEST_CASE("mbp: substitution flavor plugs in the model") {
    Var x = mk_int("x"), y = mk_int("y");
    Formula f = parse("(and (<= y x) (>= y (- x 5)))", {x, y});
    Model m = model_of({{x, 3}, {y, 1}});
    Formula psi = mbp(MbpFlavor::Substitution, f, {y}, m);
    Formula want = parse("(and (<= 1 x) (>= 1 (- x 5)))", {x, y});
    CHECK(equal(psi, want));
}

TEST_CASE("mbp: single equality eliminates exactly") {
    Var x = mk_int("x"), y = mk_int("y");
    Formula f = parse("(= y x)", {x, y});
    Model m = model_of({{x, 5}, {y, 5}});
    CHECK(is_true(mbp(MbpFlavor::LoosWeispfenning, f, {y}, m)));
}

TEST_CASE("mbp rejects models that do not satisfy the formula") {
    Var x = mk_int("x"), y = mk_int("y");
    Formula f = parse("(= y x)", {x, y});
    CHECK_THROWS_AS(mbp(MbpFlavor::LoosWeispfenning, f, {y}, model_of({{x, 1}, {y, 2}})), MbpError);
}

TEST_CASE("mbp handles disequalities and lower-bound selection") {
    Var x = mk_real("x"), y = mk_real("y");
    Formula f = parse("(and (and (distinct y 0) (>= y x)) (<= y 10))", {x, y});
    Model m;
    m.set(x, Rational(1));
    m.set(y, Rational(2));
    Formula psi = mbp(MbpFlavor::LoosWeispfenning, f, {y}, m);
    CHECK(evaluate(psi, m));
    auto session = make_internal_session();
    Formula projected = qe_exists({y}, f);
    CHECK(session->check_entailment(psi, projected).is_valid());
}

TEST_CASE("property: MBP clauses and under-approximation (Eq. mbp-def)") {
    std::mt19937_64 rng(777);
    std::vector<Var> vars{mk_real("x"), mk_real("y"), mk_real("z")};
    auto session = make_internal_session();
    int done = 0;
    int attempts = 0;
    while (done < 200 && attempts < 4000) {
        ++attempts;
        Formula f = random_formula(rng, vars, 2);
        Model m = random_model(rng, vars);
        if (!evaluate(f, m)) continue;
        Var target = vars[done % vars.size()];
        Formula psi = mbp(MbpFlavor::LoosWeispfenning, f, {target}, m);
        // Clause 2: the model satisfies its own projection.
        CHECK(evaluate(psi, m));
        // Under-approximation: psi entails exists target. f.
        Formula projected = qe_exists({target}, f);
        CHECK(session->check_entailment(psi, projected).is_valid());
        CHECK_FALSE(free_vars(psi).count(target));
        ++done;
    }
    CHECK(done == 200);
}

TEST_CASE("property: LW image finiteness within the literal bound") {
    // For a fixed formula, enumerating models over a grid must produce at
    // most (#literals containing the variable + 1) distinct projections.
    std::vector<std::pair<const char *, int>> cases = {
        {"(and (or (= y (+ x 1)) (= y (- 1 (* 2 x)))) (> y 2))", 3},
        {"(and (>= y x) (<= y (+ x 6)))", 2},
        {"(or (and (>= y 0) (<= y x)) (and (<= y 0) (>= y (- 0 x))))", 4},
        {"(= y (* 2 x))", 1},
        {"(or (> y x) (< y (- 0 x)))", 2},
    };
    Var x = mk_int("x"), y = mk_int("y");
    for (auto const & [text, y_literals] : cases) {
        Formula f = parse(text, {x, y});
        std::set<std::string> images;
        for (long mx = -6; mx <= 6; ++mx) {
            for (long my = -6; my <= 6; ++my) {
                Model m = model_of({{x, mx}, {y, my}});
                if (!evaluate(f, m)) continue;
                images.insert(to_string(mbp(MbpFlavor::LoosWeispfenning, f, {y}, m)));
            }
        }
        CAPTURE(text);
        CHECK(images.size() <= static_cast<size_t>(y_literals) + 1);
        CHECK(images.size() >= 1);
    }
}

TEST_CASE("substitution flavor has an unbounded image on the branching counter") {
    // Subst projects to a different formula for every model, so the
    // distinct-output count grows with the model stream; this is the
    // ingredient of the divergence analysis.
    Var x = mk_int("x"), y = mk_int("y");
    Formula f = parse("(and (or (= y (+ x 1)) (= y (- 1 (* 2 x)))) (> y 2))", {x, y});
    std::set<std::string> images;
    for (long i = 1; i <= 16; ++i) {
        Model m = model_of({{x, -i}, {y, 1 + 2 * i}});
        REQUIRE(evaluate(f, m));
        images.insert(to_string(mbp(MbpFlavor::Substitution, f, {y}, m)));
    }
    CHECK(images.size() == 16);
}

TEST_CASE("adversarial flavor pins negative extremum models to points") {
    // MBP' returns x = m when the model value is the greatest negative x
    // admitted by the formula; this drives the divergence regressions.
    Var x = mk_int("x"), y = mk_int("y");
    Formula phi1 = parse("(and (<= x 1) (distinct x (- 1)))", {x, y});
    Formula f = mk_and(phi1, parse("(and (or (= y (+ x 1)) (= y (- 1 (* 2 x)))) (> y 2))", {x, y}));
    Model m = model_of({{x, -2}, {y, 5}});
    REQUIRE(evaluate(f, m));
    Formula psi = mbp(MbpFlavor::Adversarial, f, {y}, m);
    Formula want = parse("(= x (- 2))", {x, y});
    CHECK(equal(psi, want));

    // Away from the extremum it behaves like the regular projection.
    Model m2 = model_of({{x, -4}, {y, 9}});
    REQUIRE(evaluate(f, m2));
    Formula psi2 = mbp(MbpFlavor::Adversarial, f, {y}, m2);
    CHECK_FALSE(equal(psi2, parse("(= x (- 4))", {x, y})));
}

TEST_CASE("select_implicant picks satisfied literals only") {
    Var x = mk_int("x");
    Formula f = parse("(or (and (<= x 0) (>= x (- 5))) (>= x 10))", {x});
    Model m = model_of({{x, -1}});
    Cube imp = select_implicant(nnf(f), m);
    CHECK(imp.size() == 2);
    Formula conj = cube_to_formula(imp);
    CHECK(evaluate(conj, m));
    auto session = make_internal_session();
    CHECK(session->check_entailment(conj, f).is_valid());
}
