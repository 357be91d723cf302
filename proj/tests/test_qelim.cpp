/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "test_util.hpp"

#include "backend/session.hpp"
#include "qelim/qelim.hpp"

#include <doctest.h>

#include <random>

using namespace cyclomc;
using namespace cyclomc::testutil;

namespace {

bool equivalent(const Formula & a, const Formula & b) {
    auto session = make_internal_session();
    return session->check_entailment(a, b).is_valid() && session->check_entailment(b, a).is_valid();
}

} // namespace

TEST_CASE("qe_exists: equality substitution example") {
    Var x = mk_int("x"), y = mk_int("y");
    Formula f = parse("(and (= x 0) (or (= y (+ x 1)) (= y (- 1 (* 2 x)))))", {x, y});
    Formula got = qe_exists({x}, f);
    CHECK(equal(got, atom(y, Rel::Eq, 1)));
}

TEST_CASE("qe_exists: per-disjunct witnesses") {
    Var x = mk_int("x"), y = mk_int("y");
    Formula f = parse("(and (<= x 1) (or (= y (+ x 1)) (= y (- 1 (* 2 x)))))", {x, y});
    Formula got = qe_exists({x}, f);
    // Expected y <= 2 \/ y >= -1, frozen from the witness substitutions
    // x := y-1 and x := (1-y)/2.
    Formula want = parse("(or (<= y 2) (>= y (- 1)))", {x, y});
    CHECK(equivalent(got, want));
    CHECK(free_vars(got) == VarSet{y});
}

TEST_CASE("qe_exists: empty set is the identity") {
    Var x = mk_int("x");
    Formula f = atom(x, Rel::Le, 2);
    CHECK(equal(qe_exists({}, f), f));
}

TEST_CASE("qe_exists rejects quantified input") {
    Var x = mk_int("x"), y = mk_int("y");
    Formula f = mk_exists({x}, atom(x, Rel::Le, 2));
    CHECK_THROWS_AS(qe_exists({y}, f), QelimError);
}

TEST_CASE("qe_forall: examples") {
    Var x = mk_int("x"), y = mk_int("y");
    // forall y. (y = x+1 => y <= 2)  iff  x <= 1
    Formula f1 = parse("(=> (= y (+ x 1)) (<= y 2))", {x, y});
    CHECK(equivalent(qe_forall({y}, f1), atom(x, Rel::Le, 1)));

    CHECK(is_true(qe_forall({y}, mk_true())));

    // forall y. ((y=x+1 or y=1-2x) => y <= 2)  iff  x <= 1 and x >= -1/2
    // (over the integers the right conjunct tightens to x >= 0).
    Formula f2 = parse("(=> (or (= y (+ x 1)) (= y (- 1 (* 2 x)))) (<= y 2))", {x, y});
    Formula got = qe_forall({y}, f2);
    Formula want = parse("(and (<= x 1) (>= x 0))", {x, y});
    CHECK(equivalent(got, want));

    Var a = mk_real("a"), b = mk_real("b");
    Formula f3 = parse("(=> (or (= b (+ a 1)) (= b (- 1 (* 2 a)))) (<= b 2))", {a, b});
    Formula want3 = parse("(and (<= a 1) (>= a (- (/ 1 2))))", {a, b});
    CHECK(equivalent(qe_forall({b}, f3), want3));
}

TEST_CASE("property: QE soundness against the one-variable witness oracle") {
    std::mt19937_64 rng(20260101);
    std::vector<Var> vars{mk_real("u"), mk_real("v"), mk_real("w")};
    int checked = 0;
    for (int i = 0; i < 500; ++i) {
        Formula f = random_formula(rng, vars, 2);
        Var target = vars[i % vars.size()];
        Formula projected = qe_exists({target}, f);
        CHECK_FALSE(free_vars(projected).count(target));
        for (int j = 0; j < 50; ++j) {
            Model m = random_model(rng, vars);
            bool via_qe = evaluate(projected, m);
            bool via_oracle = exists_rational_witness(f, target, m);
            CHECK(via_qe == via_oracle);
            ++checked;
        }
    }
    CHECK(checked == 500 * 50);
}

TEST_CASE("property: integer projection is exact for unit-coefficient targets") {
    // Int sorts are projected rationally with per-atom tightening; when the
    // eliminated variable occurs with coefficient +-1 the projection is
    // integer-exact, checked against bounded brute force.
    std::mt19937_64 rng(99);
    Var x = mk_int("x"), y = mk_int("y");
    std::uniform_int_distribution<long> coeff(-4, 4);
    std::uniform_int_distribution<int> sign(0, 1);
    std::uniform_int_distribution<int> relpick(0, 3);
    for (int i = 0; i < 200; ++i) {
        // Two atoms with unit y coefficient, conjoined or disjoined.
        auto unit_atom = [&]() {
            LinTerm t = LinTerm(y).scaled(Rational(sign(rng) ? 1 : -1)) +
                        LinTerm(x).scaled(Rational(coeff(rng)));
            Rel rel;
            switch (relpick(rng)) {
                case 0: rel = Rel::Le; break;
                case 1: rel = Rel::Lt; break;
                case 2: rel = Rel::Eq; break;
                default: rel = Rel::Ge; break;
            }
            return mk_atom(t, rel, LinTerm::constant(Rational(coeff(rng))));
        };
        Formula f = sign(rng) ? mk_and(unit_atom(), unit_atom()) : mk_or(unit_atom(), unit_atom());
        Formula projected = qe_exists({y}, f);
        Model m = random_model(rng, {x});
        bool via_qe = evaluate(projected, m);
        // |y| <= 4*8 + 4 + slack bounds every relevant witness.
        bool brute = false;
        for (long v = -64; v <= 64 && !brute; ++v) {
            Model probe = m;
            probe.set(y, Rational(v));
            brute = evaluate(f, probe);
        }
        CHECK(via_qe == brute);
    }
}

TEST_CASE("fm_eliminate handles bound combinations and infeasibility") {
    Var x = mk_real("x"), y = mk_real("y");
    // 1 <= x and x < y: eliminating x leaves 1 < y.
    Cube cube{*mk_atom(LinTerm(x), Rel::Ge, LinTerm::constant(Rational(1)))->atom,
              *mk_atom(LinTerm(x) - LinTerm(y), Rel::Lt, LinTerm::constant(Rational(0)))->atom};
    auto out = fm_eliminate(cube, x);
    REQUIRE(out.has_value());
    REQUIRE(out->size() == 1);
    CHECK((*out)[0].rel == Rel::Lt);

    // x <= 0 and x >= 1 is infeasible.
    Cube bad{*mk_atom(LinTerm(x), Rel::Le, LinTerm::constant(Rational(0)))->atom,
             *mk_atom(LinTerm(x), Rel::Ge, LinTerm::constant(Rational(1)))->atom};
    CHECK_FALSE(fm_eliminate(bad, x).has_value());
}

TEST_CASE("simplify merges proportional bounds and prunes subsumed disjuncts") {
    Var x = mk_int("x");
    Formula messy = mk_and(std::vector<Formula>{atom(x, Rel::Le, 5), atom(x, Rel::Le, 3),
                                                atom(x, Rel::Ge, 0), atom(x, Rel::Ne, 5)});
    Formula s = simplify(messy);
    // x <= 3 absorbs both the weaker bound and the out-of-range
    // disequality.
    CHECK(equivalent(s, parse("(and (<= x 3) (>= x 0))", {x})));

    Formula contradiction = mk_and(atom(x, Rel::Ge, 1), atom(x, Rel::Le, 0));
    CHECK(is_false(simplify(contradiction)));

    Formula pinned = simplify(mk_and(atom(x, Rel::Ge, 2), atom(x, Rel::Le, 2)));
    REQUIRE(pinned->kind == Conn::AtomF);
    CHECK(pinned->atom->rel == Rel::Eq);

    Formula disj = simplify(mk_or(atom(x, Rel::Le, 1), atom(x, Rel::Le, 4)));
    CHECK(equal(disj, atom(x, Rel::Le, 4)));

    // Boundary disequality sharpens the bound: x >= 0 and x != 0 is x >= 1
    // over the integers.
    Formula sharp = simplify(mk_and(atom(x, Rel::Ge, 0), atom(x, Rel::Ne, 0)));
    CHECK(equivalent(sharp, atom(x, Rel::Ge, 1)));
}

TEST_CASE("property: simplify preserves models") {
    std::mt19937_64 rng(31337);
    std::vector<Var> vars{mk_int("x"), mk_int("y"), mk_real("r")};
    for (int i = 0; i < 500; ++i) {
        Formula f = random_formula(rng, vars, 3);
        Formula s = simplify(f);
        Model m = random_model(rng, vars);
        CHECK(evaluate(f, m) == evaluate(s, m));
    }
}

TEST_CASE("eliminate_quantifiers handles nesting") {
    Var x = mk_real("x"), y = mk_real("y");
    // exists x. forall y. (y <= x) is false over the rationals.
    Formula f = mk_exists({x}, mk_forall({y}, mk_atom(LinTerm(y), Rel::Le, LinTerm(x))));
    CHECK(is_false(eliminate_quantifiers(f)));
    // exists x. x <= y is true.
    Formula g = mk_exists({x}, mk_atom(LinTerm(x), Rel::Le, LinTerm(y)));
    CHECK(is_true(eliminate_quantifiers(g)));
}

TEST_CASE("atom_implies covers the bound lattice") {
    Var x = mk_int("x");
    auto A = [&](Rel r, long c) { return *atom(x, r, c)->atom; };
    CHECK(atom_implies(A(Rel::Le, 2), A(Rel::Le, 3)));
    CHECK_FALSE(atom_implies(A(Rel::Le, 3), A(Rel::Le, 2)));
    CHECK(atom_implies(A(Rel::Eq, 2), A(Rel::Le, 2)));
    CHECK(atom_implies(A(Rel::Eq, 2), A(Rel::Ne, 3)));
    CHECK(atom_implies(A(Rel::Ge, 3), A(Rel::Ne, 0)));
    CHECK_FALSE(atom_implies(A(Rel::Ne, 0), A(Rel::Ge, 1)));
    CHECK(atom_implies(A(Rel::Ge, 5), A(Rel::Ge, 4)));
}
