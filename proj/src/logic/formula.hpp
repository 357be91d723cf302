/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_LOGIC_FORMULA_HPP
#define CYCLOMC_LOGIC_FORMULA_HPP

#include "logic/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cyclomc {

enum class Sort { Int, Real };

const char * to_string(Sort s);

/// A typed variable. Identity is (name, tag, step); the sort is carried for
/// well-sortedness checks but two variables with the same name and tag must
/// agree on it within one formula context.
struct Var {
    enum class Tag { Plain, Primed, Step };

    std::string name;
    Sort sort = Sort::Int;
    Tag tag = Tag::Plain;
    int step = 0; // meaningful only for Tag::Step

    Var() = default;
    Var(std::string n, Sort s, Tag t = Tag::Plain, int k = 0)
        : name(std::move(n)), sort(s), tag(t), step(k) {}

    Var primed() const { return Var(name, sort, Tag::Primed); }
    Var plain() const { return Var(name, sort, Tag::Plain); }
    Var at_step(int k) const { return Var(name, sort, Tag::Step, k); }

    /// "x", "x'" or "x@k".
    std::string str() const;

    friend bool operator==(const Var & a, const Var & b) {
        return a.name == b.name && a.tag == b.tag && (a.tag != Tag::Step || a.step == b.step);
    }
    friend bool operator!=(const Var & a, const Var & b) { return !(a == b); }
    friend bool operator<(const Var & a, const Var & b) {
        if (a.name != b.name) return a.name < b.name;
        if (a.tag != b.tag) return a.tag < b.tag;
        if (a.tag == Tag::Step) return a.step < b.step;
        return false;
    }
};

using VarSet = std::set<Var>;

/// A linear term: rational coefficients over variables plus a constant.
/// Linearity holds by construction; multiplying two non-constant terms throws.
class LinTerm {
public:
    LinTerm() = default;
    explicit LinTerm(Rational c) : constant_(std::move(c)) {}
    explicit LinTerm(const Var & v) { coeffs_[v] = Rational(1); }

    static LinTerm constant(Rational c) { return LinTerm(std::move(c)); }
    static LinTerm variable(const Var & v) { return LinTerm(v); }

    const std::map<Var, Rational> & coeffs() const { return coeffs_; }
    const Rational & constant_part() const { return constant_; }
    bool is_constant() const { return coeffs_.empty(); }
    Rational coeff(const Var & v) const;

    LinTerm & operator+=(const LinTerm & o);
    LinTerm & operator-=(const LinTerm & o);
    LinTerm operator-() const;
    LinTerm scaled(const Rational & k) const;

    friend LinTerm operator+(LinTerm a, const LinTerm & b) { return a += b; }
    friend LinTerm operator-(LinTerm a, const LinTerm & b) { return a -= b; }
    friend bool operator==(const LinTerm & a, const LinTerm & b) {
        return a.constant_ == b.constant_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator<(const LinTerm & a, const LinTerm & b);

    void collect_vars(VarSet & out) const;
    Rational evaluate(const std::map<Var, Rational> & assignment) const;
    std::string str() const;

private:
    std::map<Var, Rational> coeffs_; // zero coefficients are never stored
    Rational constant_;
};

/// Comparison operator of an atom. Atoms are normalized at construction to
/// one of {Eq, Le, Lt, Ne} with integer gcd-reduced coefficients; Ge/Gt are
/// accepted by the builder and flipped.
enum class Rel { Eq, Le, Lt, Ge, Gt, Ne };

Rel negate_rel(Rel r);
const char * to_string(Rel r);

/// A normalized linear atom: lhs rel bound, where lhs has integral,
/// gcd-reduced coefficients, no constant part, and bound is integral.
/// For Eq/Ne the leading coefficient is positive.
struct Atom {
    LinTerm lhs;      // constant part always zero
    Rel rel;          // Eq, Le, Lt or Ne after normalization
    Rational bound;

    bool evaluate(const std::map<Var, Rational> & assignment) const;
    std::string str() const;

    friend bool operator==(const Atom & a, const Atom & b) {
        return a.rel == b.rel && a.bound == b.bound && a.lhs == b.lhs;
    }
    friend bool operator<(const Atom & a, const Atom & b);
};

/// Negation of a normalized atom, again normalized.
Atom negate_atom(const Atom & a);

class FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

enum class Conn { True, False, AtomF, Not, And, Or, Implies, Exists, Forall };

/// Immutable formula AST node. Formulas are shared freely across threads.
class FormulaNode {
public:
    Conn kind;
    std::optional<Atom> atom;    // Conn::AtomF
    std::vector<Formula> args;   // Not: 1, And/Or: n, Implies: 2, quantifiers: 1
    std::vector<Var> binders;    // quantifiers

    FormulaNode(Conn k, std::optional<Atom> a, std::vector<Formula> as, std::vector<Var> bs)
        : kind(k), atom(std::move(a)), args(std::move(as)), binders(std::move(bs)) {}
};

// Builders. mk_and/mk_or flatten nested connectives and fold units; mk_atom
// normalizes and folds ground atoms to True/False.
Formula mk_true();
Formula mk_false();
Formula mk_atom(LinTerm lhs, Rel rel, LinTerm rhs);
Formula mk_atom_normalized(Atom a);
Formula mk_not(Formula f);
Formula mk_and(std::vector<Formula> fs);
Formula mk_or(std::vector<Formula> fs);
Formula mk_and(Formula a, Formula b);
Formula mk_or(Formula a, Formula b);
Formula mk_implies(Formula a, Formula b);
Formula mk_exists(std::vector<Var> vs, Formula body);
Formula mk_forall(std::vector<Var> vs, Formula body);

bool is_true(const Formula & f);
bool is_false(const Formula & f);
bool is_quantifier_free(const Formula & f);

/// Structural equality (atoms by normalized value).
bool equal(const Formula & a, const Formula & b);

/// Canonical printable form, SMT-LIB-like: (and (<= x 2) (= y 1)).
std::string to_string(const Formula & f);

/// Stable 64-bit digest of the canonical print; used for log records.
std::uint64_t digest(const Formula & f);

} // namespace cyclomc

#endif
