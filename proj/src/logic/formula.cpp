/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "logic/formula.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace cyclomc {

const char * to_string(Sort s) { return s == Sort::Int ? "Int" : "Real"; }

std::string Var::str() const {
    switch (tag) {
        case Tag::Plain: return name;
        case Tag::Primed: return name + "'";
        case Tag::Step: return name + "@" + std::to_string(step);
    }
    return name;
}

Rational LinTerm::coeff(const Var & v) const {
    auto it = coeffs_.find(v);
    return it == coeffs_.end() ? Rational(0) : it->second;
}

LinTerm & LinTerm::operator+=(const LinTerm & o) {
    for (auto const & [v, c] : o.coeffs_) {
        auto it = coeffs_.find(v);
        if (it == coeffs_.end()) {
            coeffs_.emplace(v, c);
        } else {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }
    constant_ += o.constant_;
    return *this;
}

LinTerm & LinTerm::operator-=(const LinTerm & o) { return *this += -o; }

LinTerm LinTerm::operator-() const { return scaled(Rational(-1)); }

LinTerm LinTerm::scaled(const Rational & k) const {
    LinTerm out;
    if (k.is_zero()) return out;
    for (auto const & [v, c] : coeffs_) out.coeffs_.emplace(v, c * k);
    out.constant_ = constant_ * k;
    return out;
}

bool operator<(const LinTerm & a, const LinTerm & b) {
    if (a.constant_ != b.constant_) return a.constant_ < b.constant_;
    return std::lexicographical_compare(
        a.coeffs_.begin(), a.coeffs_.end(), b.coeffs_.begin(), b.coeffs_.end(),
        [](auto const & x, auto const & y) {
            if (x.first != y.first) return x.first < y.first;
            return x.second < y.second;
        });
}

void LinTerm::collect_vars(VarSet & out) const {
    for (auto const & [v, c] : coeffs_) out.insert(v);
}

Rational LinTerm::evaluate(const std::map<Var, Rational> & assignment) const {
    Rational acc = constant_;
    for (auto const & [v, c] : coeffs_) {
        auto it = assignment.find(v);
        if (it == assignment.end()) { throw std::invalid_argument("unbound variable in evaluation: " + v.str()); }
        acc += c * it->second;
    }
    return acc;
}

std::string LinTerm::str() const {
    std::ostringstream os;
    bool first = true;
    for (auto const & [v, c] : coeffs_) {
        if (!first) os << " + ";
        if (c != Rational(1)) os << c.str() << "*";
        os << v.str();
        first = false;
    }
    if (!constant_.is_zero() || first) {
        if (!first) os << " + ";
        os << constant_.str();
    }
    return os.str();
}

Rel negate_rel(Rel r) {
    switch (r) {
        case Rel::Eq: return Rel::Ne;
        case Rel::Ne: return Rel::Eq;
        case Rel::Le: return Rel::Gt;
        case Rel::Lt: return Rel::Ge;
        case Rel::Ge: return Rel::Lt;
        case Rel::Gt: return Rel::Le;
    }
    throw std::logic_error("bad Rel");
}

const char * to_string(Rel r) {
    switch (r) {
        case Rel::Eq: return "=";
        case Rel::Ne: return "distinct";
        case Rel::Le: return "<=";
        case Rel::Lt: return "<";
        case Rel::Ge: return ">=";
        case Rel::Gt: return ">";
    }
    return "?";
}

bool Atom::evaluate(const std::map<Var, Rational> & assignment) const {
    Rational lv = lhs.evaluate(assignment);
    switch (rel) {
        case Rel::Eq: return lv == bound;
        case Rel::Ne: return lv != bound;
        case Rel::Le: return lv <= bound;
        case Rel::Lt: return lv < bound;
        case Rel::Ge: return lv >= bound;
        case Rel::Gt: return lv > bound;
    }
    return false;
}

std::string Atom::str() const {
    std::ostringstream os;
    os << "(" << to_string(rel) << " " << lhs.str() << " " << bound.str() << ")";
    return os.str();
}

bool operator<(const Atom & a, const Atom & b) {
    if (a.rel != b.rel) return a.rel < b.rel;
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.lhs < b.lhs;
}

Atom negate_atom(const Atom & a) {
    // The result must be re-normalized: e.g. not(x <= 2) is x > 2, stored as
    // -x < -2 (and tightened for Int).
    LinTerm lhs = a.lhs;
    Rational bound = a.bound;
    Rel r = negate_rel(a.rel);
    // Delegate to the builder's normalization through a throwaway formula.
    Formula f = mk_atom(lhs - LinTerm::constant(bound), r, LinTerm());
    if (f->kind == Conn::AtomF) return *f->atom;
    // Ground after normalization cannot happen here: a had variables.
    throw std::logic_error("negate_atom on ground atom");
}

namespace {

Formula make_node(Conn k, std::optional<Atom> a, std::vector<Formula> args, std::vector<Var> bs) {
    return std::make_shared<FormulaNode>(k, std::move(a), std::move(args), std::move(bs));
}

const Formula & true_singleton() {
    static const Formula t = make_node(Conn::True, std::nullopt, {}, {});
    return t;
}
const Formula & false_singleton() {
    static const Formula f = make_node(Conn::False, std::nullopt, {}, {});
    return f;
}

bool all_int_vars(const LinTerm & t) {
    for (auto const & [v, c] : t.coeffs())
        if (v.sort != Sort::Int) return false;
    return true;
}

} // namespace

Formula mk_true() { return true_singleton(); }
Formula mk_false() { return false_singleton(); }

Formula mk_atom(LinTerm lhs, Rel rel, LinTerm rhs) {
    LinTerm t = lhs - rhs;
    Rational bound = -t.constant_part();
    t -= LinTerm::constant(t.constant_part());

    if (t.is_constant()) {
        bool val;
        Rational zero(0);
        switch (rel) {
            case Rel::Eq: val = zero == bound; break;
            case Rel::Ne: val = zero != bound; break;
            case Rel::Le: val = zero <= bound; break;
            case Rel::Lt: val = zero < bound; break;
            case Rel::Ge: val = zero >= bound; break;
            case Rel::Gt: val = zero > bound; break;
            default: val = false;
        }
        return val ? mk_true() : mk_false();
    }

    // Flip Ge/Gt to Le/Lt.
    if (rel == Rel::Ge || rel == Rel::Gt) {
        t = -t;
        bound = -bound;
        rel = rel == Rel::Ge ? Rel::Le : Rel::Lt;
    }

    // Scale to integer gcd-reduced coefficients.
    mpz_class den(1);
    for (auto const & [v, c] : t.coeffs()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.denominator().get_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), bound.denominator().get_mpz_t());
    mpz_class num(0);
    for (auto const & [v, c] : t.coeffs()) {
        mpz_class ci = (c * Rational(den)).numerator();
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), ci.get_mpz_t());
    }
    Rational scale = Rational(den) / Rational(num == 0 ? mpz_class(1) : num);
    t = t.scaled(scale);
    bound = bound * scale;
    // For a scaled atom the bound may be non-integral; keep it exact.

    // For Eq/Ne make the leading coefficient positive (canonical form).
    if ((rel == Rel::Eq || rel == Rel::Ne) && !t.coeffs().empty() && t.coeffs().begin()->second.is_negative()) {
        t = -t;
        bound = -bound;
    }

    // Integer tightening: when every variable is Int and coefficients are
    // integral, c.v < k becomes c.v <= ceil(k)-1 and c.v <= k becomes
    // c.v <= floor(k).
    if (all_int_vars(t)) {
        if (rel == Rel::Lt) {
            bound = bound.is_integer() ? bound - Rational(1) : bound.floor();
            rel = Rel::Le;
        } else if (rel == Rel::Le && !bound.is_integer()) {
            bound = bound.floor();
        } else if ((rel == Rel::Eq || rel == Rel::Ne) && !bound.is_integer()) {
            // No integer point satisfies the equality.
            return rel == Rel::Eq ? mk_false() : mk_true();
        }
    }

    return make_node(Conn::AtomF, Atom{std::move(t), rel, std::move(bound)}, {}, {});
}

Formula mk_atom_normalized(Atom a) {
    return mk_atom(a.lhs, a.rel, LinTerm::constant(a.bound));
}

Formula mk_not(Formula f) {
    switch (f->kind) {
        case Conn::True: return mk_false();
        case Conn::False: return mk_true();
        case Conn::Not: return f->args[0];
        case Conn::AtomF: return mk_atom_normalized(negate_atom(*f->atom));
        default: return make_node(Conn::Not, std::nullopt, {std::move(f)}, {});
    }
}

Formula mk_and(std::vector<Formula> fs) {
    std::vector<Formula> flat;
    for (auto & f : fs) {
        if (is_true(f)) continue;
        if (is_false(f)) return mk_false();
        if (f->kind == Conn::And) {
            flat.insert(flat.end(), f->args.begin(), f->args.end());
        } else {
            flat.push_back(std::move(f));
        }
    }
    if (flat.empty()) return mk_true();
    if (flat.size() == 1) return flat[0];
    return make_node(Conn::And, std::nullopt, std::move(flat), {});
}

Formula mk_or(std::vector<Formula> fs) {
    std::vector<Formula> flat;
    for (auto & f : fs) {
        if (is_false(f)) continue;
        if (is_true(f)) return mk_true();
        if (f->kind == Conn::Or) {
            flat.insert(flat.end(), f->args.begin(), f->args.end());
        } else {
            flat.push_back(std::move(f));
        }
    }
    if (flat.empty()) return mk_false();
    if (flat.size() == 1) return flat[0];
    return make_node(Conn::Or, std::nullopt, std::move(flat), {});
}

Formula mk_and(Formula a, Formula b) { return mk_and(std::vector<Formula>{std::move(a), std::move(b)}); }
Formula mk_or(Formula a, Formula b) { return mk_or(std::vector<Formula>{std::move(a), std::move(b)}); }

Formula mk_implies(Formula a, Formula b) {
    if (is_false(a) || is_true(b)) return mk_true();
    if (is_true(a)) return b;
    if (is_false(b)) return mk_not(a);
    return make_node(Conn::Implies, std::nullopt, {std::move(a), std::move(b)}, {});
}

Formula mk_exists(std::vector<Var> vs, Formula body) {
    if (vs.empty()) return body;
    if (is_true(body) || is_false(body)) return body;
    return make_node(Conn::Exists, std::nullopt, {std::move(body)}, std::move(vs));
}

Formula mk_forall(std::vector<Var> vs, Formula body) {
    if (vs.empty()) return body;
    if (is_true(body) || is_false(body)) return body;
    return make_node(Conn::Forall, std::nullopt, {std::move(body)}, std::move(vs));
}

bool is_true(const Formula & f) { return f->kind == Conn::True; }
bool is_false(const Formula & f) { return f->kind == Conn::False; }

bool is_quantifier_free(const Formula & f) {
    if (f->kind == Conn::Exists || f->kind == Conn::Forall) return false;
    for (auto const & a : f->args)
        if (!is_quantifier_free(a)) return false;
    return true;
}

bool equal(const Formula & a, const Formula & b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    if (a->kind == Conn::AtomF) return *a->atom == *b->atom;
    if (a->binders != b->binders) return false;
    if (a->args.size() != b->args.size()) return false;
    for (size_t i = 0; i < a->args.size(); ++i)
        if (!equal(a->args[i], b->args[i])) return false;
    return true;
}

namespace {

void print(std::ostringstream & os, const Formula & f) {
    switch (f->kind) {
        case Conn::True: os << "true"; return;
        case Conn::False: os << "false"; return;
        case Conn::AtomF: os << f->atom->str(); return;
        case Conn::Not:
            os << "(not ";
            print(os, f->args[0]);
            os << ")";
            return;
        case Conn::And:
        case Conn::Or: {
            os << (f->kind == Conn::And ? "(and" : "(or");
            for (auto const & a : f->args) {
                os << " ";
                print(os, a);
            }
            os << ")";
            return;
        }
        case Conn::Implies:
            os << "(=> ";
            print(os, f->args[0]);
            os << " ";
            print(os, f->args[1]);
            os << ")";
            return;
        case Conn::Exists:
        case Conn::Forall: {
            os << (f->kind == Conn::Exists ? "(exists (" : "(forall (");
            bool first = true;
            for (auto const & v : f->binders) {
                if (!first) os << " ";
                os << "(" << v.str() << " " << to_string(v.sort) << ")";
                first = false;
            }
            os << ") ";
            print(os, f->args[0]);
            os << ")";
            return;
        }
    }
}

} // namespace

std::string to_string(const Formula & f) {
    std::ostringstream os;
    print(os, f);
    return os.str();
}

std::uint64_t digest(const Formula & f) {
    // FNV-1a over the canonical print.
    std::string s = to_string(f);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace cyclomc
