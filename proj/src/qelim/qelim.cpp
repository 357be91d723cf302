/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "qelim/qelim.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace cyclomc {

namespace {

constexpr size_t kCubeCap = 1u << 17;

void dnf_rec(const Formula & f, Dnf & out) {
    switch (f->kind) {
        case Conn::True: out.push_back({}); return;
        case Conn::False: return;
        case Conn::AtomF: out.push_back({*f->atom}); return;
        case Conn::Or:
            for (auto const & a : f->args) dnf_rec(a, out);
            return;
        case Conn::And: {
            Dnf acc{{}};
            for (auto const & a : f->args) {
                Dnf part;
                dnf_rec(a, part);
                Dnf next;
                if (acc.size() * part.size() > kCubeCap) { throw QelimError("DNF expansion too large"); }
                for (auto const & c1 : acc) {
                    for (auto const & c2 : part) {
                        Cube merged = c1;
                        merged.insert(merged.end(), c2.begin(), c2.end());
                        next.push_back(std::move(merged));
                    }
                }
                acc = std::move(next);
                if (acc.empty()) return; // conjunct was unsatisfiable
            }
            out.insert(out.end(), acc.begin(), acc.end());
            return;
        }
        default: throw QelimError("to_dnf requires an NNF quantifier-free formula");
    }
}

bool mentions_any(const Atom & a, const VarSet & vars) {
    for (auto const & [v, c] : a.lhs.coeffs())
        if (vars.count(v)) return true;
    return false;
}

/// Rewrites Ne atoms that mention one of vars into strict splits so that
/// DNF cubes contain only Eq/Le/Lt atoms over the eliminated variables.
Formula split_ne(const Formula & f, const VarSet & vars) {
    switch (f->kind) {
        case Conn::True:
        case Conn::False: return f;
        case Conn::AtomF: {
            const Atom & a = *f->atom;
            if (a.rel == Rel::Ne && mentions_any(a, vars)) {
                return mk_or(mk_atom(a.lhs, Rel::Lt, LinTerm::constant(a.bound)),
                             mk_atom(a.lhs, Rel::Gt, LinTerm::constant(a.bound)));
            }
            return f;
        }
        case Conn::And:
        case Conn::Or: {
            std::vector<Formula> args;
            args.reserve(f->args.size());
            for (auto const & x : f->args) args.push_back(split_ne(x, vars));
            return f->kind == Conn::And ? mk_and(std::move(args)) : mk_or(std::move(args));
        }
        default: throw QelimError("split_ne requires an NNF quantifier-free formula");
    }
}

struct VarBound {
    LinTerm expr;
    bool strict;
};

// Appends the normalized form of (lhs rel rhs) to out; returns false when
// the atom folds to false (cube infeasible).
bool push_atom(Cube & out, LinTerm lhs, Rel rel, LinTerm rhs) {
    Formula f = mk_atom(std::move(lhs), rel, std::move(rhs));
    if (is_false(f)) return false;
    if (is_true(f)) return true;
    out.push_back(*f->atom);
    return true;
}

} // namespace

Dnf to_dnf(const Formula & f) {
    Formula g = nnf(f);
    Dnf out;
    dnf_rec(g, out);
    // Normalize cube atom order and deduplicate.
    for (auto & cube : out) {
        std::sort(cube.begin(), cube.end());
        cube.erase(std::unique(cube.begin(), cube.end()), cube.end());
    }
    return out;
}

Formula cube_to_formula(const Cube & c) {
    std::vector<Formula> atoms;
    atoms.reserve(c.size());
    for (auto const & a : c) atoms.push_back(mk_atom_normalized(a));
    return mk_and(std::move(atoms));
}

Formula dnf_to_formula(const Dnf & d) {
    std::vector<Formula> cubes;
    cubes.reserve(d.size());
    for (auto const & c : d) cubes.push_back(cube_to_formula(c));
    return mk_or(std::move(cubes));
}

std::optional<Cube> fm_eliminate(const Cube & cube, const Var & v) {
    std::vector<VarBound> lowers, uppers;
    std::vector<LinTerm> eqs;
    Cube out;

    for (auto const & a : cube) {
        Rational c = a.lhs.coeff(v);
        if (c.is_zero()) {
            out.push_back(a);
            continue;
        }
        if (a.rel == Rel::Ne) { throw std::logic_error("fm_eliminate: unsplit Ne atom on eliminated variable"); }
        // c*v + rest REL bound  becomes  v REL' (bound - rest)/c.
        LinTerm rest = a.lhs + LinTerm(v).scaled(-c);
        LinTerm expr = (LinTerm::constant(a.bound) - rest).scaled(Rational(1) / c);
        switch (a.rel) {
            case Rel::Eq: eqs.push_back(std::move(expr)); break;
            case Rel::Le:
                (c.is_negative() ? lowers : uppers).push_back({std::move(expr), false});
                break;
            case Rel::Lt:
                (c.is_negative() ? lowers : uppers).push_back({std::move(expr), true});
                break;
            default: throw std::logic_error("fm_eliminate: unnormalized atom");
        }
    }

    if (!eqs.empty()) {
        // Equality fast path: v is pinned to eqs[0]; substitute.
        const LinTerm & e0 = eqs[0];
        for (size_t i = 1; i < eqs.size(); ++i) {
            if (!push_atom(out, e0, Rel::Eq, eqs[i])) return std::nullopt;
        }
        for (auto const & b : lowers) {
            if (!push_atom(out, b.expr, b.strict ? Rel::Lt : Rel::Le, e0)) return std::nullopt;
        }
        for (auto const & b : uppers) {
            if (!push_atom(out, e0, b.strict ? Rel::Lt : Rel::Le, b.expr)) return std::nullopt;
        }
        return out;
    }

    for (auto const & lo : lowers) {
        for (auto const & hi : uppers) {
            Rel rel = (lo.strict || hi.strict) ? Rel::Lt : Rel::Le;
            if (!push_atom(out, lo.expr, rel, hi.expr)) return std::nullopt;
        }
    }
    return out;
}

Formula qe_exists(const VarSet & vars, const Formula & f) {
    if (vars.empty()) return f;
    if (!is_quantifier_free(f)) { throw QelimError("qe_exists requires a quantifier-free formula"); }
    Formula g = split_ne(nnf(f), vars);
    Dnf dnf = to_dnf(g);
    Dnf result;
    for (auto & cube : dnf) {
        std::optional<Cube> cur = std::move(cube);
        for (auto const & v : vars) {
            cur = fm_eliminate(*cur, v);
            if (!cur) break;
        }
        if (cur) result.push_back(std::move(*cur));
    }
    return simplify(dnf_to_formula(result));
}

Formula qe_forall(const VarSet & vars, const Formula & f) {
    if (vars.empty()) return f;
    return simplify(nnf(mk_not(qe_exists(vars, nnf(mk_not(f))))));
}

Formula eliminate_quantifiers(const Formula & f) {
    switch (f->kind) {
        case Conn::True:
        case Conn::False:
        case Conn::AtomF: return f;
        case Conn::Not: return mk_not(eliminate_quantifiers(f->args[0]));
        case Conn::And:
        case Conn::Or: {
            std::vector<Formula> args;
            args.reserve(f->args.size());
            for (auto const & x : f->args) args.push_back(eliminate_quantifiers(x));
            return f->kind == Conn::And ? mk_and(std::move(args)) : mk_or(std::move(args));
        }
        case Conn::Implies:
            return mk_implies(eliminate_quantifiers(f->args[0]), eliminate_quantifiers(f->args[1]));
        case Conn::Exists:
        case Conn::Forall: {
            Formula body = eliminate_quantifiers(f->args[0]);
            VarSet vs(f->binders.begin(), f->binders.end());
            return f->kind == Conn::Exists ? qe_exists(vs, body) : qe_forall(vs, body);
        }
    }
    throw std::logic_error("bad Conn");
}

namespace {

// View of an atom as a constraint on a sign-canonical linear part.
struct BoundView {
    LinTerm key; // positive leading coefficient
    enum class Type { Lower, Upper, Eq, Ne } type;
    Rational value;
    bool strict = false;
};

BoundView view_of(const Atom & a) {
    BoundView v;
    bool flip = !a.lhs.coeffs().empty() && a.lhs.coeffs().begin()->second.is_negative();
    v.key = flip ? -a.lhs : a.lhs;
    v.value = flip ? -a.bound : a.bound;
    switch (a.rel) {
        case Rel::Eq: v.type = BoundView::Type::Eq; break;
        case Rel::Ne: v.type = BoundView::Type::Ne; break;
        case Rel::Le:
        case Rel::Lt:
            v.type = flip ? BoundView::Type::Lower : BoundView::Type::Upper;
            v.strict = a.rel == Rel::Lt;
            break;
        default: throw std::logic_error("unnormalized atom");
    }
    return v;
}

struct RangeSummary {
    std::optional<std::pair<Rational, bool>> lo, hi; // value, strict
    std::optional<Rational> eq;
    std::vector<Rational> nes;
    bool contradictory = false;

    void add(const BoundView & v) {
        switch (v.type) {
            case BoundView::Type::Eq:
                if (eq && *eq != v.value) contradictory = true;
                eq = v.value;
                break;
            case BoundView::Type::Ne: nes.push_back(v.value); break;
            case BoundView::Type::Upper:
                if (!hi || v.value < hi->first || (v.value == hi->first && v.strict)) hi = {v.value, v.strict};
                break;
            case BoundView::Type::Lower:
                if (!lo || v.value > lo->first || (v.value == lo->first && v.strict)) lo = {v.value, v.strict};
                break;
        }
    }
};

// Emits minimal atoms for the summary over key; false return = contradiction.
bool emit_summary(const LinTerm & key, RangeSummary & s, std::vector<Formula> & out) {
    if (s.contradictory) return false;
    std::sort(s.nes.begin(), s.nes.end());
    s.nes.erase(std::unique(s.nes.begin(), s.nes.end()), s.nes.end());
    if (s.eq) {
        Rational e = *s.eq;
        if (s.lo && (e < s.lo->first || (e == s.lo->first && s.lo->second))) return false;
        if (s.hi && (e > s.hi->first || (e == s.hi->first && s.hi->second))) return false;
        for (auto const & n : s.nes)
            if (n == e) return false;
        out.push_back(mk_atom(key, Rel::Eq, LinTerm::constant(e)));
        return true;
    }
    // Absorb boundary disequalities into strictness.
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = s.nes.begin(); it != s.nes.end();) {
            if (s.lo && !s.lo->second && *it == s.lo->first) {
                s.lo->second = true;
                it = s.nes.erase(it);
                changed = true;
            } else if (s.hi && !s.hi->second && *it == s.hi->first) {
                s.hi->second = true;
                it = s.nes.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }
    if (s.lo && s.hi) {
        if (s.lo->first > s.hi->first) return false;
        if (s.lo->first == s.hi->first) {
            if (s.lo->second || s.hi->second) return false;
            for (auto const & n : s.nes)
                if (n == s.lo->first) return false;
            out.push_back(mk_atom(key, Rel::Eq, LinTerm::constant(s.lo->first)));
            return true;
        }
    }
    if (s.lo) out.push_back(mk_atom(key, s.lo->second ? Rel::Gt : Rel::Ge, LinTerm::constant(s.lo->first)));
    if (s.hi) out.push_back(mk_atom(key, s.hi->second ? Rel::Lt : Rel::Le, LinTerm::constant(s.hi->first)));
    for (auto const & n : s.nes) {
        // Drop disequalities outside the feasible range.
        if (s.lo && (n < s.lo->first || (n == s.lo->first && s.lo->second))) continue;
        if (s.hi && (n > s.hi->first || (n == s.hi->first && s.hi->second))) continue;
        out.push_back(mk_atom(key, Rel::Ne, LinTerm::constant(n)));
    }
    return true;
}

Formula simplify_and(const std::vector<Formula> & args);
Formula simplify_or(const std::vector<Formula> & args);

Formula simplify_rec(const Formula & f) {
    switch (f->kind) {
        case Conn::True:
        case Conn::False:
        case Conn::AtomF: return f;
        case Conn::Not: return mk_not(simplify_rec(f->args[0]));
        case Conn::Implies: return mk_implies(simplify_rec(f->args[0]), simplify_rec(f->args[1]));
        case Conn::And: {
            std::vector<Formula> args;
            for (auto const & x : f->args) args.push_back(simplify_rec(x));
            return simplify_and(args);
        }
        case Conn::Or: {
            std::vector<Formula> args;
            for (auto const & x : f->args) args.push_back(simplify_rec(x));
            return simplify_or(args);
        }
        case Conn::Exists:
        case Conn::Forall: {
            Formula body = simplify_rec(f->args[0]);
            VarSet fv = free_vars(body);
            std::vector<Var> kept;
            for (auto const & v : f->binders)
                if (fv.count(v)) kept.push_back(v);
            return f->kind == Conn::Exists ? mk_exists(std::move(kept), body)
                                           : mk_forall(std::move(kept), body);
        }
    }
    throw std::logic_error("bad Conn");
}

Formula simplify_and(const std::vector<Formula> & args) {
    std::map<LinTerm, RangeSummary> summaries;
    std::vector<Formula> others;
    for (auto const & a : args) {
        if (is_false(a)) return mk_false();
        if (is_true(a)) continue;
        if (a->kind == Conn::AtomF) {
            BoundView v = view_of(*a->atom);
            summaries[v.key].add(v);
        } else {
            bool dup = false;
            for (auto const & o : others) dup = dup || equal(o, a);
            if (!dup) others.push_back(a);
        }
    }
    std::vector<Formula> out;
    for (auto & [key, s] : summaries) {
        if (!emit_summary(key, s, out)) return mk_false();
    }
    out.insert(out.end(), others.begin(), others.end());
    return mk_and(std::move(out));
}

// Conjunction of atoms (only) of f, when f is an atom or a conjunction of
// atoms; nullopt otherwise.
std::optional<Cube> as_cube(const Formula & f) {
    if (f->kind == Conn::AtomF) return Cube{*f->atom};
    if (f->kind == Conn::True) return Cube{};
    if (f->kind != Conn::And) return std::nullopt;
    Cube c;
    for (auto const & a : f->args) {
        if (a->kind != Conn::AtomF) return std::nullopt;
        c.push_back(*a->atom);
    }
    return c;
}

// Every atom of weaker is implied by some atom of stronger.
bool cube_subsumes(const Cube & weaker, const Cube & stronger) {
    for (auto const & need : weaker) {
        bool ok = false;
        for (auto const & have : stronger) {
            if (atom_implies(have, need)) {
                ok = true;
                break;
            }
        }
        if (!ok) return false;
    }
    return true;
}

Formula simplify_or(const std::vector<Formula> & args) {
    std::vector<Formula> kept;
    for (auto const & a : args) {
        if (is_true(a)) return mk_true();
        if (is_false(a)) continue;
        bool dup = false;
        for (auto const & o : kept) dup = dup || equal(o, a);
        if (!dup) kept.push_back(a);
    }
    // Subsumption between cube-shaped disjuncts, quadratic with a cap.
    if (kept.size() >= 2 && kept.size() <= 64) {
        std::vector<std::optional<Cube>> cubes;
        cubes.reserve(kept.size());
        for (auto const & k : kept) cubes.push_back(as_cube(k));
        std::vector<bool> dead(kept.size(), false);
        for (size_t i = 0; i < kept.size(); ++i) {
            if (dead[i] || !cubes[i]) continue;
            for (size_t j = 0; j < kept.size(); ++j) {
                if (i == j || dead[j] || !cubes[j]) continue;
                // disjunct i absorbs j when j is stronger (j implies i)
                if (cube_subsumes(*cubes[i], *cubes[j])) {
                    dead[j] = true;
                }
            }
        }
        std::vector<Formula> out;
        for (size_t i = 0; i < kept.size(); ++i)
            if (!dead[i]) out.push_back(kept[i]);
        kept = std::move(out);
    }
    return mk_or(std::move(kept));
}

} // namespace

bool atom_implies(const Atom & a1, const Atom & a2) {
    if (a1 == a2) return true;
    BoundView v1 = view_of(a1);
    BoundView v2 = view_of(a2);
    if (!(v1.key == v2.key)) return false;
    using T = BoundView::Type;
    switch (v1.type) {
        case T::Eq:
            switch (v2.type) {
                case T::Eq: return v1.value == v2.value;
                case T::Ne: return v1.value != v2.value;
                case T::Upper: return v2.strict ? v1.value < v2.value : v1.value <= v2.value;
                case T::Lower: return v2.strict ? v1.value > v2.value : v1.value >= v2.value;
            }
            break;
        case T::Upper:
            if (v2.type == T::Upper) {
                if (!v1.strict && v2.strict) return v1.value < v2.value;
                return v1.value <= v2.value;
            }
            if (v2.type == T::Ne) return v2.value > v1.value || (v2.value == v1.value && v1.strict);
            break;
        case T::Lower:
            if (v2.type == T::Lower) {
                if (!v1.strict && v2.strict) return v1.value > v2.value;
                return v1.value >= v2.value;
            }
            if (v2.type == T::Ne) return v2.value < v1.value || (v2.value == v1.value && v1.strict);
            break;
        case T::Ne:
            return v2.type == T::Ne && v1.value == v2.value;
    }
    return false;
}

Formula simplify(const Formula & f) { return simplify_rec(f); }

} // namespace cyclomc
