/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "qelim/mbp.hpp"

#include <algorithm>
#include <cassert>

namespace cyclomc {

namespace {

void implicant_rec(const Formula & f, const Model & m, Cube & out) {
    switch (f->kind) {
        case Conn::True: return;
        case Conn::False: throw MbpError("implicant of false");
        case Conn::AtomF:
            if (!f->atom->evaluate(m.values)) throw MbpError("model does not satisfy literal");
            out.push_back(*f->atom);
            return;
        case Conn::And:
            for (auto const & a : f->args) implicant_rec(a, m, out);
            return;
        case Conn::Or:
            for (auto const & a : f->args) {
                if (evaluate(a, m)) {
                    implicant_rec(a, m, out);
                    return;
                }
            }
            throw MbpError("model does not satisfy any disjunct");
        default: throw MbpError("implicant selection requires NNF quantifier-free input");
    }
}

bool mentions(const Atom & a, const Var & v) { return !a.lhs.coeff(v).is_zero(); }

// v rel expr, derived from an atom containing v.
struct Solved {
    Rel rel; // Eq, Le, Lt, Ge, Gt, Ne with v on the left
    LinTerm expr;
};

Solved solve_for(const Atom & a, const Var & v) {
    Rational c = a.lhs.coeff(v);
    LinTerm rest = a.lhs + LinTerm(v).scaled(-c);
    LinTerm expr = (LinTerm::constant(a.bound) - rest).scaled(Rational(1) / c);
    Rel rel = a.rel;
    if (c.is_negative()) {
        switch (rel) {
            case Rel::Le: rel = Rel::Ge; break;
            case Rel::Lt: rel = Rel::Gt; break;
            default: break; // Eq/Ne unaffected by sign
        }
    }
    return {rel, std::move(expr)};
}

// Eliminates v from the implicant cube, LW-style, guided by m.
Cube lw_project_var(Cube cube, const Var & v, const Model & m) {
    // Resolve disequalities on v into the strict side m satisfies.
    for (auto & a : cube) {
        if (a.rel == Rel::Ne && mentions(a, v)) {
            Rational lv = a.lhs.evaluate(m.values);
            a = *mk_atom(a.lhs, lv < a.bound ? Rel::Lt : Rel::Gt, LinTerm::constant(a.bound))->atom;
        }
    }

    std::vector<Atom> with_v, rest;
    for (auto & a : cube) (mentions(a, v) ? with_v : rest).push_back(a);
    if (with_v.empty()) return cube;

    // Equality witness: plain substitution.
    for (auto const & a : with_v) {
        if (a.rel == Rel::Eq) {
            Solved s = solve_for(a, v);
            Cube out = rest;
            for (auto const & b : with_v) {
                if (&b == &a) continue;
                Rational c = b.lhs.coeff(v);
                LinTerm lhs = b.lhs + LinTerm(v).scaled(-c) + s.expr.scaled(c);
                Formula nf = mk_atom(std::move(lhs), b.rel, LinTerm::constant(b.bound));
                if (is_true(nf)) continue;
                if (is_false(nf)) throw std::logic_error("mbp: substitution falsified a satisfied literal");
                out.push_back(*nf->atom);
            }
            return out;
        }
    }

    // Collect lower bounds; none means the -infinity virtual term applies
    // and every literal containing v drops.
    struct Lower {
        LinTerm expr;
        bool strict;
        Rational value;
    };
    std::vector<Lower> lowers;
    std::vector<Solved> all;
    for (auto const & a : with_v) {
        Solved s = solve_for(a, v);
        if (s.rel == Rel::Ge || s.rel == Rel::Gt) {
            lowers.push_back({s.expr, s.rel == Rel::Gt, s.expr.evaluate(m.values)});
        }
        all.push_back(std::move(s));
    }
    if (lowers.empty()) return rest;

    // Greatest satisfied lower bound under m; strict bounds win ties, then
    // the deterministic term order.
    const Lower * best = &lowers[0];
    for (auto const & l : lowers) {
        if (l.value > best->value) {
            best = &l;
        } else if (l.value == best->value) {
            if (l.strict && !best->strict) {
                best = &l;
            } else if (l.strict == best->strict && l.expr < best->expr) {
                best = &l;
            }
        }
    }
    bool eps = best->strict;

    Cube out = rest;
    auto push = [&out](Formula f) {
        if (is_true(f)) return;
        if (is_false(f)) throw std::logic_error("mbp: virtual substitution falsified a satisfied literal");
        out.push_back(*f->atom);
    };
    for (auto const & s : all) {
        switch (s.rel) {
            case Rel::Ge: push(mk_atom(s.expr, Rel::Le, best->expr)); break;
            case Rel::Gt: push(mk_atom(s.expr, eps ? Rel::Le : Rel::Lt, best->expr)); break;
            case Rel::Le: push(mk_atom(best->expr, eps ? Rel::Lt : Rel::Le, s.expr)); break;
            case Rel::Lt: push(mk_atom(best->expr, Rel::Lt, s.expr)); break;
            default: throw std::logic_error("mbp: unexpected literal shape");
        }
    }
    return out;
}

Formula mbp_lw(const Formula & f, const VarSet & vars, const Model & m) {
    Cube implicant = select_implicant(nnf(f), m);
    for (auto const & v : vars) implicant = lw_project_var(std::move(implicant), v, m);
    Formula out = cube_to_formula(implicant);
    assert(evaluate(out, m));
    return out;
}

// True when f restricted to closed (variable-free) form holds; f must close
// under full elimination.
bool closed_sat(const Formula & f) {
    VarSet vs = free_vars(f);
    Formula g = qe_exists(vs, f);
    if (is_true(g)) return true;
    if (is_false(g)) return false;
    throw std::logic_error("closed_sat: elimination left free structure");
}

Formula mbp_adversarial(const Formula & f, const VarSet & vars, const Model & m) {
    // Behaves like MBP except when the model pins the (single) kept Int
    // variable to the greatest negative value admitted by f; then the
    // projection degenerates to that single point.
    VarSet kept;
    for (auto const & v : free_vars(f))
        if (!vars.count(v)) kept.insert(v);
    if (kept.size() == 1 && kept.begin()->sort == Sort::Int) {
        const Var & x = *kept.begin();
        Rational mx = m.at(x);
        if (mx.is_negative() && mx.is_integer()) {
            constexpr long kScanCap = 4096;
            for (long n = -1; n >= -kScanCap; --n) {
                Substitution sub{{x, LinTerm::constant(Rational(n))}};
                if (closed_sat(substitute(f, sub))) {
                    if (Rational(n) == mx) {
                        return mk_atom(LinTerm(x), Rel::Eq, LinTerm::constant(mx));
                    }
                    break; // m(x) is not the maximum
                }
            }
        }
    }
    return mbp_lw(f, vars, m);
}

} // namespace

Cube select_implicant(const Formula & f, const Model & m) {
    Cube out;
    implicant_rec(f, m, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Formula mbp(MbpFlavor flavor, const Formula & f, const VarSet & vars, const Model & m) {
    if (!is_quantifier_free(f)) throw MbpError("mbp requires a quantifier-free formula");
    if (!evaluate(f, m)) throw MbpError("mbp precondition violated: model does not satisfy the formula");
    if (vars.empty()) return f;
    switch (flavor) {
        case MbpFlavor::Substitution: {
            Substitution sub;
            for (auto const & v : vars) {
                if (!m.has(v)) throw MbpError("model misses projected variable " + v.str());
                sub.emplace(v, LinTerm::constant(m.at(v)));
            }
            return substitute(f, sub);
        }
        case MbpFlavor::LoosWeispfenning: return mbp_lw(f, vars, m);
        case MbpFlavor::Adversarial: return mbp_adversarial(f, vars, m);
    }
    throw std::logic_error("bad MbpFlavor");
}

} // namespace cyclomc
