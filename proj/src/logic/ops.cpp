/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "logic/ops.hpp"

#include <atomic>

namespace cyclomc {

namespace {

void free_vars_rec(const Formula & f, VarSet & bound, VarSet & out) {
    switch (f->kind) {
        case Conn::True:
        case Conn::False: return;
        case Conn::AtomF:
            for (auto const & [v, c] : f->atom->lhs.coeffs())
                if (!bound.count(v)) out.insert(v);
            return;
        case Conn::Exists:
        case Conn::Forall: {
            std::vector<Var> added;
            for (auto const & v : f->binders)
                if (bound.insert(v).second) added.push_back(v);
            free_vars_rec(f->args[0], bound, out);
            for (auto const & v : added) bound.erase(v);
            return;
        }
        default:
            for (auto const & a : f->args) free_vars_rec(a, bound, out);
            return;
    }
}

std::atomic<unsigned long> fresh_counter{0};

Var fresh_var(const Var & like) {
    return Var(like.name + "!" + std::to_string(fresh_counter.fetch_add(1)), like.sort, Var::Tag::Plain);
}

LinTerm apply_subst(const LinTerm & t, const Substitution & sigma) {
    LinTerm out = LinTerm::constant(t.constant_part());
    for (auto const & [v, c] : t.coeffs()) {
        auto it = sigma.find(v);
        if (it == sigma.end()) {
            out += LinTerm(v).scaled(c);
        } else {
            if (v.sort == Sort::Int) {
                for (auto const & [w, cw] : it->second.coeffs()) {
                    if (w.sort != Sort::Int) {
                        throw SortError("substituting Real term for Int variable " + v.str());
                    }
                }
            }
            out += it->second.scaled(c);
        }
    }
    return out;
}

Formula substitute_rec(const Formula & f, const Substitution & sigma) {
    if (sigma.empty()) return f;
    switch (f->kind) {
        case Conn::True:
        case Conn::False: return f;
        case Conn::AtomF: {
            const Atom & a = *f->atom;
            return mk_atom(apply_subst(a.lhs, sigma), a.rel, LinTerm::constant(a.bound));
        }
        case Conn::Not: return mk_not(substitute_rec(f->args[0], sigma));
        case Conn::And: {
            std::vector<Formula> args;
            args.reserve(f->args.size());
            for (auto const & x : f->args) args.push_back(substitute_rec(x, sigma));
            return mk_and(std::move(args));
        }
        case Conn::Or: {
            std::vector<Formula> args;
            args.reserve(f->args.size());
            for (auto const & x : f->args) args.push_back(substitute_rec(x, sigma));
            return mk_or(std::move(args));
        }
        case Conn::Implies:
            return mk_implies(substitute_rec(f->args[0], sigma), substitute_rec(f->args[1], sigma));
        case Conn::Exists:
        case Conn::Forall: {
            // Drop mappings shadowed by the binders; rename binders that
            // would capture variables of the substituted terms.
            Substitution inner = sigma;
            for (auto const & v : f->binders) inner.erase(v);
            VarSet ran_vars;
            for (auto const & [v, t] : inner) t.collect_vars(ran_vars);
            std::vector<Var> binders = f->binders;
            Formula body = f->args[0];
            for (auto & b : binders) {
                if (ran_vars.count(b)) {
                    Var nb = fresh_var(b);
                    Substitution ren{{b, LinTerm(nb)}};
                    body = substitute_rec(body, ren);
                    b = nb;
                }
            }
            body = substitute_rec(body, inner);
            return f->kind == Conn::Exists ? mk_exists(std::move(binders), body)
                                           : mk_forall(std::move(binders), body);
        }
    }
    throw std::logic_error("bad Conn");
}

} // namespace

VarSet free_vars(const Formula & f) {
    VarSet bound, out;
    free_vars_rec(f, bound, out);
    return out;
}

Formula substitute(const Formula & f, const Substitution & sigma) { return substitute_rec(f, sigma); }

Formula rename(const Formula & f, const std::map<Var, Var> & renaming) {
    Substitution sigma;
    for (auto const & [from, to] : renaming) sigma.emplace(from, LinTerm(to));
    return substitute(f, sigma);
}

bool evaluate(const Formula & f, const Model & m) {
    switch (f->kind) {
        case Conn::True: return true;
        case Conn::False: return false;
        case Conn::AtomF: {
            try {
                return f->atom->evaluate(m.values);
            } catch (const std::invalid_argument & e) { throw EvalError(e.what()); }
        }
        case Conn::Not: return !evaluate(f->args[0], m);
        case Conn::And:
            for (auto const & a : f->args)
                if (!evaluate(a, m)) return false;
            return true;
        case Conn::Or:
            for (auto const & a : f->args)
                if (evaluate(a, m)) return true;
            return false;
        case Conn::Implies: return !evaluate(f->args[0], m) || evaluate(f->args[1], m);
        case Conn::Exists:
        case Conn::Forall: throw EvalError("evaluate called on quantified formula");
    }
    throw std::logic_error("bad Conn");
}

namespace {

Formula nnf_rec(const Formula & f, bool negate) {
    switch (f->kind) {
        case Conn::True: return negate ? mk_false() : mk_true();
        case Conn::False: return negate ? mk_true() : mk_false();
        case Conn::AtomF: return negate ? mk_atom_normalized(negate_atom(*f->atom)) : f;
        case Conn::Not: return nnf_rec(f->args[0], !negate);
        case Conn::And:
        case Conn::Or: {
            std::vector<Formula> args;
            args.reserve(f->args.size());
            for (auto const & a : f->args) args.push_back(nnf_rec(a, negate));
            bool mk_conj = (f->kind == Conn::And) != negate;
            return mk_conj ? mk_and(std::move(args)) : mk_or(std::move(args));
        }
        case Conn::Implies: {
            // a => b is (not a) or b.
            if (!negate) { return mk_or(nnf_rec(f->args[0], true), nnf_rec(f->args[1], false)); }
            return mk_and(nnf_rec(f->args[0], false), nnf_rec(f->args[1], true));
        }
        case Conn::Exists:
        case Conn::Forall: {
            bool ex = (f->kind == Conn::Exists) != negate;
            Formula body = nnf_rec(f->args[0], negate);
            return ex ? mk_exists(f->binders, body) : mk_forall(f->binders, body);
        }
    }
    throw std::logic_error("bad Conn");
}

} // namespace

Formula nnf(const Formula & f) { return nnf_rec(f, false); }

} // namespace cyclomc
