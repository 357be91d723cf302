/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "front/problem.hpp"

#include "logic/ops.hpp"
#include "qelim/qelim.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace cyclomc {

namespace {

bool is_numeral(const std::string & s) {
    if (s.empty()) return false;
    size_t i = (s[0] == '-') ? 1 : 0;
    if (i >= s.size()) return false;
    bool dot = false;
    for (; i < s.size(); ++i) {
        if (s[i] == '.') {
            if (dot) return false;
            dot = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

Rational numeral_value(const std::string & s) {
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational::from_string(s);
    // decimal literal: 1.5 = 15/10
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac = s.size() - dot - 1;
    Rational num = Rational::from_string(digits);
    Rational den(1);
    for (size_t i = 0; i < frac; ++i) den *= Rational(10);
    return num / den;
}

LinTerm parse_term(const Sexpr & e, const VarScope & scope) {
    if (e.is_symbol()) {
        if (is_numeral(e.symbol)) return LinTerm::constant(numeral_value(e.symbol));
        auto it = scope.find(e.symbol);
        if (it == scope.end()) throw ProblemError("unknown variable '" + e.symbol + "'", e.line, e.column);
        return LinTerm(it->second);
    }
    if (e.size() == 0) throw ProblemError("empty term", e.line, e.column);
    const std::string & op = e[0].symbol;
    if (op == "+") {
        LinTerm acc;
        for (size_t i = 1; i < e.size(); ++i) acc += parse_term(e[i], scope);
        return acc;
    }
    if (op == "-") {
        if (e.size() == 2) return -parse_term(e[1], scope);
        if (e.size() < 3) throw ProblemError("'-' needs arguments", e.line, e.column);
        LinTerm acc = parse_term(e[1], scope);
        for (size_t i = 2; i < e.size(); ++i) acc -= parse_term(e[i], scope);
        return acc;
    }
    if (op == "*") {
        if (e.size() < 3) throw ProblemError("'*' needs two arguments", e.line, e.column);
        LinTerm acc = parse_term(e[1], scope);
        for (size_t i = 2; i < e.size(); ++i) {
            LinTerm t = parse_term(e[i], scope);
            if (acc.is_constant()) {
                t = t.scaled(acc.constant_part());
                acc = t;
            } else if (t.is_constant()) {
                acc = acc.scaled(t.constant_part());
            } else {
                throw ProblemError("nonlinear product", e.line, e.column);
            }
        }
        return acc;
    }
    if (op == "/") {
        if (e.size() != 3) throw ProblemError("'/' needs two arguments", e.line, e.column);
        LinTerm num = parse_term(e[1], scope);
        LinTerm den = parse_term(e[2], scope);
        if (!den.is_constant() || den.constant_part().is_zero()) {
            throw ProblemError("division must be by a nonzero constant", e.line, e.column);
        }
        return num.scaled(Rational(1) / den.constant_part());
    }
    throw ProblemError("unknown term operator '" + op + "'", e.line, e.column);
}

Sort parse_sort(const Sexpr & e) {
    if (e.is_symbol("Int")) return Sort::Int;
    if (e.is_symbol("Real")) return Sort::Real;
    throw ProblemError("unsupported sort '" + e.str() + "'", e.line, e.column);
}

} // namespace

Formula parse_formula(const Sexpr & e, const VarScope & scope) {
    if (e.is_symbol("true")) return mk_true();
    if (e.is_symbol("false")) return mk_false();
    if (e.is_symbol()) throw ProblemError("expected a formula, got '" + e.symbol + "'", e.line, e.column);
    if (e.size() == 0) throw ProblemError("empty formula", e.line, e.column);
    const std::string & op = e[0].symbol;

    auto rel_of = [&op]() -> std::optional<Rel> {
        if (op == "=") return Rel::Eq;
        if (op == "distinct") return Rel::Ne;
        if (op == "<=") return Rel::Le;
        if (op == "<") return Rel::Lt;
        if (op == ">=") return Rel::Ge;
        if (op == ">") return Rel::Gt;
        return std::nullopt;
    };
    if (auto rel = rel_of()) {
        if (e.size() != 3) throw ProblemError("relation needs two arguments", e.line, e.column);
        return mk_atom(parse_term(e[1], scope), *rel, parse_term(e[2], scope));
    }
    if (op == "and" || op == "or") {
        std::vector<Formula> args;
        for (size_t i = 1; i < e.size(); ++i) args.push_back(parse_formula(e[i], scope));
        return op == "and" ? mk_and(std::move(args)) : mk_or(std::move(args));
    }
    if (op == "not") {
        if (e.size() != 2) throw ProblemError("'not' needs one argument", e.line, e.column);
        return mk_not(parse_formula(e[1], scope));
    }
    if (op == "=>") {
        if (e.size() < 3) throw ProblemError("'=>' needs two arguments", e.line, e.column);
        // Right-associative chain.
        Formula acc = parse_formula(e[e.size() - 1], scope);
        for (size_t i = e.size() - 1; i-- > 1;) acc = mk_implies(parse_formula(e[i], scope), acc);
        return acc;
    }
    if (op == "exists" || op == "forall") {
        if (e.size() != 3 || !e[1].is_list()) {
            throw ProblemError("quantifier needs a binder list and a body", e.line, e.column);
        }
        VarScope inner = scope;
        std::vector<Var> binders;
        for (auto const & b : e[1].items) {
            if (!b.is_list() || b.size() != 2 || !b[0].is_symbol()) {
                throw ProblemError("bad binder", b.line, b.column);
            }
            Var v(b[0].symbol, parse_sort(b[1]));
            inner[v.name] = v;
            binders.push_back(v);
        }
        Formula body = parse_formula(e[2], inner);
        return op == "exists" ? mk_exists(std::move(binders), body) : mk_forall(std::move(binders), body);
    }
    throw ProblemError("unknown formula operator '" + op + "'", e.line, e.column);
}

Formula parse_formula(const std::string & text, const VarScope & scope) {
    return parse_formula(parse_sexpr(text), scope);
}

namespace {

std::string print_rational(const Rational & r) {
    if (r.is_negative()) return "(- " + print_rational(-r) + ")";
    if (r.is_integer()) return r.numerator().get_str();
    return "(/ " + r.numerator().get_str() + " " + r.denominator().get_str() + ")";
}

std::string print_term(const LinTerm & t) {
    std::vector<std::string> parts;
    for (auto const & [v, c] : t.coeffs()) {
        if (c == Rational(1)) {
            parts.push_back(v.str());
        } else {
            parts.push_back("(* " + print_rational(c) + " " + v.str() + ")");
        }
    }
    if (!t.constant_part().is_zero() || parts.empty()) parts.push_back(print_rational(t.constant_part()));
    if (parts.size() == 1) return parts[0];
    std::string out = "(+";
    for (auto const & p : parts) out += " " + p;
    return out + ")";
}

std::string print_atom(const Atom & a) {
    return std::string("(") + to_string(a.rel) + " " + print_term(a.lhs) + " " + print_rational(a.bound) +
           ")";
}

void print_rec(std::ostringstream & os, const Formula & f) {
    switch (f->kind) {
        case Conn::True: os << "true"; return;
        case Conn::False: os << "false"; return;
        case Conn::AtomF: os << print_atom(*f->atom); return;
        case Conn::Not:
            os << "(not ";
            print_rec(os, f->args[0]);
            os << ")";
            return;
        case Conn::And:
        case Conn::Or:
            os << (f->kind == Conn::And ? "(and" : "(or");
            for (auto const & a : f->args) {
                os << " ";
                print_rec(os, a);
            }
            os << ")";
            return;
        case Conn::Implies:
            os << "(=> ";
            print_rec(os, f->args[0]);
            os << " ";
            print_rec(os, f->args[1]);
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
            print_rec(os, f->args[0]);
            os << ")";
            return;
        }
    }
}

ProblemFile parse_native(const std::vector<Sexpr> & items) {
    std::vector<Var> vars;
    std::optional<Sexpr> init_e, trans_e, assert_e;
    std::optional<bool> expect_safe;
    for (auto const & item : items) {
        if (!item.is_list() || item.size() == 0 || !item[0].is_symbol()) {
            throw ProblemError("expected a (section ...) form", item.line, item.column);
        }
        const std::string & head = item[0].symbol;
        if (head == "vars") {
            for (size_t i = 1; i < item.size(); ++i) {
                const Sexpr & b = item[i];
                if (!b.is_list() || b.size() != 2 || !b[0].is_symbol()) {
                    throw ProblemError("bad variable declaration", b.line, b.column);
                }
                vars.emplace_back(b[0].symbol, parse_sort(b[1]));
            }
        } else if (head == "init" && item.size() == 2) {
            init_e = item[1];
        } else if (head == "trans" && item.size() == 2) {
            trans_e = item[1];
        } else if (head == "assert" && item.size() == 2) {
            assert_e = item[1];
        } else if (head == "expect" && item.size() == 2) {
            if (item[1].is_symbol("safe")) {
                expect_safe = true;
            } else if (item[1].is_symbol("unsafe")) {
                expect_safe = false;
            } else {
                throw ProblemError("expect wants safe|unsafe", item.line, item.column);
            }
        } else {
            throw ProblemError("unknown section '" + head + "'", item.line, item.column);
        }
    }
    if (vars.empty()) throw ProblemError("missing (vars ...)");
    if (!init_e) throw ProblemError("missing (init ...)");
    if (!trans_e) throw ProblemError("missing (trans ...)");
    if (!assert_e) throw ProblemError("missing (assert ...)");

    VarScope plain, full;
    for (auto const & v : vars) {
        plain[v.str()] = v;
        full[v.str()] = v;
        full[v.primed().str()] = v.primed();
    }
    Formula init = parse_formula(*init_e, plain);
    Formula trans = parse_formula(*trans_e, full);
    Formula assertion = parse_formula(*assert_e, plain);
    if (!is_quantifier_free(init) || !is_quantifier_free(trans) || !is_quantifier_free(assertion)) {
        throw ProblemError("problem formulas must be quantifier-free");
    }
    ProblemFile p;
    try {
        p.system = std::make_shared<TransitionSystem>(vars, init, trans, assertion);
    } catch (const std::invalid_argument & e) { throw ProblemError(e.what()); }
    p.expect_safe = expect_safe;
    return p;
}

ProblemFile parse_horn(const std::vector<Sexpr> & items) {
    // Single uninterpreted predicate over Int/Real arguments; clauses are
    // forall-quantified implications.
    std::string pred_name;
    std::vector<Sort> pred_sorts;
    std::vector<const Sexpr *> clauses;
    for (auto const & item : items) {
        if (!item.is_list() || item.size() == 0) continue;
        if (item[0].is_symbol("set-logic") || item[0].is_symbol("set-info") ||
            item[0].is_symbol("check-sat") || item[0].is_symbol("get-model") ||
            item[0].is_symbol("exit"))
            continue;
        if (item[0].is_symbol("declare-fun")) {
            if (item.size() != 4 || !item[3].is_symbol("Bool")) {
                throw ProblemError("declare-fun must yield Bool", item.line, item.column);
            }
            if (!pred_name.empty()) {
                throw ProblemError("multiple predicate variables; this solver handles systems with "
                                   "exactly one control state",
                                   item.line, item.column);
            }
            pred_name = item[1].symbol;
            for (auto const & s : item[2].items) pred_sorts.push_back(parse_sort(s));
            continue;
        }
        if (item[0].is_symbol("assert")) {
            clauses.push_back(&item);
            continue;
        }
        throw ProblemError("unsupported command '" + item[0].symbol + "'", item.line, item.column);
    }
    if (pred_name.empty()) throw ProblemError("no predicate declared");

    std::vector<Var> state_vars;
    for (size_t i = 0; i < pred_sorts.size(); ++i) {
        state_vars.emplace_back("v" + std::to_string(i), pred_sorts[i]);
    }
    TransitionSystem shell(state_vars, mk_true(), mk_true(), mk_true());

    std::vector<Formula> inits, trans_parts, bads;

    for (const Sexpr * clause_cmd : clauses) {
        const Sexpr & a = *clause_cmd;
        if (a.size() != 2) throw ProblemError("bad assert", a.line, a.column);
        const Sexpr * body = &a[1];
        VarScope scope;
        std::vector<Var> bound;
        if (body->is_list() && body->size() == 3 && (*body)[0].is_symbol("forall")) {
            for (auto const & b : (*body)[1].items) {
                Var v(b[0].symbol, parse_sort(b[1]));
                scope[v.name] = v;
                bound.push_back(v);
            }
            body = &(*body)[2];
        }
        if (!body->is_list() || body->size() != 3 || !(*body)[0].is_symbol("=>")) {
            throw ProblemError("clause must be an implication", body->line, body->column);
        }
        const Sexpr & lhs = (*body)[1];
        const Sexpr & rhs = (*body)[2];

        // Collect predicate applications and plain conjuncts of the body.
        std::vector<const Sexpr *> conjuncts;
        if (lhs.is_list() && lhs.size() > 0 && lhs[0].is_symbol("and")) {
            for (size_t i = 1; i < lhs.size(); ++i) conjuncts.push_back(&lhs[i]);
        } else {
            conjuncts.push_back(&lhs);
        }
        std::vector<const Sexpr *> pred_apps, constraints;
        for (auto const * c : conjuncts) {
            bool is_app = (c->is_list() && c->size() > 0 && (*c)[0].is_symbol(pred_name)) ||
                          c->is_symbol(pred_name);
            (is_app ? pred_apps : constraints).push_back(c);
        }
        if (pred_apps.size() > 1) {
            throw ProblemError("nonlinear clause (multiple predicate occurrences)", lhs.line, lhs.column);
        }

        auto bind_args = [&](const Sexpr & app, const std::vector<Var> & targets) -> Formula {
            std::vector<Formula> eqs;
            size_t argc = app.is_list() ? app.size() - 1 : 0;
            if (argc != targets.size()) {
                throw ProblemError("predicate arity mismatch", app.line, app.column);
            }
            for (size_t i = 0; i < argc; ++i) {
                eqs.push_back(mk_atom(LinTerm(targets[i]), Rel::Eq, parse_term(app[i + 1], scope)));
            }
            return mk_and(std::move(eqs));
        };

        std::vector<Formula> constraint_fs;
        for (auto const * c : constraints) constraint_fs.push_back(parse_formula(*c, scope));
        Formula constraint = mk_and(std::move(constraint_fs));

        bool head_is_pred = (rhs.is_list() && rhs.size() > 0 && rhs[0].is_symbol(pred_name)) ||
                            rhs.is_symbol(pred_name);
        bool head_is_false = rhs.is_symbol("false");
        if (!head_is_pred && !head_is_false) {
            throw ProblemError("clause head must be the predicate or false", rhs.line, rhs.column);
        }

        VarSet bound_set(bound.begin(), bound.end());
        auto project = [&](Formula f) { return simplify(qe_exists(bound_set, nnf(f))); };

        if (head_is_pred && pred_apps.empty()) {
            inits.push_back(project(mk_and(constraint, bind_args(rhs, state_vars))));
        } else if (head_is_pred && pred_apps.size() == 1) {
            Formula cur = bind_args(*pred_apps[0], state_vars);
            Formula nxt = bind_args(rhs, shell.primed_vars());
            trans_parts.push_back(project(mk_and(mk_and(constraint, cur), nxt)));
        } else if (head_is_false && pred_apps.size() == 1) {
            Formula cur = bind_args(*pred_apps[0], state_vars);
            bads.push_back(project(mk_and(constraint, cur)));
        } else {
            throw ProblemError("constraint-only clause without the predicate", rhs.line, rhs.column);
        }
    }

    Formula init = simplify(mk_or(std::move(inits)));
    Formula trans = simplify(mk_or(std::move(trans_parts)));
    Formula bad = mk_or(std::move(bads));
    Formula assertion = simplify(nnf(mk_not(bad)));
    ProblemFile p;
    p.system = std::make_shared<TransitionSystem>(state_vars, init, trans, assertion);
    return p;
}

} // namespace

std::string print_formula(const Formula & f) {
    std::ostringstream os;
    print_rec(os, f);
    return os.str();
}

VarScope scope_of(const TransitionSystem & ts, bool with_primed) {
    VarScope scope;
    for (auto const & v : ts.state_vars()) {
        scope[v.str()] = v;
        if (with_primed) scope[v.primed().str()] = v.primed();
    }
    return scope;
}

ProblemFile parse_problem(const std::string & text) {
    std::vector<Sexpr> items;
    try {
        items = parse_sexprs(text);
    } catch (const ParseError & e) { throw ProblemError(e.what()); }
    if (items.empty()) throw ProblemError("empty problem file");
    for (auto const & item : items) {
        if (item.is_list() && item.size() > 0 &&
            (item[0].is_symbol("set-logic") || item[0].is_symbol("declare-fun"))) {
            return parse_horn(items);
        }
    }
    return parse_native(items);
}

std::string print_problem(const ProblemFile & p) {
    std::ostringstream os;
    os << "(vars";
    for (auto const & v : p.system->state_vars()) {
        os << " (" << v.str() << " " << to_string(v.sort) << ")";
    }
    os << ")\n";
    os << "(init " << print_formula(p.system->init()) << ")\n";
    os << "(trans " << print_formula(p.system->trans()) << ")\n";
    os << "(assert " << print_formula(p.system->assertion()) << ")\n";
    if (p.expect_safe) os << "(expect " << (*p.expect_safe ? "safe" : "unsafe") << ")\n";
    return os.str();
}

std::string print_rational_sexpr(const Rational & r) { return print_rational(r); }

Rational parse_rational_sexpr(const Sexpr & e) {
    LinTerm t = parse_term(e, VarScope{});
    if (!t.is_constant()) throw ProblemError("expected a constant", e.line, e.column);
    return t.constant_part();
}

std::vector<Formula> parse_formula_lines(const std::string & text, const VarScope & scope) {
    std::vector<Formula> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        // Strip comments and blank lines.
        auto semi = line.find(';');
        if (semi != std::string::npos) line = line.substr(0, semi);
        bool blank = true;
        for (char c : line) blank = blank && std::isspace(static_cast<unsigned char>(c));
        if (blank) continue;
        out.push_back(parse_formula(line, scope));
    }
    return out;
}

} // namespace cyclomc
