/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "backend/session.hpp"

#include "logic/ops.hpp"
#include "qelim/qelim.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <optional>

namespace cyclomc {

namespace {

// Interval constraints on a single variable obtained by substituting the
// already-chosen prefix of the assignment into one FM stage.
struct Interval {
    std::optional<std::pair<Rational, bool>> lo, hi; // value, strict
    std::optional<Rational> eq;

    void add(Rel rel, const Rational & value, bool from_negative_coeff) {
        switch (rel) {
            case Rel::Eq:
                assert(!eq || *eq == value);
                eq = value;
                break;
            case Rel::Le:
            case Rel::Lt: {
                bool strict = rel == Rel::Lt;
                if (from_negative_coeff) {
                    if (!lo || value > lo->first || (value == lo->first && strict)) lo = {value, strict};
                } else {
                    if (!hi || value < hi->first || (value == hi->first && strict)) hi = {value, strict};
                }
                break;
            }
            default: throw std::logic_error("interval: unexpected relation");
        }
    }

    bool admits(const Rational & v) const {
        if (eq && v != *eq) return false;
        if (lo && (v < lo->first || (v == lo->first && lo->second))) return false;
        if (hi && (v > hi->first || (v == hi->first && hi->second))) return false;
        return true;
    }
};

// Deterministic value selection: the least attainable value when one
// exists, with integer preference for Int variables; fixed fallbacks
// otherwise (no least element in open or unbounded intervals).
Rational pick_value(Sort sort, const Interval & iv) {
    if (iv.eq) return *iv.eq;
    const bool is_int = sort == Sort::Int;
    if (iv.lo) {
        Rational base = iv.lo->first;
        if (is_int) {
            Rational c = base.ceil();
            if (c == base && iv.lo->second) c += Rational(1);
            if (iv.admits(c)) return c;
            // No integer in range; return a rational witness and let the
            // branch-and-bound layer split on it.
        }
        if (!iv.lo->second && iv.admits(base)) return base;
        if (iv.hi) {
            Rational mid = (iv.lo->first + iv.hi->first) / Rational(2);
            assert(iv.admits(mid));
            return mid;
        }
        Rational v = base + Rational(1);
        assert(iv.admits(v));
        return v;
    }
    if (iv.hi) {
        Rational zero(0);
        if (iv.admits(zero)) return zero;
        Rational base = iv.hi->first;
        if (is_int) {
            Rational f = base.floor();
            if (f == base && iv.hi->second) f -= Rational(1);
            if (iv.admits(f)) return f;
        }
        if (!iv.hi->second) return base;
        return base - Rational(1);
    }
    return Rational(0);
}

class InternalSolver final : public SolverSession {
public:
    SatResult check_sat(const Formula & f) override {
        auto t0 = std::chrono::steady_clock::now();
        SatResult r = check_sat_impl(f);
        stats_.wall_seconds +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    }

private:
    static constexpr int kIntSplitBudget = 512;

    SatResult check_sat_impl(const Formula & f) {
        ++stats_.sat_queries;
        if (!is_quantifier_free(f)) {
            throw std::invalid_argument("internal solver requires a quantifier-free formula");
        }
        VarSet fvs = free_vars(f);
        Dnf dnf = to_dnf(f);
        bool saw_unknown = false;
        for (auto const & cube : dnf) {
            Cube convex, nes;
            for (auto const & a : cube) (a.rel == Rel::Ne ? nes : convex).push_back(a);
            VarSet cube_vars;
            for (auto const & a : cube) a.lhs.collect_vars(cube_vars);
            int splits = kIntSplitBudget;
            SatResult r = solve_cube(convex, nes, cube_vars, splits);
            if (r.is_sat()) {
                for (auto const & v : fvs) {
                    if (!r.model.has(v)) r.model.set(v, Rational(0));
                }
                assert(evaluate(f, r.model));
                return r;
            }
            if (r.is_unknown()) saw_unknown = true;
        }
        return saw_unknown ? SatResult::unknown("integer split budget exhausted") : SatResult::unsat();
    }

    SatResult solve_cube(const Cube & convex, const Cube & nes, const VarSet & cube_vars, int & splits) {
        std::optional<Model> m = feasible_model(convex, cube_vars);
        if (!m) return SatResult::unsat();

        for (size_t i = 0; i < nes.size(); ++i) {
            if (nes[i].evaluate(m->values)) continue;
            // The model hits the excluded hyperplane; split it away.
            Cube rest_nes;
            for (size_t j = 0; j < nes.size(); ++j)
                if (j != i) rest_nes.push_back(nes[j]);
            for (Rel side : {Rel::Lt, Rel::Gt}) {
                Formula branch = mk_atom(nes[i].lhs, side, LinTerm::constant(nes[i].bound));
                if (is_false(branch)) continue;
                Cube c2 = convex;
                if (!is_true(branch)) c2.push_back(*branch->atom);
                SatResult r = solve_cube(c2, rest_nes, cube_vars, splits);
                if (!r.is_unsat()) return r;
            }
            return SatResult::unsat();
        }

        for (auto const & [v, val] : m->values) {
            if (v.sort != Sort::Int || val.is_integer()) continue;
            if (splits <= 0) return SatResult::unknown("integer split budget exhausted");
            --splits;
            bool saw_unknown = false;
            for (Rel side : {Rel::Le, Rel::Ge}) {
                Rational b = side == Rel::Le ? val.floor() : val.ceil();
                Formula branch = mk_atom(LinTerm(v), side, LinTerm::constant(b));
                Cube c2 = convex;
                if (!is_true(branch)) c2.push_back(*branch->atom);
                SatResult r = solve_cube(c2, nes, cube_vars, splits);
                if (r.is_sat()) return r;
                saw_unknown = saw_unknown || r.is_unknown();
            }
            return saw_unknown ? SatResult::unknown("integer split budget exhausted") : SatResult::unsat();
        }

        return SatResult::sat(std::move(*m));
    }

    // Rational satisfiability of a conjunction of Eq/Le/Lt atoms, with a
    // deterministic witness: eliminate variables back to front, then walk
    // the stages forward assigning one variable at a time. The model is
    // total on all_vars.
    std::optional<Model> feasible_model(const Cube & convex, const VarSet & all_vars) {
        VarSet vset = all_vars;
        for (auto const & a : convex) a.lhs.collect_vars(vset);
        std::vector<Var> vars(vset.begin(), vset.end());

        std::vector<Cube> stages(vars.size() + 1);
        stages[vars.size()] = convex;
        for (size_t k = vars.size(); k-- > 0;) {
            std::optional<Cube> next = fm_eliminate(stages[k + 1], vars[k]);
            if (!next) return std::nullopt;
            stages[k] = std::move(*next);
        }

        Model m;
        for (size_t k = 0; k < vars.size(); ++k) {
            const Var & v = vars[k];
            Interval iv;
            for (auto const & a : stages[k + 1]) {
                Rational c = a.lhs.coeff(v);
                if (c.is_zero()) continue;
                // c*v + rest REL bound, prefix already assigned.
                LinTerm rest = a.lhs + LinTerm(v).scaled(-c);
                Rational rhs = (a.bound - rest.evaluate(m.values)) / c;
                iv.add(a.rel, rhs, c.is_negative());
            }
            m.set(v, pick_value(v.sort, iv));
        }
        return m;
    }
};

} // namespace

std::unique_ptr<SolverSession> make_internal_session() { return std::make_unique<InternalSolver>(); }

} // namespace cyclomc
