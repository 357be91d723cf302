/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "strategies/detail.hpp"

#include "logic/ops.hpp"
#include "qelim/qelim.hpp"

#include <cassert>

namespace cyclomc {

namespace {

thread_local McrRunStats g_last_run_stats;

Formula unstep(const Formula & f) {
    std::map<Var, Var> ren;
    for (auto const & v : free_vars(f)) {
        if (v.tag == Var::Tag::Step) ren.emplace(v, v.plain());
    }
    return rename(f, ren);
}

McrResult validated(SolverSession & session, const TransitionSystem & ts, const CutSequence & original,
                    CutSequence refined) {
    std::string why;
    if (!check_refinement(session, ts, original.phis, refined.phis, &why)) {
        return McrFailure{McrFailure::Kind::Unknown, "refinement failed re-validation: " + why};
    }
    return refined;
}

/// Shared recursion of IndPDR and IndPDR/mbp; `gamma_of` builds the
/// strengthening target from the chosen model (substitution for plain
/// IndPDR, projection for the mbp variants).
struct PdrRecursion {
    SolverSession & session;
    const TransitionSystem & ts;
    const ModelSelector & select;
    long max_iterations;
    ItpStrength strength;
    std::function<Formula(const Formula & assertion, const Formula & frame, const Model &)> gamma_of;
    long iterations_used = 0;

    using Outcome = std::variant<std::vector<Formula>, McrFailure>;

    Outcome run(const Formula & assertion, std::vector<Formula> phis, size_t level) {
        SatResult bad_init = session.check_sat(mk_and(ts.init(), mk_not(assertion)));
        if (bad_init.is_unknown()) return McrFailure{McrFailure::Kind::Unknown, bad_init.reason};
        if (bad_init.is_sat()) return McrFailure{McrFailure::Kind::NoRefinement, "init violates the goal"};

        size_t n = phis.size() - 1;
        EntailmentResult done = session.check_entailment(phis[n], assertion);
        if (done.is_unknown()) return McrFailure{McrFailure::Kind::Unknown, done.reason};
        if (done.is_valid()) return phis;

        assert(n >= 1);
        if (g_last_run_stats.loop_iterations_per_level.size() <= level) {
            g_last_run_stats.loop_iterations_per_level.resize(level + 1, 0);
        }
        while (true) {
            Formula query = mk_and(mk_and(phis[n - 1], ts.trans()), ts.prime(mk_not(assertion)));
            std::optional<Model> m;
            try {
                m = select(session, query);
            } catch (const BackendUnknown & e) {
                return McrFailure{McrFailure::Kind::Unknown, e.what()};
            }
            if (!m) break;
            assert(evaluate(query, *m));
            if (++iterations_used > max_iterations) {
                return McrFailure{McrFailure::Kind::BudgetExhausted,
                                  "loop iteration cap at level " + std::to_string(n)};
            }
            ++g_last_run_stats.loop_iterations_per_level[level];

            Formula gamma = gamma_of(assertion, phis[n - 1], *m);
            std::vector<Formula> prefix(phis.begin(), phis.end() - 1);
            Outcome sub = run(simplify(nnf(mk_not(gamma))), std::move(prefix), level + 1);
            if (auto * fail = std::get_if<McrFailure>(&sub)) return *fail;
            prefix = std::get<std::vector<Formula>>(std::move(sub));
            for (size_t i = 0; i + 1 < phis.size(); ++i) phis[i] = prefix[i];
        }

        // post(phi_{n-1}) |= phi_n /\ assertion holds; close by interpolation.
        BinItpResult itp;
        try {
            itp = binary_interpolant(session, mk_and(phis[n - 1], ts.trans()),
                                     mk_and(ts.prime(phis[n]), ts.prime(assertion)), strength);
        } catch (const BackendUnknown & e) { return McrFailure{McrFailure::Kind::Unknown, e.what()}; }
        if (std::holds_alternative<NoInterpolant>(itp)) {
            return McrFailure{McrFailure::Kind::Unknown, "closing interpolation query was satisfiable"};
        }
        phis[n] = simplify(ts.unprime(std::get<Formula>(std::move(itp))));
        return phis;
    }
};

} // namespace

const McrRunStats & last_mcr_run_stats() { return g_last_run_stats; }

McrResult naive_mcr(SolverSession & session, const TransitionSystem & ts, const CutSequence & phis,
                    ItpStrength strength) {
    std::string why;
    if (!check_input_condition(session, ts, phis.phis, &why)) {
        throw std::invalid_argument("naive_mcr input condition violated: " + why);
    }
    McItpResult r;
    try {
        r = mc_interpolant(session, ts, phis.phis, strength);
    } catch (const BackendUnknown & e) { return McrFailure{McrFailure::Kind::Unknown, e.what()}; }
    if (std::holds_alternative<NoInterpolant>(r)) {
        return McrFailure{McrFailure::Kind::NoRefinement, "no 0-conservative interpolant exists"};
    }
    McInterpolant mc = std::get<McInterpolant>(std::move(r));
    CutSequence refined = phis;
    for (size_t i = 0; i < refined.phis.size(); ++i) {
        refined.phis[i] = simplify(mk_and(refined.phis[i], unstep(mc.interpolant.psis[i])));
    }
    return validated(session, ts, phis, std::move(refined));
}

McrResult ind_mcr(SolverSession & session, const TransitionSystem & ts, const Formula & assertion,
                  const CutSequence & phis, ItpStrength strength) {
    SatResult bad_init = session.check_sat(mk_and(ts.init(), mk_not(assertion)));
    if (bad_init.is_unknown()) return McrFailure{McrFailure::Kind::Unknown, bad_init.reason};
    if (bad_init.is_sat()) return McrFailure{McrFailure::Kind::NoRefinement, "init violates the goal"};

    size_t n = phis.phis.size() - 1;
    EntailmentResult done = session.check_entailment(phis.phis[n], assertion);
    if (done.is_unknown()) return McrFailure{McrFailure::Kind::Unknown, done.reason};
    if (done.is_valid()) return phis;

    assert(n >= 1);
    // One-step weakest precondition of the goal, quantifier-eliminated.
    VarSet primed(ts.primed_vars().begin(), ts.primed_vars().end());
    Formula gamma = qe_exists(primed, mk_and(ts.trans(), ts.prime(mk_not(assertion))));

    CutSequence prefix;
    prefix.phis.assign(phis.phis.begin(), phis.phis.end() - 1);
    McrResult sub = ind_mcr(session, ts, simplify(nnf(mk_not(gamma))), prefix, strength);
    if (std::holds_alternative<McrFailure>(sub)) return sub;
    prefix = std::get<CutSequence>(std::move(sub));

    CutSequence out;
    out.phis = prefix.phis;
    BinItpResult itp;
    try {
        itp = binary_interpolant(session, mk_and(prefix.phis[n - 1], ts.trans()),
                                 mk_and(ts.prime(phis.phis[n]), ts.prime(assertion)), strength);
    } catch (const BackendUnknown & e) { return McrFailure{McrFailure::Kind::Unknown, e.what()}; }
    if (std::holds_alternative<NoInterpolant>(itp)) {
        return McrFailure{McrFailure::Kind::Unknown, "closing interpolation query was satisfiable"};
    }
    out.phis.push_back(simplify(ts.unprime(std::get<Formula>(std::move(itp)))));

    // Re-check the refinement constraints against the current goal.
    TransitionSystem goal_system(ts.state_vars(), ts.init(), ts.trans(), assertion);
    return validated(session, goal_system, phis, std::move(out));
}

McrResult ind_pdr(SolverSession & session, const TransitionSystem & ts, const CutSequence & phis,
                  const ModelSelector & select, long max_iterations, ItpStrength strength) {
    g_last_run_stats = {};
    PdrRecursion rec{session, ts, select, max_iterations, strength, nullptr, 0};
    rec.gamma_of = [&ts](const Formula & assertion, const Formula &, const Model & m) {
        // tau(x, M(y)) /\ not assertion(M(y)): plug the chosen next state in.
        Substitution sub;
        for (size_t i = 0; i < ts.state_vars().size(); ++i) {
            sub.emplace(ts.primed_vars()[i], LinTerm::constant(m.at(ts.primed_vars()[i])));
        }
        return simplify(substitute(mk_and(ts.trans(), ts.prime(mk_not(assertion))), sub));
    };
    auto out = rec.run(ts.assertion(), phis.phis, 0);
    if (auto * fail = std::get_if<McrFailure>(&out)) return *fail;
    CutSequence refined;
    refined.phis = std::get<std::vector<Formula>>(std::move(out));
    try {
        return validated(session, ts, phis, std::move(refined));
    } catch (const BackendUnknown & e) { return McrFailure{McrFailure::Kind::Unknown, e.what()}; }
}

McrResult ind_pdr_mbp(SolverSession & session, const TransitionSystem & ts, const CutSequence & phis,
                      MbpFlavor flavor, const ModelSelector & select, long max_iterations,
                      ItpStrength strength, bool primed_variant) {
    g_last_run_stats = {};
    PdrRecursion rec{session, ts, select, max_iterations, strength, nullptr, 0};
    VarSet primed(ts.primed_vars().begin(), ts.primed_vars().end());
    rec.gamma_of = [&ts, primed, flavor, primed_variant](const Formula & assertion, const Formula & frame,
                                                         const Model & m) {
        Formula target = mk_and(ts.trans(), ts.prime(mk_not(assertion)));
        if (primed_variant) target = mk_and(frame, target);
        return simplify(mbp(flavor, target, primed, m));
    };
    auto out = rec.run(ts.assertion(), phis.phis, 0);
    if (auto * fail = std::get_if<McrFailure>(&out)) return *fail;
    CutSequence refined;
    refined.phis = std::get<std::vector<Formula>>(std::move(out));
    try {
        return validated(session, ts, phis, std::move(refined));
    } catch (const BackendUnknown & e) { return McrFailure{McrFailure::Kind::Unknown, e.what()}; }
}

} // namespace cyclomc
