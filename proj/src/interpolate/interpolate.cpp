/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "interpolate/interpolate.hpp"

#include "logic/ops.hpp"
#include "qelim/qelim.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace cyclomc {

namespace itp_hooks {

namespace {
SeqObserver g_seq_observer;
McObserver g_mc_observer;
} // namespace

void set_seq_observer(SeqObserver obs) { g_seq_observer = std::move(obs); }
void set_mc_observer(McObserver obs) { g_mc_observer = std::move(obs); }

} // namespace itp_hooks

namespace {

void notify_seq(const ThetaSequence & thetas, const SeqInterpolant & itp) {
    if (itp_hooks::g_seq_observer) itp_hooks::g_seq_observer(thetas, itp);
}

void notify_mc(const TransitionSystem & ts, const std::vector<Formula> & phis, size_t level) {
    if (itp_hooks::g_mc_observer) itp_hooks::g_mc_observer(ts, phis, level);
}

VarSet intersect(const VarSet & a, const VarSet & b) {
    VarSet out;
    for (auto const & v : a)
        if (b.count(v)) out.insert(v);
    return out;
}

VarSet minus(const VarSet & a, const VarSet & b) {
    VarSet out;
    for (auto const & v : a)
        if (!b.count(v)) out.insert(v);
    return out;
}

/// Per-step models over the plain state variables, extracted from a model
/// of a step-indexed unrolling.
std::vector<Model> split_steps(const Model & big) {
    int max_step = -1;
    for (auto const & [v, r] : big.values) {
        if (v.tag == Var::Tag::Step) max_step = std::max(max_step, v.step);
    }
    std::vector<Model> out;
    for (int i = 0; i <= max_step; ++i) {
        Model m;
        for (auto const & [v, r] : big.values) {
            if (v.tag == Var::Tag::Step && v.step == i) m.set(v.plain(), r);
        }
        out.push_back(std::move(m));
    }
    return out;
}

} // namespace

Formula weaken_toward(SolverSession & session, const Formula & phi, const Formula & target) {
    if (session.check_entailment(mk_true(), target).is_valid()) return mk_true();
    Dnf dnf;
    try {
        dnf = to_dnf(phi);
    } catch (const QelimError &) { return phi; }
    std::vector<Formula> cubes;
    for (auto const & cube : dnf) {
        // Equalities relax into their two bound halves so each side can be
        // dropped independently.
        Cube atoms;
        for (auto const & a : cube) {
            if (a.rel == Rel::Eq) {
                Formula le = mk_atom(a.lhs, Rel::Le, LinTerm::constant(a.bound));
                Formula ge = mk_atom(a.lhs, Rel::Ge, LinTerm::constant(a.bound));
                if (!is_true(le)) atoms.push_back(*le->atom);
                if (!is_true(ge)) atoms.push_back(*ge->atom);
            } else {
                atoms.push_back(a);
            }
        }
        // Greedy drop: remove an atom whenever the rest still entails the
        // target.
        for (size_t i = 0; i < atoms.size();) {
            Cube candidate;
            for (size_t j = 0; j < atoms.size(); ++j)
                if (j != i) candidate.push_back(atoms[j]);
            if (session.check_entailment(cube_to_formula(candidate), target).is_valid()) {
                atoms = std::move(candidate);
            } else {
                ++i;
            }
        }
        cubes.push_back(cube_to_formula(atoms));
    }
    return simplify(mk_or(std::move(cubes)));
}

BinItpResult binary_interpolant(SolverSession & session, const Formula & a, const Formula & b,
                                ItpStrength strength) {
    Formula query = mk_and(a, mk_not(b));
    if (!is_quantifier_free(query)) query = eliminate_quantifiers(query);
    SatResult sat = session.check_sat(query);
    if (sat.is_unknown()) throw BackendUnknown(sat.reason);
    if (sat.is_sat()) return NoInterpolant{{std::move(sat.model)}};

    VarSet fa = free_vars(a), fb = free_vars(b);
    VarSet shared = intersect(fa, fb);
    Formula gamma;
    if (strength == ItpStrength::Weakest) {
        gamma = simplify(qe_forall(minus(fb, shared), is_quantifier_free(b) ? b : eliminate_quantifiers(b)));
    } else {
        gamma = simplify(qe_exists(minus(fa, shared), is_quantifier_free(a) ? a : eliminate_quantifiers(a)));
        if (strength == ItpStrength::Generalized) {
            Formula target =
                simplify(qe_forall(minus(fb, shared), is_quantifier_free(b) ? b : eliminate_quantifiers(b)));
            gamma = weaken_toward(session, gamma, target);
        }
    }

    // Never trust construction: both entailments are re-checked. A failure
    // here can only come from the documented rational-relaxation gap on Int
    // sorts and is surfaced as an inconclusive backend answer.
    if (!session.check_entailment(a, gamma).is_valid() || !session.check_entailment(gamma, b).is_valid()) {
        throw BackendUnknown("interpolant validation failed (integer relaxation gap)");
    }
    return gamma;
}

ThetaSequence make_theta_sequence(const TransitionSystem & ts, const std::vector<Formula> & phis) {
    if (phis.empty()) throw std::invalid_argument("make_theta_sequence: empty cut sequence");
    size_t n = phis.size() - 1;
    ThetaSequence seq;
    auto step_vars = [&ts](int k) {
        VarSet s;
        for (auto const & v : ts.state_vars()) s.insert(v.at_step(k));
        return s;
    };
    if (n == 0) {
        seq.thetas.push_back(mk_and(ts.at_step(phis[0], 0), ts.at_step(mk_not(ts.assertion()), 0)));
        seq.cut_points = {VarSet{}, VarSet{}};
        return seq;
    }
    seq.thetas.push_back(mk_and(ts.at_step(phis[0], 0), ts.trans_step(0)));
    for (size_t i = 1; i < n; ++i) {
        seq.thetas.push_back(mk_and(ts.at_step(phis[i], static_cast<int>(i)), ts.trans_step(static_cast<int>(i))));
    }
    seq.thetas.push_back(mk_and(ts.at_step(phis[n], static_cast<int>(n)),
                                ts.at_step(mk_not(ts.assertion()), static_cast<int>(n))));
    seq.cut_points.push_back({});
    for (size_t i = 1; i <= n; ++i) seq.cut_points.push_back(step_vars(static_cast<int>(i)));
    seq.cut_points.push_back({});
    return seq;
}

SeqItpResult seq_interpolant(SolverSession & session, const ThetaSequence & thetas, ItpStrength strength) {
    size_t m = thetas.thetas.size(); // n + 1 constraints
    std::vector<Formula> psis(m + 1);
    psis[0] = mk_true();
    psis[m] = mk_false();

    // Admissible variables for psi_i: whatever the prefix and the suffix of
    // the chain actually share. This can be narrower than the step-i frame
    // (a variable the suffix never mentions must not appear).
    std::vector<VarSet> prefix_fv(m + 1), suffix_fv(m + 2), allowed(m + 1);
    for (size_t i = 1; i <= m; ++i) {
        prefix_fv[i] = prefix_fv[i - 1];
        for (auto const & v : free_vars(thetas.thetas[i - 1])) prefix_fv[i].insert(v);
    }
    for (size_t i = m; i >= 1; --i) {
        suffix_fv[i] = suffix_fv[i + 1];
        for (auto const & v : free_vars(thetas.thetas[i - 1])) suffix_fv[i].insert(v);
    }
    for (size_t i = 1; i < m; ++i) allowed[i] = intersect(prefix_fv[i], suffix_fv[i + 1]);

    if (strength != ItpStrength::Weakest) {
        for (size_t i = 1; i < m; ++i) {
            Formula conj = mk_and(psis[i - 1], thetas.thetas[i - 1]);
            psis[i] = simplify(qe_exists(minus(free_vars(conj), allowed[i]), conj));
        }
        // The chain closes iff the final clause holds.
        Formula last = mk_and(psis[m - 1], thetas.thetas[m - 1]);
        SatResult sat = session.check_sat(last);
        if (sat.is_unknown()) throw BackendUnknown(sat.reason);
        if (!sat.is_sat()) {
            if (strength == ItpStrength::Generalized) {
                // Backward pass: each psi_i may widen up to the weakest
                // formula that still pushes into the (already widened)
                // successor, keeping every chain clause valid.
                for (size_t i = m; i-- > 1;) {
                    Formula impl = mk_implies(thetas.thetas[i], psis[i + 1]);
                    Formula target = simplify(qe_forall(minus(free_vars(impl), allowed[i]), impl));
                    psis[i] = weaken_toward(session, psis[i], target);
                }
            }
            SeqInterpolant out{std::move(psis)};
            notify_seq(thetas, out);
            return out;
        }
    } else {
        for (size_t i = m; i-- > 1;) {
            Formula impl = mk_implies(thetas.thetas[i], psis[i + 1]);
            psis[i] = simplify(qe_forall(minus(free_vars(impl), allowed[i]), impl));
        }
        // psi_0 /\ theta_1 |= psi_1 is the remaining obligation; it fails
        // exactly when the whole chain is satisfiable.
        EntailmentResult e = session.check_entailment(thetas.thetas[0], psis[1]);
        if (e.is_unknown()) throw BackendUnknown(e.reason);
        if (e.is_valid()) {
            SeqInterpolant out{std::move(psis)};
            notify_seq(thetas, out);
            return out;
        }
    }

    // Counterexample: the conjunction of the whole chain is satisfiable.
    std::vector<Formula> all = thetas.thetas;
    SatResult sat = session.check_sat(mk_and(std::move(all)));
    if (sat.is_unknown()) throw BackendUnknown(sat.reason);
    if (!sat.is_sat()) {
        // The per-clause route failed but the chain is unsatisfiable; this
        // indicates the relaxation gap, reported as inconclusive.
        throw BackendUnknown("interpolation chain inconsistent with satisfiability check");
    }
    return NoInterpolant{split_steps(sat.model)};
}

bool validate_seq_interpolant(SolverSession & session, const ThetaSequence & thetas,
                              const SeqInterpolant & itp, std::string * why) {
    size_t m = thetas.thetas.size();
    auto fail = [&why](const std::string & msg) {
        if (why) *why = msg;
        return false;
    };
    if (itp.psis.size() != m + 1) return fail("wrong interpolant length");
    if (!is_true(itp.psis[0])) return fail("psi_0 is not true");
    if (!is_false(itp.psis[m])) return fail("psi_{n+1} is not false");
    for (size_t i = 1; i <= m; ++i) {
        EntailmentResult e =
            session.check_entailment(mk_and(itp.psis[i - 1], thetas.thetas[i - 1]), itp.psis[i]);
        if (!e.is_valid()) {
            return fail("clause 2 fails at position " + std::to_string(i));
        }
    }
    // Shared-variable condition: fv(psi_i) within the intersection of
    // fv(theta_1..i) and fv(theta_{i+1}..{n+1}).
    std::vector<VarSet> prefix(m + 1), suffix(m + 2);
    for (size_t i = 1; i <= m; ++i) {
        prefix[i] = prefix[i - 1];
        for (auto const & v : free_vars(thetas.thetas[i - 1])) prefix[i].insert(v);
    }
    for (size_t i = m; i >= 1; --i) {
        suffix[i] = suffix[i + 1];
        for (auto const & v : free_vars(thetas.thetas[i - 1])) suffix[i].insert(v);
    }
    for (size_t i = 1; i < m; ++i) {
        VarSet allowed = intersect(prefix[i], suffix[i + 1]);
        for (auto const & v : free_vars(itp.psis[i])) {
            if (!allowed.count(v)) {
                return fail("shared-variable condition fails at position " + std::to_string(i) +
                            " for " + v.str());
            }
        }
    }
    return true;
}

McItpResult mc_interpolant(SolverSession & session, const TransitionSystem & ts,
                           const std::vector<Formula> & phis, ItpStrength strength) {
    if (phis.empty()) throw std::invalid_argument("mc_interpolant: empty cut sequence");
    size_t n = phis.size() - 1;
    NoInterpolant last_failure;
    for (size_t k = n + 1; k-- > 0;) {
        // Suffix chain for phi_k ... phi_n with absolute step indices.
        std::vector<Formula> suffix(phis.begin() + static_cast<long>(k), phis.end());
        ThetaSequence chain;
        auto step_vars = [&ts](int s) {
            VarSet out;
            for (auto const & v : ts.state_vars()) out.insert(v.at_step(s));
            return out;
        };
        size_t len = suffix.size() - 1; // transitions in the suffix
        if (len == 0) {
            chain.thetas.push_back(mk_and(ts.at_step(suffix[0], static_cast<int>(k)),
                                          ts.at_step(mk_not(ts.assertion()), static_cast<int>(k))));
            chain.cut_points = {VarSet{}, VarSet{}};
        } else {
            for (size_t i = 0; i < len; ++i) {
                int s = static_cast<int>(k + i);
                chain.thetas.push_back(mk_and(ts.at_step(suffix[i], s), ts.trans_step(s)));
            }
            chain.thetas.push_back(mk_and(ts.at_step(suffix[len], static_cast<int>(k + len)),
                                          ts.at_step(mk_not(ts.assertion()), static_cast<int>(k + len))));
            chain.cut_points.push_back({});
            for (size_t i = 1; i <= len; ++i) chain.cut_points.push_back(step_vars(static_cast<int>(k + i)));
            chain.cut_points.push_back({});
        }
        SeqItpResult r = seq_interpolant(session, chain, strength);
        if (auto * itp = std::get_if<SeqInterpolant>(&r)) {
            // Pad to full length: positions 0..k keep true.
            SeqInterpolant padded;
            padded.psis.assign(n + 2, mk_true());
            for (size_t j = 1; j < itp->psis.size(); ++j) padded.psis[k + j] = itp->psis[j];
            notify_mc(ts, phis, k);
            return McInterpolant{k, std::move(padded)};
        }
        last_failure = std::get<NoInterpolant>(std::move(r));
    }
    return last_failure;
}

std::vector<Model> trace_from_thetas(SolverSession & session, const TransitionSystem & ts,
                                     size_t steps) {
    std::vector<Formula> parts;
    parts.push_back(ts.at_step(ts.init(), 0));
    for (size_t i = 0; i < steps; ++i) parts.push_back(ts.trans_step(static_cast<int>(i)));
    parts.push_back(ts.at_step(mk_not(ts.assertion()), static_cast<int>(steps)));
    SatResult sat = session.check_sat(mk_and(std::move(parts)));
    if (sat.is_unknown()) throw BackendUnknown(sat.reason);
    if (!sat.is_sat()) return {};
    return split_steps(sat.model);
}

} // namespace cyclomc
