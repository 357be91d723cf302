/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_INTERPOLATE_INTERPOLATE_HPP
#define CYCLOMC_INTERPOLATE_INTERPOLATE_HPP

#include "backend/session.hpp"
#include "logic/formula.hpp"
#include "logic/model.hpp"
#include "logic/transition_system.hpp"

#include <functional>
#include <optional>
#include <variant>
#include <vector>

namespace cyclomc {

/// Construction policy for QE-based interpolants. Strongest projects the
/// left side onto the shared variables; Weakest projects the negated right
/// side; Generalized starts from the strongest projection and greedily
/// drops per-disjunct constraints while the right side stays entailed
/// (bounds widen, equalities relax to half-spaces). All three are exact
/// interpolants; they differ in where they land between the extremes.
enum class ItpStrength { Strongest, Weakest, Generalized };

/// The Generalized weakening pass: phi must entail target; returns a
/// formula between them with fewer, wider constraints.
Formula weaken_toward(SolverSession & session, const Formula & phi, const Formula & target);

class BackendUnknown : public std::runtime_error {
public:
    explicit BackendUnknown(const std::string & what) : std::runtime_error(what) {}
};

struct NoInterpolant {
    // One model per violated step; for sequence queries these compose a
    // concrete counterexample trace through the step-indexed variables.
    std::vector<Model> trace;
};

using BinItpResult = std::variant<Formula, NoInterpolant>;

/// Craig interpolant for (a, b): on success gamma with a |= gamma,
/// gamma |= b, fv(gamma) within fv(a) /\ fv(b); otherwise a model of
/// a /\ not b.
BinItpResult binary_interpolant(SolverSession & session, const Formula & a, const Formula & b,
                                ItpStrength strength = ItpStrength::Strongest);

/// theta_1 ... theta_{n+1} over step-indexed variables.
struct ThetaSequence {
    std::vector<Formula> thetas;
    // Shared variables between prefix theta_1..theta_i and the suffix; the
    // step-i frame of a transition-system chain.
    std::vector<VarSet> cut_points;
};

/// Builds the refinement chain for cuts phi_0..phi_n of ts:
///   theta_1 = init(x0) /\ trans(x0,x1)
///   theta_{i+1} = phi_i(x_i) /\ trans(x_i,x_{i+1})     (1 <= i <= n-1)
///   theta_{n+1} = phi_n(x_n) /\ not assert(x_n)
ThetaSequence make_theta_sequence(const TransitionSystem & ts, const std::vector<Formula> & phis);

/// psi_0 = true, ..., psi_{n+1} = false with the three definitional
/// clauses; validated against the theta sequence it was built from.
struct SeqInterpolant {
    std::vector<Formula> psis;
};

using SeqItpResult = std::variant<SeqInterpolant, NoInterpolant>;

SeqItpResult seq_interpolant(SolverSession & session, const ThetaSequence & thetas,
                             ItpStrength strength = ItpStrength::Strongest);

/// Independent validation of the three interpolant clauses through the
/// backend (never trusts construction).
bool validate_seq_interpolant(SolverSession & session, const ThetaSequence & thetas,
                              const SeqInterpolant & itp, std::string * why = nullptr);

struct McInterpolant {
    size_t level; // number of leading cuts kept unchanged
    SeqInterpolant interpolant;
};

using McItpResult = std::variant<McInterpolant, NoInterpolant>;

/// Maximally conservative interpolant for the cut sequence phi_0..phi_n:
/// walks k = n, n-1, ..., 0 and interpolates the suffix chain starting at
/// phi_k as soon as it is unsatisfiable; the returned sequence is padded
/// with leading (true) entries.
McItpResult mc_interpolant(SolverSession & session, const TransitionSystem & ts,
                           const std::vector<Formula> & phis,
                           ItpStrength strength = ItpStrength::Strongest);

/// Counterexample trace through the conjunction of a theta chain, one model
/// per step, already restricted to the state variables.
std::vector<Model> trace_from_thetas(SolverSession & session, const TransitionSystem & ts, size_t steps);

/// Observation hooks for verification harnesses: every successful sequence
/// interpolant and every successful maximally conservative interpolation is
/// reported. Not used in production paths; empty functions disable them.
namespace itp_hooks {

using SeqObserver = std::function<void(const ThetaSequence &, const SeqInterpolant &)>;
using McObserver =
    std::function<void(const TransitionSystem &, const std::vector<Formula> &, size_t level)>;

void set_seq_observer(SeqObserver obs);
void set_mc_observer(McObserver obs);

} // namespace itp_hooks

} // namespace cyclomc

#endif
