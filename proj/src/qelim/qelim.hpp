/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_QELIM_QELIM_HPP
#define CYCLOMC_QELIM_QELIM_HPP

#include "logic/formula.hpp"
#include "logic/ops.hpp"

#include <optional>
#include <vector>

namespace cyclomc {

class QelimError : public std::runtime_error {
public:
    explicit QelimError(const std::string & what) : std::runtime_error(what) {}
};

/// A cube is a conjunction of normalized atoms; a DNF is a disjunction of
/// cubes. The empty cube is true; an infeasible cube is dropped entirely.
using Cube = std::vector<Atom>;
using Dnf = std::vector<Cube>;

/// DNF of a quantifier-free formula. Throws QelimError on quantifiers or
/// when the expansion exceeds the internal cube cap.
Dnf to_dnf(const Formula & f);

Formula cube_to_formula(const Cube & c);
Formula dnf_to_formula(const Dnf & d);

/// Fourier-Motzkin elimination of v from a cube of Eq/Le/Lt atoms (Ne atoms
/// not containing v pass through; Ne on v must be split by the caller).
/// Returns nullopt when the cube is detected infeasible.
std::optional<Cube> fm_eliminate(const Cube & cube, const Var & v);

/// Exact existential projection over the rationals: result is
/// quantifier-free, equivalent to (exists vars. f), with
/// fv(result) = fv(f) \ vars. f must be quantifier-free and linear.
Formula qe_exists(const VarSet & vars, const Formula & f);

/// Dual of qe_exists via negation.
Formula qe_forall(const VarSet & vars, const Formula & f);

/// Recursively eliminates every quantifier in f (innermost first).
Formula eliminate_quantifiers(const Formula & f);

/// Syntactic cleanup: deduplicates atoms, merges proportional bounds,
/// drops subsumed disjuncts. Equivalence-preserving.
Formula simplify(const Formula & f);

/// True when a1 implies a2 by bound comparison on a shared linear part.
bool atom_implies(const Atom & a1, const Atom & a2);

} // namespace cyclomc

#endif
