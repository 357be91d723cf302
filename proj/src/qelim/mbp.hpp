/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_QELIM_MBP_HPP
#define CYCLOMC_QELIM_MBP_HPP

#include "logic/formula.hpp"
#include "logic/model.hpp"
#include "qelim/qelim.hpp"

namespace cyclomc {

class MbpError : public std::runtime_error {
public:
    explicit MbpError(const std::string & what) : std::runtime_error(what) {}
};

/// LoosWeispfenning: virtual-substitution projection with a finite image.
/// Substitution: plugs in the model values (infinite image).
/// Adversarial: the deliberately ill-behaved variant used by divergence
/// regressions; behaves like LoosWeispfenning except on negative-extremum
/// models, where it returns the single point x = M(x).
enum class MbpFlavor { LoosWeispfenning, Substitution, Adversarial };

/// Model-based projection of vars from f under model m (requires m |= f).
/// The result psi satisfies m |= psi and psi |= exists vars. f.
Formula mbp(MbpFlavor flavor, const Formula & f, const VarSet & vars, const Model & m);

/// The conjunction of literals of f (in NNF) that m satisfies; implies f.
Cube select_implicant(const Formula & f, const Model & m);

} // namespace cyclomc

#endif
