/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_LOGIC_OPS_HPP
#define CYCLOMC_LOGIC_OPS_HPP

#include "logic/formula.hpp"
#include "logic/model.hpp"

#include <map>

namespace cyclomc {

using Substitution = std::map<Var, LinTerm>;

VarSet free_vars(const Formula & f);

/// Capture-avoiding simultaneous substitution. Throws SortError when a
/// variable of Int sort is mapped to a term with Real variables or a
/// non-integral constant shape is irrelevant; only var sorts are checked.
Formula substitute(const Formula & f, const Substitution & sigma);

/// Renames variables; a thin wrapper over substitute.
Formula rename(const Formula & f, const std::map<Var, Var> & renaming);

/// Ground truth under exact rational arithmetic. Requires f quantifier-free
/// and fv(f) included in dom(m).
bool evaluate(const Formula & f, const Model & m);

/// Negation normal form: implications eliminated, negations pushed into
/// atoms, quantifiers preserved (and dualized under negation).
Formula nnf(const Formula & f);

class SortError : public std::runtime_error {
public:
    explicit SortError(const std::string & what) : std::runtime_error(what) {}
};

class EvalError : public std::runtime_error {
public:
    explicit EvalError(const std::string & what) : std::runtime_error(what) {}
};

} // namespace cyclomc

#endif
