/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_LOGIC_TRANSITION_SYSTEM_HPP
#define CYCLOMC_LOGIC_TRANSITION_SYSTEM_HPP

#include "logic/formula.hpp"
#include "logic/model.hpp"
#include "logic/ops.hpp"

#include <string>
#include <vector>

namespace cyclomc {

/// A linear CHC system with a single predicate variable:
///   init(x) => P(x),  P(x) /\ trans(x,x') => P(x'),  P(x) => assertion(x).
class TransitionSystem {
public:
    TransitionSystem(std::vector<Var> state_vars, Formula init, Formula trans, Formula assertion);

    const std::vector<Var> & state_vars() const { return state_vars_; }
    const std::vector<Var> & primed_vars() const { return primed_vars_; }
    const Formula & init() const { return init_; }
    const Formula & trans() const { return trans_; }
    const Formula & assertion() const { return assertion_; }

    /// f over state vars, rewritten over primed vars (or back).
    Formula prime(const Formula & f) const;
    Formula unprime(const Formula & f) const;
    /// f over state vars, rewritten over step-k vars.
    Formula at_step(const Formula & f, int k) const;
    /// trans with x at step k and x' at step k+1.
    Formula trans_step(int k) const;

    Model restrict_to_state(const Model & m, const std::vector<Var> & from) const;

private:
    std::vector<Var> state_vars_;
    std::vector<Var> primed_vars_;
    Formula init_;
    Formula trans_;
    Formula assertion_;
};

} // namespace cyclomc

#endif
