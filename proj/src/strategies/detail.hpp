/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_STRATEGIES_DETAIL_HPP
#define CYCLOMC_STRATEGIES_DETAIL_HPP

#include "qelim/qelim.hpp"
#include "strategies/strategies.hpp"

namespace cyclomc::detail {

/// Formula-size caps and inconclusive backends surface as Unknown verdicts,
/// never as exceptions or wrong answers.
template <typename Fn> Certificate run_guarded(Fn && fn) {
    try {
        return fn();
    } catch (const QelimError & e) {
        return Certificate::unknown(e.what());
    } catch (const BackendUnknown & e) { return Certificate::unknown(e.what()); }
}

/// Totalizes a model over the state variables (missing entries default 0).
Model pad_state_model(const TransitionSystem & ts, const Model & m);

/// Model restricted to the plain state variables.
Model restrict_plain(const TransitionSystem & ts, const Model & m);

/// Model of the primed variables rewritten onto the plain ones.
Model unprime_model(const TransitionSystem & ts, const Model & m);

/// trans with the plain (current-state) variables fixed to m.
Formula trans_from(const TransitionSystem & ts, const Model & m);

/// trans with the primed (next-state) variables fixed to m.
Formula trans_into(const TransitionSystem & ts, const Model & m);

/// Concretizes an Unsafe verdict found at depth `depth` (a model of
/// phis-constrained images violating the assertion) into a replayable
/// trace by stepping backwards through the image chain; falls back to a
/// fresh unrolled query when a backward step fails.
std::vector<Model> backward_trace(SolverSession & session, const TransitionSystem & ts,
                                  const std::vector<Formula> & images, size_t depth, const Model & bad);

} // namespace cyclomc::detail

#endif
