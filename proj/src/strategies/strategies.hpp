/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_STRATEGIES_STRATEGIES_HPP
#define CYCLOMC_STRATEGIES_STRATEGIES_HPP

#include "backend/session.hpp"
#include "interpolate/interpolate.hpp"
#include "logic/transition_system.hpp"
#include "proof/proof.hpp"
#include "qelim/mbp.hpp"

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cyclomc {

/// Resource limits; exhaustion yields an Unknown certificate, never a
/// wrong verdict.
struct StrategyBudget {
    long max_unrollings = 64;
    long max_refinements = 256;
    long max_loop_iterations = 10000;
    long query_timeout_ms = 0;
};

/// Pinned source for every free model choice a strategy makes: given the
/// query formula, produce a model of it or nothing when unsatisfiable. The
/// default draws the backend's deterministic model; tests install
/// adversarial schedules.
using ModelSelector =
    std::function<std::optional<Model>(SolverSession &, const Formula &)>;

ModelSelector backend_model_selector();

/// Counters the strategies report back (distinct from backend statistics).
struct StrategyStats {
    std::atomic<long> refinements{0};
    std::atomic<long> unrollings{0};
};

struct StrategyContext {
    std::shared_ptr<const TransitionSystem> ts;
    std::shared_ptr<StrategyStats> stats = std::make_shared<StrategyStats>();
    SessionFactory sessions = internal_session_factory();
    StrategyBudget budget;
    ItpStrength itp = ItpStrength::Generalized;
    bool wide_covering = false;
    bool pdr_induction_rule = false;
    bool check_invariants = true;
    std::uint64_t seed = 0;
    ModelSelector select_model = backend_model_selector();
    std::shared_ptr<std::atomic_bool> cancel;

    bool cancelled() const { return cancel && cancel->load(); }
};

// Bounded model checking: the (SE) chain of depth k with one assertion
// side condition per level.
Certificate bmc(const StrategyContext & ctx, long k);

// BMC plus the distance-k emptiness test; closes the proof with
// (Cut)+(OrSplit) links when the frontier is exhausted.
Certificate forward_criterion(const StrategyContext & ctx, long k);

// (SE+Cut) with the strongest conjunction of entailed candidate predicates.
Certificate predicate_abstraction(const StrategyContext & ctx, const std::vector<Formula> & predicates);

// Lazy abstraction with interpolants: optimistic top cuts, sequence
// interpolation on failure, covering by entailment into an ancestor.
Certificate impact(const StrategyContext & ctx);

// Maximally conservative refinement engines.
enum class McrEngine { Naive, Ind, IndPdr, IndPdrMbp };

struct McrFailure {
    enum class Kind { NoRefinement, Unknown, BudgetExhausted } kind;
    std::string reason;
};

using McrResult = std::variant<CutSequence, McrFailure>;

McrResult naive_mcr(SolverSession & session, const TransitionSystem & ts, const CutSequence & phis,
                    ItpStrength strength = ItpStrength::Generalized);

McrResult ind_mcr(SolverSession & session, const TransitionSystem & ts, const Formula & assertion,
                  const CutSequence & phis, ItpStrength strength = ItpStrength::Generalized);

McrResult ind_pdr(SolverSession & session, const TransitionSystem & ts, const CutSequence & phis,
                  const ModelSelector & select, long max_iterations,
                  ItpStrength strength = ItpStrength::Generalized);

// primed_variant switches to the ill-posed projection target (the formula
// including the mutable frame) used only by divergence regressions.
McrResult ind_pdr_mbp(SolverSession & session, const TransitionSystem & ts, const CutSequence & phis,
                      MbpFlavor flavor, const ModelSelector & select, long max_iterations,
                      ItpStrength strength = ItpStrength::Generalized, bool primed_variant = false);

// IMPACT with the refinement step replaced by a maximally conservative
// refinement engine.
Certificate impact_mc(const StrategyContext & ctx, McrEngine engine);

// Per-level loop iteration counts of the last ind_pdr/ind_pdr_mbp style
// run, exposed for the termination-bound tests.
struct McrRunStats {
    std::vector<long> loop_iterations_per_level;
};
const McrRunStats & last_mcr_run_stats();

// F_j = phi_0 \/ ... \/ phi_j, built syntactically.
std::vector<Formula> frames(const CutSequence & phis);

// Simplified PDR as a transition system over frames.
Certificate spdr(const StrategyContext & ctx);

// Serializable transition logs (one record per line).
struct LogEntry {
    size_t step = 0;
    std::string rule;
    std::vector<Model> cexs;       // low level first
    std::vector<Formula> formulas; // cut formulas or frames
};

struct TransitionLog {
    std::vector<LogEntry> entries;
    std::string serialize(const TransitionSystem & ts) const;
    static TransitionLog deserialize(const TransitionSystem & ts, const std::string & text);
};

struct BisimOutcome {
    enum class Kind { Pass, Divergence, Inconclusive } kind = Kind::Pass;
    size_t step = 0;
    std::string reason;

    bool pass() const { return kind == Kind::Pass; }
};

/// Step-by-step verification that two transition logs stay in the
/// frames-vs-cuts correspondence (same rules, same counterexamples, and
/// F_j equivalent to the prefix disjunction at every level).
BisimOutcome bisim_check(SolverSession & session, const TransitionLog & cut_log,
                         const TransitionLog & frame_log);

struct LockstepResult {
    TransitionLog cut_log;
    TransitionLog frame_log;
    Certificate verdict;
    BisimOutcome relation;
};

/// Runs the cut-sequence engine and the frames engine in lockstep with a
/// shared model stream, checking the correspondence after every step.
LockstepResult run_lockstep(const StrategyContext & ctx);

// Backward bounded model checking via weakest preconditions.
Certificate back_bmc(const StrategyContext & ctx, long k);

// Races strategies on clones of the input; first decisive verdict wins.
Certificate portfolio(const StrategyContext & ctx);

} // namespace cyclomc

#endif
