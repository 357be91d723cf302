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

namespace detail {

Model pad_state_model(const TransitionSystem & ts, const Model & m) {
    Model out;
    for (auto const & v : ts.state_vars()) out.set(v, m.has(v) ? m.at(v) : Rational(0));
    return out;
}

Model restrict_plain(const TransitionSystem & ts, const Model & m) {
    Model out;
    for (auto const & v : ts.state_vars())
        if (m.has(v)) out.set(v, m.at(v));
    return pad_state_model(ts, out);
}

Model unprime_model(const TransitionSystem & ts, const Model & m) {
    Model out;
    for (size_t i = 0; i < ts.state_vars().size(); ++i) {
        const Var & p = ts.primed_vars()[i];
        if (m.has(p)) out.set(ts.state_vars()[i], m.at(p));
    }
    return pad_state_model(ts, out);
}

Formula trans_from(const TransitionSystem & ts, const Model & m) {
    Substitution sub;
    for (auto const & v : ts.state_vars()) sub.emplace(v, LinTerm::constant(m.at(v)));
    return substitute(ts.trans(), sub);
}

Formula trans_into(const TransitionSystem & ts, const Model & m) {
    Substitution sub;
    for (size_t i = 0; i < ts.state_vars().size(); ++i) {
        sub.emplace(ts.primed_vars()[i], LinTerm::constant(m.at(ts.state_vars()[i])));
    }
    return substitute(ts.trans(), sub);
}

std::vector<Model> backward_trace(SolverSession & session, const TransitionSystem & ts,
                                  const std::vector<Formula> & images, size_t depth, const Model & bad) {
    std::vector<Model> rev{pad_state_model(ts, bad)};
    bool ok = true;
    for (size_t i = depth; i-- > 0;) {
        Formula step = mk_and(images[i], trans_into(ts, rev.back()));
        SatResult r = session.check_sat(step);
        if (!r.is_sat()) {
            ok = false;
            break;
        }
        rev.push_back(restrict_plain(ts, r.model));
    }
    if (ok) {
        std::vector<Model> trace(rev.rbegin(), rev.rend());
        if (replay_trace(ts, trace)) return trace;
    }
    // Rational-image corner: concretize through a fresh unrolled query.
    return trace_from_thetas(session, ts, depth);
}

} // namespace detail

Certificate bmc(const StrategyContext & ctx, long k) {
    return detail::run_guarded([&]() -> Certificate {
        if (k < 0) throw std::invalid_argument("bmc: negative bound");
        auto session = ctx.sessions();
        auto proof = std::make_shared<PartialProof>(ctx.ts, ctx.ts->init());
        std::vector<Formula> images{ctx.ts->init()};
        NodeId cur = proof->root();

        for (long depth = 0; depth <= k; ++depth) {
            if (ctx.cancelled()) return Certificate::unknown("cancelled");
            NodeId child = proof->apply_se(*session, cur);
            const SideCondition & sc = proof->node(cur).side_conditions.back();
            if (sc.status == SideCondition::Status::Invalid) {
                EntailmentResult e = session->check_entailment(images[depth], ctx.ts->assertion());
                if (e.is_invalid()) {
                    std::vector<Model> trace = detail::backward_trace(
                        *session, *ctx.ts, images, static_cast<size_t>(depth),
                        detail::pad_state_model(*ctx.ts, e.counter_model));
                    if (!trace.empty()) {
                        assert(replay_trace(*ctx.ts, trace));
                        return Certificate::unsafe(std::move(trace));
                    }
                }
                // The violation did not concretize (relaxation corner); the
                // side condition stays recorded and the search continues.
            } else if (sc.status == SideCondition::Status::Unchecked) {
                return Certificate::unknown("backend inconclusive at depth " + std::to_string(depth));
            }
            images.push_back(proof->node(child).sequent.lhs);
            cur = child;
        }
        return proof->extract_certificate(*session);
    });
}

Certificate forward_criterion(const StrategyContext & ctx, long k) {
    return detail::run_guarded([&]() -> Certificate {
        auto session = ctx.sessions();
        auto proof = std::make_shared<PartialProof>(ctx.ts, ctx.ts->init());
        std::vector<Formula> images{ctx.ts->init()};
        std::vector<NodeId> chain{proof->root()};

        for (long depth = 0; depth <= k; ++depth) {
            if (ctx.cancelled()) return Certificate::unknown("cancelled");
            // Distance-`depth` residue: the frontier minus everything seen.
            std::vector<Formula> parts{images[depth]};
            for (long i = 0; i < depth; ++i) parts.push_back(mk_not(images[i]));
            SatResult residue = session->check_sat(mk_and(std::move(parts)));
            if (residue.is_unknown()) return Certificate::unknown(residue.reason);
            if (residue.is_unsat()) {
                std::vector<NodeId> companions(chain.begin(), chain.end() - 1);
                proof->close_by_disjunction(*session, chain.back(), companions);
                if (!proof->all_side_conditions_valid()) {
                    return Certificate::unknown("forward criterion closed an invalid proof");
                }
                if (!proof->check_global_trace().empty()) {
                    throw std::logic_error("forward criterion produced a trace-condition violation");
                }
                return proof->extract_certificate(*session);
            }
            NodeId child = proof->apply_se(*session, chain.back());
            const SideCondition & sc = proof->node(chain.back()).side_conditions.back();
            if (sc.status == SideCondition::Status::Invalid) {
                EntailmentResult e = session->check_entailment(images[depth], ctx.ts->assertion());
                if (e.is_invalid()) {
                    std::vector<Model> trace = detail::backward_trace(
                        *session, *ctx.ts, images, static_cast<size_t>(depth),
                        detail::pad_state_model(*ctx.ts, e.counter_model));
                    if (!trace.empty()) {
                        assert(replay_trace(*ctx.ts, trace));
                        return Certificate::unsafe(std::move(trace));
                    }
                }
            } else if (sc.status == SideCondition::Status::Unchecked) {
                return Certificate::unknown("backend inconclusive at depth " + std::to_string(depth));
            }
            images.push_back(proof->node(child).sequent.lhs);
            chain.push_back(child);
        }
        return proof->extract_certificate(*session);
    });
}

Certificate back_bmc(const StrategyContext & ctx, long k) {
    return detail::run_guarded([&]() -> Certificate {
        if (k < 0) throw std::invalid_argument("back_bmc: negative bound");
        auto session = ctx.sessions();
        const TransitionSystem & ts = *ctx.ts;

        // The weakest precondition of safety, iterated backwards from the
        // assertion, kept in complemented form: bad[i] is not(safe within i),
        // i.e. not alpha or (exists y. trans /\ bad[i-1](y)). Keeping the
        // complement avoids re-normalizing a negation at every level.
        std::vector<Formula> bad{simplify(nnf(mk_not(ts.assertion())))};
        VarSet primed(ts.primed_vars().begin(), ts.primed_vars().end());
        for (long i = 1; i <= k; ++i) {
            Formula pre = qe_exists(primed, mk_and(ts.trans(), ts.prime(bad.back())));
            bad.push_back(simplify(mk_or(bad[0], pre)));
        }

        for (long i = 0; i <= k; ++i) {
            if (ctx.cancelled()) return Certificate::unknown("cancelled");
            // init |= safe_within_i fails exactly when init /\ bad[i] holds.
            SatResult hit = session->check_sat(mk_and(ts.init(), bad[i]));
            if (hit.is_unknown()) return Certificate::unknown(hit.reason);
            if (hit.is_sat()) {
                // A violation within i steps starting at the witness.
                std::vector<Model> trace{detail::restrict_plain(ts, hit.model)};
                long remaining = i;
                while (evaluate(ts.assertion(), trace.back()) && remaining > 0) {
                    Formula step =
                        mk_and(detail::trans_from(ts, trace.back()), ts.prime(bad[remaining - 1]));
                    SatResult r = session->check_sat(step);
                    if (!r.is_sat()) break;
                    trace.push_back(detail::unprime_model(ts, r.model));
                    --remaining;
                }
                if (replay_trace(ts, trace)) return Certificate::unsafe(std::move(trace));
                std::vector<Model> redo = trace_from_thetas(*session, ts, static_cast<size_t>(i));
                if (!redo.empty()) return Certificate::unsafe(std::move(redo));
                return Certificate::unknown("backward witness did not concretize");
            }
        }
        return Certificate::bounded(k);
    });
}

ModelSelector backend_model_selector() {
    return [](SolverSession & session, const Formula & query) -> std::optional<Model> {
        SatResult r = session.check_sat(query);
        if (r.is_unknown()) throw BackendUnknown(r.reason);
        if (r.is_unsat()) return std::nullopt;
        return std::move(r.model);
    };
}

} // namespace cyclomc
