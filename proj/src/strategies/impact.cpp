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

Formula unstep(const Formula & f) {
    std::map<Var, Var> ren;
    for (auto const & v : free_vars(f)) {
        if (v.tag == Var::Tag::Step) ren.emplace(v, v.plain());
    }
    return rename(f, ren);
}

std::vector<Model> pad_trace(const TransitionSystem & ts, std::vector<Model> trace) {
    for (auto & m : trace) m = detail::pad_state_model(ts, m);
    return trace;
}

/// Materializes the covering step: the chain 0..i as a proof, the leaf
/// covered by ancestor j, certificate extracted from the closed proof.
Certificate close_by_cover(SolverSession & session, const StrategyContext & ctx,
                           const std::vector<Formula> & phis, size_t cover_i) {
    CutSequence seq;
    seq.phis.assign(phis.begin(), phis.begin() + static_cast<long>(cover_i) + 1);
    auto proof = std::make_shared<PartialProof>(PartialProof::from_cut_sequence(ctx.ts, seq));
    proof->validate_side_conditions(session);
    std::vector<NodeId> leaves = proof->open_leaves();
    assert(leaves.size() == 1);
    PartialProof::LinkOutcome link = proof->try_link(session, leaves[0], ctx.wide_covering);
    if (link != PartialProof::LinkOutcome::Linked) {
        return Certificate::unknown("covering entailment did not re-validate");
    }
    if (!proof->all_side_conditions_valid()) {
        return Certificate::unknown("chain side conditions did not re-validate");
    }
    return proof->extract_certificate(session);
}

} // namespace

Certificate impact(const StrategyContext & ctx) {
    return detail::run_guarded([&]() -> Certificate {
        auto session = ctx.sessions();
        const TransitionSystem & ts = *ctx.ts;

        SatResult trivial = session->check_sat(mk_and(ts.init(), mk_not(ts.assertion())));
        if (trivial.is_unknown()) return Certificate::unknown(trivial.reason);
        if (trivial.is_sat()) {
            std::vector<Model> trace{detail::restrict_plain(ts, trivial.model)};
            assert(replay_trace(ts, trace));
            return Certificate::unsafe(std::move(trace));
        }

        std::vector<Formula> phis{ts.init()};
        long refinements = 0;

        while (static_cast<long>(phis.size()) <= ctx.budget.max_unrollings) {
            if (ctx.cancelled()) return Certificate::unknown("cancelled");
            // Optimistic expansion with the top cut.
            phis.push_back(mk_true());
            ++ctx.stats->unrollings;
            size_t n = phis.size() - 1;

            EntailmentResult leaf_ok = session->check_entailment(phis[n], ts.assertion());
            if (leaf_ok.is_unknown()) return Certificate::unknown(leaf_ok.reason);
            if (leaf_ok.is_invalid()) {
                if (++refinements > ctx.budget.max_refinements) {
                    return Certificate::unknown("refinement budget exhausted");
                }
                ++ctx.stats->refinements;
                ThetaSequence thetas = make_theta_sequence(ts, phis);
                SeqItpResult r;
                try {
                    r = seq_interpolant(*session, thetas, ctx.itp);
                } catch (const BackendUnknown & e) { return Certificate::unknown(e.what()); }
                if (auto * no = std::get_if<NoInterpolant>(&r)) {
                    std::vector<Model> trace = pad_trace(ts, std::move(no->trace));
                    assert(replay_trace(ts, trace));
                    return Certificate::unsafe(std::move(trace));
                }
                SeqInterpolant itp = std::get<SeqInterpolant>(std::move(r));
                std::string why;
                if (!validate_seq_interpolant(*session, thetas, itp, &why)) {
                    throw std::logic_error("internal soundness error: interpolant failed validation: " + why);
                }
                for (size_t i = 1; i <= n; ++i) {
                    phis[i] = simplify(mk_and(phis[i], unstep(itp.psis[i])));
                }
            }

            // Covering: the proof above phi_i collapses into a link when some
            // earlier cut already contains it.
            for (size_t i = 1; i < phis.size(); ++i) {
                for (size_t j = 0; j < i; ++j) {
                    EntailmentResult cover = session->check_entailment(phis[i], phis[j]);
                    if (cover.is_valid()) { return close_by_cover(*session, ctx, phis, i); }
                }
            }
        }
        return Certificate::unknown("unrolling budget exhausted");
    });
}

Certificate impact_mc(const StrategyContext & ctx, McrEngine engine) {
    return detail::run_guarded([&]() -> Certificate {
        auto session = ctx.sessions();
        const TransitionSystem & ts = *ctx.ts;

        SatResult trivial = session->check_sat(mk_and(ts.init(), mk_not(ts.assertion())));
        if (trivial.is_unknown()) return Certificate::unknown(trivial.reason);
        if (trivial.is_sat()) {
            std::vector<Model> trace{detail::restrict_plain(ts, trivial.model)};
            assert(replay_trace(ts, trace));
            return Certificate::unsafe(std::move(trace));
        }

        CutSequence seq;
        seq.phis = {ts.init()};
        long refinements = 0;

        while (static_cast<long>(seq.phis.size()) <= ctx.budget.max_unrollings) {
            if (ctx.cancelled()) return Certificate::unknown("cancelled");
            seq.phis.push_back(mk_true());
            ++ctx.stats->unrollings;
            size_t n = seq.phis.size() - 1;

            EntailmentResult leaf_ok = session->check_entailment(seq.phis[n], ts.assertion());
            if (leaf_ok.is_unknown()) return Certificate::unknown(leaf_ok.reason);
            if (leaf_ok.is_invalid()) {
                if (++refinements > ctx.budget.max_refinements) {
                    return Certificate::unknown("refinement budget exhausted");
                }
                ++ctx.stats->refinements;
                McrResult r;
                try {
                    switch (engine) {
                        case McrEngine::Naive: r = naive_mcr(*session, ts, seq, ctx.itp); break;
                        case McrEngine::Ind: r = ind_mcr(*session, ts, ts.assertion(), seq, ctx.itp); break;
                        case McrEngine::IndPdr:
                            r = ind_pdr(*session, ts, seq, ctx.select_model, ctx.budget.max_loop_iterations,
                                        ctx.itp);
                            break;
                        case McrEngine::IndPdrMbp:
                            r = ind_pdr_mbp(*session, ts, seq, MbpFlavor::LoosWeispfenning, ctx.select_model,
                                            ctx.budget.max_loop_iterations, ctx.itp);
                            break;
                    }
                } catch (const BackendUnknown & e) { return Certificate::unknown(e.what()); }
                if (auto * fail = std::get_if<McrFailure>(&r)) {
                    switch (fail->kind) {
                        case McrFailure::Kind::NoRefinement: {
                            std::vector<Model> trace = trace_from_thetas(*session, ts, n);
                            if (trace.empty()) return Certificate::unknown("refinement failure did not concretize");
                            std::vector<Model> padded = pad_trace(ts, std::move(trace));
                            assert(replay_trace(ts, padded));
                            return Certificate::unsafe(std::move(padded));
                        }
                        case McrFailure::Kind::Unknown: return Certificate::unknown(fail->reason);
                        case McrFailure::Kind::BudgetExhausted:
                            return Certificate::unknown("refinement engine exhausted its budget: " + fail->reason);
                    }
                }
                seq = std::get<CutSequence>(std::move(r));
            }

            for (size_t i = 1; i < seq.phis.size(); ++i) {
                for (size_t j = 0; j < i; ++j) {
                    EntailmentResult cover = session->check_entailment(seq.phis[i], seq.phis[j]);
                    if (cover.is_valid()) { return close_by_cover(*session, ctx, seq.phis, i); }
                }
            }
        }
        return Certificate::unknown("unrolling budget exhausted");
    });
}

} // namespace cyclomc
