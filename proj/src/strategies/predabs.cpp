/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "strategies/detail.hpp"

#include "logic/ops.hpp"
#include "qelim/qelim.hpp"

#include <cassert>
#include <sstream>

namespace cyclomc {

Certificate predicate_abstraction(const StrategyContext & ctx, const std::vector<Formula> & predicates) {
    return detail::run_guarded([&]() -> Certificate {
        auto session = ctx.sessions();
        const TransitionSystem & ts = *ctx.ts;

        SatResult root = session->check_sat(mk_and(ts.init(), mk_not(ts.assertion())));
        if (root.is_unknown()) return Certificate::unknown(root.reason);
        if (root.is_sat()) {
            std::vector<Model> trace{detail::restrict_plain(ts, root.model)};
            assert(replay_trace(ts, trace));
            return Certificate::unsafe(std::move(trace));
        }

        auto proof = std::make_shared<PartialProof>(ctx.ts, ts.init());
        std::vector<NodeId> chain{proof->root()};

        // The abstract chain revisits a cut formula after at most as many
        // steps as there are distinct candidate conjunctions.
        long limit = std::max(ctx.budget.max_unrollings,
                              predicates.size() < 16 ? (1L << predicates.size()) + 1 : ctx.budget.max_unrollings);
        for (long step = 0; step < limit; ++step) {
            if (ctx.cancelled()) return Certificate::unknown("cancelled");
            NodeId leaf = chain.back();
            const Formula & phi = proof->node(leaf).sequent.lhs;

            // Strongest candidate: conjunction of every predicate the exact
            // one-step image entails.
            std::vector<Formula> entailed;
            for (auto const & xi : predicates) {
                EntailmentResult e = session->check_entailment(mk_and(phi, ts.trans()), ts.prime(xi));
                if (e.is_unknown()) return Certificate::unknown(e.reason);
                if (e.is_valid()) entailed.push_back(xi);
            }
            Formula cut = simplify(mk_and(std::move(entailed)));

            NodeId child = proof->apply_se_cut(*session, leaf, cut);
            for (auto const & sc : proof->node(leaf).side_conditions) {
                if (sc.status == SideCondition::Status::Invalid) {
                    std::ostringstream os;
                    os << "abstract path reaches a state set outside the assertion:";
                    for (NodeId id : chain) os << " " << to_string(proof->node(id).sequent.lhs) << " ->";
                    os << " " << to_string(cut);
                    return Certificate::unknown(os.str());
                }
                if (sc.status == SideCondition::Status::Unchecked) {
                    return Certificate::unknown("backend inconclusive during abstraction");
                }
            }

            // Repeated cut formula: cover the new leaf by its ancestor.
            bool repeated = false;
            for (NodeId id : chain) {
                if (equal(proof->node(id).sequent.lhs, cut)) {
                    repeated = true;
                    break;
                }
            }
            chain.push_back(child);
            if (repeated) {
                PartialProof::LinkOutcome link = proof->try_link(*session, child, ctx.wide_covering);
                if (link == PartialProof::LinkOutcome::Linked) {
                    return proof->extract_certificate(*session);
                }
                return Certificate::unknown("repeated abstract state failed to cover");
            }
        }
        return Certificate::unknown("predicate abstraction budget exhausted");
    });
}

} // namespace cyclomc
