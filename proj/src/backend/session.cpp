/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "backend/session.hpp"

#include "logic/ops.hpp"
#include "qelim/qelim.hpp"

#include <cassert>
#include <cstdlib>

namespace cyclomc {

EntailmentResult SolverSession::check_entailment(const Formula & lhs, const Formula & rhs) {
    ++stats_.entailment_queries;
    Formula query = mk_and(lhs, mk_not(rhs));
    if (!is_quantifier_free(query)) { query = eliminate_quantifiers(query); }
    SatResult r = check_sat(query);
    switch (r.kind) {
        case SatResult::Kind::Unsat: return EntailmentResult::valid();
        case SatResult::Kind::Sat:
            assert(evaluate(query, r.model));
            return EntailmentResult::invalid(std::move(r.model));
        case SatResult::Kind::Unknown: return EntailmentResult::unknown(std::move(r.reason));
    }
    throw std::logic_error("bad SatResult kind");
}

SessionFactory internal_session_factory() {
    return [] { return make_internal_session(); };
}

SessionFactory smtlib2_session_factory(std::string solver_path, long timeout_ms) {
    return [solver_path = std::move(solver_path), timeout_ms] {
        return make_smtlib2_session(solver_path, timeout_ms);
    };
}

SessionFactory default_session_factory(const std::string & solver_path, long timeout_ms) {
    std::string path = solver_path;
    if (path.empty()) {
        if (const char * env = std::getenv("CYCLOMC_SOLVER")) path = env;
    }
    if (path.empty()) return internal_session_factory();
    return smtlib2_session_factory(path, timeout_ms);
}

namespace {

class AggregatingSession final : public SolverSession {
public:
    AggregatingSession(std::unique_ptr<SolverSession> inner, std::shared_ptr<SessionStats> totals)
        : inner_(std::move(inner)), totals_(std::move(totals)) {}

    ~AggregatingSession() override {
        const SessionStats & s = inner_->stats();
        totals_->sat_queries += s.sat_queries;
        totals_->entailment_queries += stats_.entailment_queries;
        totals_->wall_seconds += s.wall_seconds;
    }

    SatResult check_sat(const Formula & f) override { return inner_->check_sat(f); }

private:
    std::unique_ptr<SolverSession> inner_;
    std::shared_ptr<SessionStats> totals_;
};

} // namespace

SessionFactory aggregated_factory(SessionFactory inner, std::shared_ptr<SessionStats> totals) {
    return [inner = std::move(inner), totals = std::move(totals)] {
        return std::make_unique<AggregatingSession>(inner(), totals);
    };
}

} // namespace cyclomc
