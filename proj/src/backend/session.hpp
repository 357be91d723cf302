/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_BACKEND_SESSION_HPP
#define CYCLOMC_BACKEND_SESSION_HPP

#include "logic/formula.hpp"
#include "logic/model.hpp"

#include <functional>
#include <memory>
#include <string>

namespace cyclomc {

struct SatResult {
    enum class Kind { Sat, Unsat, Unknown };
    Kind kind;
    Model model;         // total on the query's free variables when Sat
    std::string reason;  // Unknown only

    static SatResult sat(Model m) { return {Kind::Sat, std::move(m), {}}; }
    static SatResult unsat() { return {Kind::Unsat, {}, {}}; }
    static SatResult unknown(std::string why) { return {Kind::Unknown, {}, std::move(why)}; }

    bool is_sat() const { return kind == Kind::Sat; }
    bool is_unsat() const { return kind == Kind::Unsat; }
    bool is_unknown() const { return kind == Kind::Unknown; }
};

struct EntailmentResult {
    enum class Kind { Valid, Invalid, Unknown };
    Kind kind;
    Model counter_model; // model of lhs /\ not rhs when Invalid
    std::string reason;

    static EntailmentResult valid() { return {Kind::Valid, {}, {}}; }
    static EntailmentResult invalid(Model m) { return {Kind::Invalid, std::move(m), {}}; }
    static EntailmentResult unknown(std::string why) { return {Kind::Unknown, {}, std::move(why)}; }

    bool is_valid() const { return kind == Kind::Valid; }
    bool is_invalid() const { return kind == Kind::Invalid; }
    bool is_unknown() const { return kind == Kind::Unknown; }
};

/// Failure to talk to an external solver process; deliberately distinct
/// from an Unknown verdict.
class TransportError : public std::runtime_error {
public:
    explicit TransportError(const std::string & what) : std::runtime_error(what) {}
};

struct SessionStats {
    std::uint64_t sat_queries = 0;
    std::uint64_t entailment_queries = 0;
    double wall_seconds = 0.0;
};

/// One solver conversation. Queries are stateless with respect to each
/// other; a session is single-owner and must not be shared across threads.
class SolverSession {
public:
    virtual ~SolverSession() = default;

    /// f must be quantifier-free; Sat models are total on fv(f).
    virtual SatResult check_sat(const Formula & f) = 0;

    /// Valid iff lhs /\ not rhs is unsatisfiable. Quantified inputs are
    /// eliminated first; the Invalid witness refers to the eliminated form.
    EntailmentResult check_entailment(const Formula & lhs, const Formula & rhs);

    const SessionStats & stats() const { return stats_; }

protected:
    SessionStats stats_;
};

using SessionFactory = std::function<std::unique_ptr<SolverSession>()>;

/// The hermetic built-in engine (DNF + Fourier-Motzkin + branch & bound).
std::unique_ptr<SolverSession> make_internal_session();
SessionFactory internal_session_factory();

/// External SMT-LIB2 process client. timeout_ms <= 0 disables the deadline.
std::unique_ptr<SolverSession> make_smtlib2_session(const std::string & solver_path, long timeout_ms);
SessionFactory smtlib2_session_factory(std::string solver_path, long timeout_ms);

/// Honors the CYCLOMC_SOLVER environment variable (explicit path argument
/// wins); falls back to the internal engine.
SessionFactory default_session_factory(const std::string & solver_path = "", long timeout_ms = 0);

/// Wraps a factory so that the statistics of every session it creates are
/// accumulated into totals when the session is destroyed.
SessionFactory aggregated_factory(SessionFactory inner, std::shared_ptr<SessionStats> totals);

} // namespace cyclomc

#endif
