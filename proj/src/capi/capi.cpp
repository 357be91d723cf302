/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "cyclomc.h"

#include "front/problem.hpp"
#include "strategies/strategies.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

using namespace cyclomc;

namespace {

char * dup_string(const std::string & s) {
    char * out = static_cast<char *>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void set_error(char ** error, const std::string & message) {
    if (error) *error = dup_string(message);
}

} // namespace

struct cyclomc_problem {
    ProblemFile file;
};

struct cyclomc_options {
    std::string strategy = "portfolio";
    std::string engine = "naive";
    long bound = 16;
    StrategyBudget budget;
    std::uint64_t seed = 0;
    std::string solver;
    ItpStrength itp = ItpStrength::Generalized;
    std::string predicates_text;
};

struct cyclomc_result {
    Certificate certificate;
    std::string invariant_text;
    std::string reason_text;
    std::vector<std::string> trace_states;
    std::string dot_text;
    std::string stats_text;
    std::string note_text;
};

const char * cyclomc_version(void) { return "0.1.0"; }

void cyclomc_string_free(char * s) { std::free(s); }

cyclomc_status cyclomc_problem_from_string(const char * text, cyclomc_problem ** out, char ** error) {
    if (!text || !out) return CYCLOMC_ERR_INVALID_ARGUMENT;
    *out = nullptr;
    try {
        auto p = new cyclomc_problem{parse_problem(text)};
        *out = p;
        return CYCLOMC_OK;
    } catch (const ProblemError & e) {
        set_error(error, e.what());
        return CYCLOMC_ERR_PARSE;
    } catch (const std::exception & e) {
        set_error(error, e.what());
        return CYCLOMC_ERR_INTERNAL;
    }
}

cyclomc_status cyclomc_problem_from_file(const char * path, cyclomc_problem ** out, char ** error) {
    if (!path || !out) return CYCLOMC_ERR_INVALID_ARGUMENT;
    std::ifstream in(path);
    if (!in) {
        set_error(error, std::string("cannot open ") + path);
        return CYCLOMC_ERR_PARSE;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return cyclomc_problem_from_string(buf.str().c_str(), out, error);
}

void cyclomc_problem_free(cyclomc_problem * p) { delete p; }

cyclomc_status cyclomc_problem_print(const cyclomc_problem * p, char ** out) {
    if (!p || !out) return CYCLOMC_ERR_INVALID_ARGUMENT;
    *out = dup_string(print_problem(p->file));
    return CYCLOMC_OK;
}

int cyclomc_problem_expectation(const cyclomc_problem * p, int * expected_safe) {
    if (!p || !p->file.expect_safe) return 0;
    if (expected_safe) *expected_safe = *p->file.expect_safe ? 1 : 0;
    return 1;
}

cyclomc_options * cyclomc_options_new(void) { return new cyclomc_options(); }
void cyclomc_options_free(cyclomc_options * o) { delete o; }

cyclomc_status cyclomc_options_set_strategy(cyclomc_options * o, const char * strategy) {
    if (!o || !strategy) return CYCLOMC_ERR_INVALID_ARGUMENT;
    static const char * known[] = {"bmc",       "forward", "predabs",  "impact",
                                   "impact-mc", "spdr",    "back-bmc", "portfolio"};
    for (auto * k : known) {
        if (std::strcmp(strategy, k) == 0) {
            o->strategy = strategy;
            return CYCLOMC_OK;
        }
    }
    return CYCLOMC_ERR_INVALID_ARGUMENT;
}

cyclomc_status cyclomc_options_set_engine(cyclomc_options * o, const char * engine) {
    if (!o || !engine) return CYCLOMC_ERR_INVALID_ARGUMENT;
    static const char * known[] = {"naive", "ind", "indpdr", "indpdr-mbp"};
    for (auto * k : known) {
        if (std::strcmp(engine, k) == 0) {
            o->engine = engine;
            return CYCLOMC_OK;
        }
    }
    return CYCLOMC_ERR_INVALID_ARGUMENT;
}

cyclomc_status cyclomc_options_set_bound(cyclomc_options * o, long bound) {
    if (!o || bound < 0) return CYCLOMC_ERR_INVALID_ARGUMENT;
    o->bound = bound;
    return CYCLOMC_OK;
}

cyclomc_status cyclomc_options_set_seed(cyclomc_options * o, uint64_t seed) {
    if (!o) return CYCLOMC_ERR_INVALID_ARGUMENT;
    o->seed = seed;
    return CYCLOMC_OK;
}

cyclomc_status cyclomc_options_set_solver(cyclomc_options * o, const char * solver_command) {
    if (!o) return CYCLOMC_ERR_INVALID_ARGUMENT;
    o->solver = solver_command ? solver_command : "";
    return CYCLOMC_OK;
}

cyclomc_status cyclomc_options_set_interpolant_strength(cyclomc_options * o, const char * strength) {
    if (!o || !strength) return CYCLOMC_ERR_INVALID_ARGUMENT;
    if (std::strcmp(strength, "strongest") == 0) {
        o->itp = ItpStrength::Strongest;
        return CYCLOMC_OK;
    }
    if (std::strcmp(strength, "weakest") == 0) {
        o->itp = ItpStrength::Weakest;
        return CYCLOMC_OK;
    }
    if (std::strcmp(strength, "general") == 0) {
        o->itp = ItpStrength::Generalized;
        return CYCLOMC_OK;
    }
    return CYCLOMC_ERR_INVALID_ARGUMENT;
}

cyclomc_status cyclomc_options_set_budget(cyclomc_options * o, long max_unrollings, long max_refinements,
                                          long max_loop_iterations, long query_timeout_ms) {
    if (!o || max_unrollings <= 0 || max_refinements <= 0 || max_loop_iterations <= 0 ||
        query_timeout_ms < 0) {
        return CYCLOMC_ERR_INVALID_ARGUMENT;
    }
    o->budget = {max_unrollings, max_refinements, max_loop_iterations, query_timeout_ms};
    return CYCLOMC_OK;
}

cyclomc_status cyclomc_options_set_predicates(cyclomc_options * o, const char * text) {
    if (!o || !text) return CYCLOMC_ERR_INVALID_ARGUMENT;
    o->predicates_text = text;
    return CYCLOMC_OK;
}

namespace {

std::string render_state(const TransitionSystem & ts, const Model & m) {
    std::ostringstream os;
    bool first = true;
    for (auto const & v : ts.state_vars()) {
        if (!first) os << " ";
        os << "(" << v.str() << " " << print_rational_sexpr(m.at(v)) << ")";
        first = false;
    }
    return os.str();
}

} // namespace

cyclomc_status cyclomc_run(const cyclomc_problem * p, const cyclomc_options * o, cyclomc_result ** out,
                           char ** error) {
    if (!p || !o || !out) return CYCLOMC_ERR_INVALID_ARGUMENT;
    *out = nullptr;

    auto totals = std::make_shared<SessionStats>();
    StrategyContext ctx;
    ctx.ts = p->file.system;
    ctx.sessions =
        aggregated_factory(default_session_factory(o->solver, o->budget.query_timeout_ms), totals);
    ctx.budget = o->budget;
    ctx.itp = o->itp;
    ctx.seed = o->seed;

    try {
        Certificate cert;
        if (o->strategy == "bmc") {
            cert = bmc(ctx, o->bound);
        } else if (o->strategy == "forward") {
            cert = forward_criterion(ctx, o->bound);
        } else if (o->strategy == "predabs") {
            VarScope scope = scope_of(*ctx.ts, false);
            std::vector<Formula> preds = parse_formula_lines(o->predicates_text, scope);
            cert = predicate_abstraction(ctx, preds);
        } else if (o->strategy == "impact") {
            cert = impact(ctx);
        } else if (o->strategy == "impact-mc") {
            McrEngine engine = McrEngine::Naive;
            if (o->engine == "ind") engine = McrEngine::Ind;
            if (o->engine == "indpdr") engine = McrEngine::IndPdr;
            if (o->engine == "indpdr-mbp") engine = McrEngine::IndPdrMbp;
            cert = impact_mc(ctx, engine);
        } else if (o->strategy == "spdr") {
            cert = spdr(ctx);
        } else if (o->strategy == "back-bmc") {
            cert = back_bmc(ctx, o->bound);
        } else {
            cert = portfolio(ctx);
        }

        // Certificates are re-validated before they are surfaced.
        {
            auto session = ctx.sessions();
            std::string why;
            if (!verify_certificate(*session, *ctx.ts, cert, &why)) {
                set_error(error, "certificate failed re-validation: " + why);
                return CYCLOMC_ERR_INTERNAL;
            }
        }

        auto * r = new cyclomc_result();
        r->certificate = cert;
        if (cert.kind == Certificate::Kind::Safe) r->invariant_text = print_formula(cert.invariant);
        if (cert.kind == Certificate::Kind::Unknown) r->reason_text = cert.reason;
        for (auto const & m : cert.trace) r->trace_states.push_back(render_state(*ctx.ts, m));
        if (cert.proof) r->dot_text = cert.proof->export_dot();
        {
            std::ostringstream st;
            st << "queries=" << totals->sat_queries << " entailments=" << totals->entailment_queries
               << " refinements=" << ctx.stats->refinements.load()
               << " wall_ms=" << static_cast<long>(totals->wall_seconds * 1000);
            r->stats_text = st.str();
        }
        for (auto const & v : ctx.ts->state_vars()) {
            if (v.sort == Sort::Int) {
                r->note_text = "integer variables are projected over the rationals "
                               "(rational relaxation) wherever quantifier elimination or "
                               "model-based projection is involved";
                break;
            }
        }
        *out = r;
        return CYCLOMC_OK;
    } catch (const TransportError & e) {
        set_error(error, e.what());
        return CYCLOMC_ERR_SOLVER;
    } catch (const ProblemError & e) {
        set_error(error, e.what());
        return CYCLOMC_ERR_PARSE;
    } catch (const std::exception & e) {
        set_error(error, e.what());
        return CYCLOMC_ERR_INTERNAL;
    }
}

cyclomc_verdict cyclomc_result_verdict(const cyclomc_result * r) {
    switch (r->certificate.kind) {
        case Certificate::Kind::Safe: return CYCLOMC_VERDICT_SAFE;
        case Certificate::Kind::Unsafe: return CYCLOMC_VERDICT_UNSAFE;
        case Certificate::Kind::BoundedSafe: return CYCLOMC_VERDICT_BOUNDED_SAFE;
        case Certificate::Kind::Unknown: return CYCLOMC_VERDICT_UNKNOWN;
    }
    return CYCLOMC_VERDICT_UNKNOWN;
}

long cyclomc_result_bound(const cyclomc_result * r) { return r->certificate.bound; }

const char * cyclomc_result_invariant(const cyclomc_result * r) {
    return r->certificate.kind == Certificate::Kind::Safe ? r->invariant_text.c_str() : nullptr;
}

const char * cyclomc_result_reason(const cyclomc_result * r) {
    return r->certificate.kind == Certificate::Kind::Unknown ? r->reason_text.c_str() : nullptr;
}

size_t cyclomc_result_trace_length(const cyclomc_result * r) { return r->trace_states.size(); }

const char * cyclomc_result_trace_state(const cyclomc_result * r, size_t index) {
    if (index >= r->trace_states.size()) return nullptr;
    return r->trace_states[index].c_str();
}

const char * cyclomc_result_proof_dot(const cyclomc_result * r) {
    return r->dot_text.empty() ? nullptr : r->dot_text.c_str();
}

const char * cyclomc_result_stats(const cyclomc_result * r) { return r->stats_text.c_str(); }

const char * cyclomc_result_note(const cyclomc_result * r) {
    return r->note_text.empty() ? nullptr : r->note_text.c_str();
}

void cyclomc_result_free(cyclomc_result * r) { delete r; }
