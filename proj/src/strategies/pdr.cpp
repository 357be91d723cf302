/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "strategies/detail.hpp"

#include "front/problem.hpp"
#include "logic/ops.hpp"
#include "qelim/qelim.hpp"

#include <cassert>
#include <sstream>

namespace cyclomc {

std::vector<Formula> frames(const CutSequence & phis) {
    std::vector<Formula> out;
    std::vector<Formula> acc;
    for (auto const & phi : phis.phis) {
        acc.push_back(phi);
        out.push_back(mk_or(acc));
    }
    return out;
}

namespace {

Formula point_formula(const TransitionSystem & ts, const Model & c) {
    std::vector<Formula> eqs;
    for (auto const & v : ts.state_vars()) {
        eqs.push_back(mk_atom(LinTerm(v), Rel::Eq, LinTerm::constant(c.at(v))));
    }
    return mk_and(std::move(eqs));
}

Formula blocking_constraint(const TransitionSystem & ts, const Model & c) {
    return nnf(mk_not(point_formula(ts, c)));
}

Formula halfspace_for(SolverSession & session, const TransitionSystem & ts, const Formula & region,
                      const Model & c) {
    for (auto const & v : ts.state_vars()) {
        for (Rel side : {Rel::Gt, Rel::Lt}) {
            Formula hs = mk_atom(LinTerm(v), side, LinTerm::constant(c.at(v)));
            if (is_false(hs) || is_true(hs)) continue;
            if (session.check_entailment(region, hs).is_valid()) return hs;
        }
    }
    return nullptr;
}

/// A formula entailed by `from` that excludes the point c; prefers one
/// half-space (or one per disjunct) over the exact region.
Formula generalize_conflict(SolverSession & session, const TransitionSystem & ts, const Formula & from,
                            const Model & c) {
    // An empty image blocks everything; half-space search would pick an
    // arbitrary side through ex falso.
    if (session.check_sat(from).is_unsat()) return mk_false();
    Formula blocked = blocking_constraint(ts, c);
    if (Formula hs = halfspace_for(session, ts, from, c)) return hs;
    if (from->kind == Conn::Or) {
        std::vector<Formula> parts;
        bool ok = true;
        for (auto const & d : from->args) {
            if (Formula hs = halfspace_for(session, ts, d, c)) {
                parts.push_back(hs);
            } else if (session.check_entailment(d, blocked).is_valid()) {
                parts.push_back(d);
            } else {
                ok = false;
                break;
            }
        }
        if (ok) return simplify(mk_or(std::move(parts)));
    }
    if (session.check_entailment(from, blocked).is_valid()) return from;
    return mk_and(from, blocked);
}

std::string model_record(const TransitionSystem & ts, const Model & m) {
    std::ostringstream os;
    os << "(";
    bool first = true;
    for (auto const & v : ts.state_vars()) {
        if (!first) os << " ";
        os << "(" << v.str() << " " << print_rational_sexpr(m.at(v)) << ")";
        first = false;
    }
    os << ")";
    return os.str();
}

} // namespace

std::string TransitionLog::serialize(const TransitionSystem & ts) const {
    std::ostringstream os;
    for (auto const & e : entries) {
        std::uint64_t dig = 1469598103934665603ull;
        auto mix = [&dig](const std::string & s) {
            for (unsigned char ch : s) {
                dig ^= ch;
                dig *= 1099511628211ull;
            }
        };
        std::ostringstream cexs_os, phis_os;
        for (auto const & c : e.cexs) {
            std::string rec = model_record(ts, c);
            mix(rec);
            cexs_os << " " << rec;
        }
        for (auto const & f : e.formulas) {
            std::string rec = print_formula(f);
            mix(rec);
            phis_os << " " << rec;
        }
        os << "(entry (step " << e.step << ") (rule " << e.rule << ") (digest " << dig << ") (cexs"
           << cexs_os.str() << ") (phis" << phis_os.str() << "))\n";
    }
    return os.str();
}

TransitionLog TransitionLog::deserialize(const TransitionSystem & ts, const std::string & text) {
    TransitionLog log;
    VarScope scope = scope_of(ts, false);
    for (auto const & rec : parse_sexprs(text)) {
        if (!rec.is_list() || rec.size() == 0 || !rec[0].is_symbol("entry")) {
            throw std::invalid_argument("bad transition log record: " + rec.str());
        }
        LogEntry e;
        for (size_t i = 1; i < rec.size(); ++i) {
            const Sexpr & field = rec[i];
            if (!field.is_list() || field.size() == 0 || !field[0].is_symbol()) continue;
            if (field[0].is_symbol("step")) {
                e.step = std::stoull(field[1].symbol);
            } else if (field[0].is_symbol("rule")) {
                e.rule = field[1].symbol;
            } else if (field[0].is_symbol("cexs")) {
                for (size_t j = 1; j < field.size(); ++j) {
                    Model m;
                    for (auto const & pair : field[j].items) {
                        auto it = scope.find(pair[0].symbol);
                        if (it == scope.end()) {
                            throw std::invalid_argument("unknown log variable " + pair[0].symbol);
                        }
                        m.set(it->second, parse_rational_sexpr(pair[1]));
                    }
                    e.cexs.push_back(std::move(m));
                }
            } else if (field[0].is_symbol("phis")) {
                for (size_t j = 1; j < field.size(); ++j) {
                    e.formulas.push_back(parse_formula(field[j], scope));
                }
            }
        }
        log.entries.push_back(std::move(e));
    }
    return log;
}

namespace {

/// The shared whole-process engine. The cut view is the IndPDR transition
/// system (Candidate/Decide/Conflict over cut formulas); the frames view is
/// sPDR. Both representations are maintained so a lockstep run can compare
/// them after every transition.
struct PdrCore {
    const StrategyContext & ctx;
    SolverSession & session;
    const TransitionSystem & ts;
    bool frames_view;

    std::vector<Formula> phis;
    std::vector<Formula> fs;
    std::vector<Model> cexs; // lowest level first
    TransitionLog cut_log, frame_log;
    size_t step = 0;

    PdrCore(const StrategyContext & c, SolverSession & s, bool fv)
        : ctx(c), session(s), ts(*c.ts), frames_view(fv) {
        phis = {ts.init()};
        fs = {ts.init()};
    }

    size_t top_level() const { return phis.size() - cexs.size(); }

    void log(const std::string & rule) {
        ++step;
        cut_log.entries.push_back({step, rule, cexs, phis});
        frame_log.entries.push_back({step, rule, cexs, fs});
    }

    void assert_config_invariants() {
        if (!ctx.check_invariants) return;
        if (!equal(phis[0], ts.init())) throw std::logic_error("PDR config: phi_0 changed");
        std::string why;
        if (!check_input_condition(session, ts, phis, &why)) {
            throw std::logic_error("PDR config violates its invariants: " + why);
        }
        for (size_t i = 0; i < cexs.size(); ++i) {
            if (!evaluate(phis[top_level() + i], cexs[i])) {
                throw std::logic_error("PDR config: counterexample escapes its cut formula");
            }
        }
        for (size_t i = 0; i + 1 < cexs.size(); ++i) {
            Model combined = cexs[i];
            for (size_t v = 0; v < ts.state_vars().size(); ++v) {
                combined.set(ts.primed_vars()[v], cexs[i + 1].at(ts.state_vars()[v]));
            }
            if (!evaluate(ts.trans(), combined)) {
                throw std::logic_error("PDR config: counterexample chain breaks the transition relation");
            }
        }
        if (!cexs.empty() && evaluate(ts.assertion(), cexs.back())) {
            throw std::logic_error("PDR config: top counterexample satisfies the assertion");
        }
    }

    std::optional<size_t> closed_level() {
        for (size_t l = 1; l < phis.size(); ++l) {
            Formula prev =
                frames_view ? fs[l - 1]
                            : mk_or(std::vector<Formula>(phis.begin(), phis.begin() + static_cast<long>(l)));
            Formula cur = frames_view ? fs[l] : phis[l];
            if (session.check_entailment(cur, prev).is_valid()) return l;
        }
        return std::nullopt;
    }

    Certificate safe_certificate(size_t level) {
        std::vector<Formula> pref(phis.begin(), phis.begin() + static_cast<long>(level) + 1);
        Formula inv = simplify(mk_or(std::move(pref)));
        std::string why;
        if (!verify_safe_invariant(session, ts, inv, &why)) {
            throw std::logic_error("internal soundness error: PDR invariant failed re-verification: " + why);
        }
        return Certificate::safe(inv);
    }

    Certificate unsafe_certificate() {
        std::vector<Model> trace = cexs;
        if (!replay_trace(ts, trace)) {
            throw std::logic_error("internal soundness error: PDR counterexample does not replay");
        }
        return Certificate::unsafe(std::move(trace));
    }

    std::optional<Certificate> advance() {
        size_t n = phis.size() - 1;
        if (cexs.empty()) {
            if (auto l = closed_level()) return safe_certificate(*l);
            Formula frontier = frames_view ? fs[n] : phis[n];
            std::optional<Model> cand =
                ctx.select_model(session, mk_and(frontier, mk_not(ts.assertion())));
            if (cand) {
                cexs.push_back(detail::restrict_plain(ts, *cand));
                log("Candidate");
                assert_config_invariants();
                return std::nullopt;
            }
            phis.push_back(mk_true());
            fs.push_back(mk_true());
            log("Unfold");
            assert_config_invariants();
            return std::nullopt;
        }

        Model ck = cexs.front();
        if (evaluate(ts.init(), ck)) return unsafe_certificate();
        size_t k = top_level();
        assert(k >= 1);

        Formula prev = frames_view ? fs[k - 1] : phis[k - 1];
        std::optional<Model> pred = ctx.select_model(session, mk_and(prev, detail::trans_into(ts, ck)));
        if (pred) {
            cexs.insert(cexs.begin(), detail::restrict_plain(ts, *pred));
            log("Decide");
            assert_config_invariants();
            return std::nullopt;
        }

        // Conflict at level k. The sPDR side conjoins F_{k-1} so that the
        // frame keeps its lower bound; that requires c_k outside F_{k-1}.
        if (evaluate(fs[k - 1], ck)) {
            return Certificate::unknown("stuck configuration: blocked state lies inside the lower frame");
        }
        VarSet plain_set(ts.state_vars().begin(), ts.state_vars().end());
        Formula image_prev = simplify(ts.unprime(qe_exists(plain_set, mk_and(phis[k - 1], ts.trans()))));
        Formula psi = generalize_conflict(session, ts, image_prev, ck);
        Formula blocked = blocking_constraint(ts, ck);
        if (!session.check_entailment(psi, blocked).is_valid()) {
            psi = mk_and(psi, blocked);
        }
        // (Conflict) premises, re-checked rather than trusted.
        if (!session.check_entailment(mk_and(phis[k - 1], ts.trans()), ts.prime(psi)).is_valid() ||
            !session.check_entailment(psi, blocked).is_valid()) {
            return Certificate::unknown("conflict interpolant failed validation");
        }
        phis[k] = simplify(mk_and(phis[k], psi));
        fs[k] = simplify(mk_and(fs[k], mk_or(fs[k - 1], psi)));
        cexs.erase(cexs.begin());
        log("Conflict");
        assert_config_invariants();

        if (ctx.pdr_induction_rule) try_induction(psi, k);
        return std::nullopt;
    }

    /// Optional (Induction): pushes a conflict clause down through every
    /// frame it is inductive for. Off by default.
    void try_induction(const Formula & psi, size_t k) {
        if (k < 2) return;
        size_t ell = k - 1;
        if (!session.check_entailment(ts.init(), psi).is_valid()) return;
        for (size_t i = 0; i < ell; ++i) {
            Formula pre = mk_and(mk_and(phis[i], psi), ts.trans());
            if (!session.check_entailment(pre, ts.prime(psi)).is_valid()) return;
        }
        for (size_t i = 0; i <= ell; ++i) {
            phis[i] = simplify(mk_and(phis[i], psi));
            fs[i] = simplify(mk_and(fs[i], psi));
        }
        log("Induction");
        assert_config_invariants();
    }
};

} // namespace

Certificate spdr(const StrategyContext & ctx) {
    return detail::run_guarded([&]() -> Certificate {
        auto session = ctx.sessions();
        PdrCore core(ctx, *session, true);
        for (long i = 0; i < ctx.budget.max_loop_iterations; ++i) {
            if (ctx.cancelled()) return Certificate::unknown("cancelled");
            std::optional<Certificate> verdict;
            try {
                verdict = core.advance();
            } catch (const BackendUnknown & e) { return Certificate::unknown(e.what()); }
            if (verdict) return std::move(*verdict);
        }
        std::ostringstream os;
        os << "loop budget exhausted with " << core.phis.size() << " frames and " << core.cexs.size()
           << " pending counterexamples";
        return Certificate::unknown(os.str());
    });
}

LockstepResult run_lockstep(const StrategyContext & ctx) {
    auto session = ctx.sessions();
    PdrCore core(ctx, *session, false);
    LockstepResult out;
    out.relation = {BisimOutcome::Kind::Pass, 0, ""};

    auto relation_holds = [&]() {
        for (size_t j = 0; j < core.phis.size(); ++j) {
            Formula disj =
                mk_or(std::vector<Formula>(core.phis.begin(), core.phis.begin() + static_cast<long>(j) + 1));
            EntailmentResult fwd = session->check_entailment(core.fs[j], disj);
            EntailmentResult bwd = session->check_entailment(disj, core.fs[j]);
            if (fwd.is_unknown() || bwd.is_unknown()) {
                out.relation = {BisimOutcome::Kind::Inconclusive, core.step,
                                "backend inconclusive at level " + std::to_string(j)};
                return false;
            }
            if (!fwd.is_valid() || !bwd.is_valid()) {
                out.relation = {BisimOutcome::Kind::Divergence, core.step,
                                "frame " + std::to_string(j) + " diverges from the cut disjunction"};
                return false;
            }
        }
        return true;
    };

    out.verdict = Certificate::unknown("loop budget exhausted");
    for (long i = 0; i < ctx.budget.max_loop_iterations; ++i) {
        try {
            std::optional<Certificate> verdict = core.advance();
            if (!relation_holds()) {
                out.verdict = Certificate::unknown("lockstep relation check stopped the run");
                break;
            }
            if (verdict) {
                out.verdict = std::move(*verdict);
                break;
            }
        } catch (const BackendUnknown & e) {
            out.relation = {BisimOutcome::Kind::Inconclusive, core.step, e.what()};
            out.verdict = Certificate::unknown(e.what());
            break;
        } catch (const QelimError & e) {
            out.relation = {BisimOutcome::Kind::Inconclusive, core.step, e.what()};
            out.verdict = Certificate::unknown(e.what());
            break;
        }
    }
    out.cut_log = std::move(core.cut_log);
    out.frame_log = std::move(core.frame_log);
    return out;
}

BisimOutcome bisim_check(SolverSession & session, const TransitionLog & cut_log,
                         const TransitionLog & frame_log) try {
    size_t steps = std::min(cut_log.entries.size(), frame_log.entries.size());
    for (size_t i = 0; i < steps; ++i) {
        const LogEntry & a = cut_log.entries[i];
        const LogEntry & b = frame_log.entries[i];
        if (a.rule != b.rule) {
            return {BisimOutcome::Kind::Divergence, i, "rule mismatch: " + a.rule + " vs " + b.rule};
        }
        if (a.cexs.size() != b.cexs.size()) {
            return {BisimOutcome::Kind::Divergence, i, "counterexample stacks differ in size"};
        }
        for (size_t j = 0; j < a.cexs.size(); ++j) {
            if (!(a.cexs[j] == b.cexs[j])) {
                return {BisimOutcome::Kind::Divergence, i,
                        "counterexample differs at position " + std::to_string(j)};
            }
        }
        if (a.formulas.size() != b.formulas.size()) {
            return {BisimOutcome::Kind::Divergence, i, "configuration lengths differ"};
        }
        for (size_t j = 0; j < a.formulas.size(); ++j) {
            Formula disj =
                mk_or(std::vector<Formula>(a.formulas.begin(), a.formulas.begin() + static_cast<long>(j) + 1));
            EntailmentResult fwd = session.check_entailment(b.formulas[j], disj);
            EntailmentResult bwd = session.check_entailment(disj, b.formulas[j]);
            if (fwd.is_unknown() || bwd.is_unknown()) {
                return {BisimOutcome::Kind::Inconclusive, i,
                        "backend inconclusive at level " + std::to_string(j)};
            }
            if (!fwd.is_valid() || !bwd.is_valid()) {
                return {BisimOutcome::Kind::Divergence, i,
                        "frame " + std::to_string(j) + " differs from the cut disjunction"};
            }
        }
    }
    if (cut_log.entries.size() != frame_log.entries.size()) {
        return {BisimOutcome::Kind::Divergence, steps, "log lengths differ"};
    }
    return {BisimOutcome::Kind::Pass, steps, ""};
} catch (const QelimError & e) {
    return {BisimOutcome::Kind::Inconclusive, 0, e.what()};
}

} // namespace cyclomc
