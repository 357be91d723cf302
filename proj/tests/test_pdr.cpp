/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "test_util.hpp"

#include "strategies/strategies.hpp"

#include <doctest.h>

#include <random>

using namespace cyclomc;
using namespace cyclomc::testutil;

namespace {

StrategyContext ctx_for(std::shared_ptr<const TransitionSystem> ts) {
    StrategyContext ctx;
    ctx.ts = std::move(ts);
    return ctx;
}

} // namespace

TEST_CASE("frames: prefix disjunction, built syntactically") {
    Var x = mk_int("x");
    CutSequence seq{{atom(x, Rel::Eq, 0), atom(x, Rel::Eq, 1), atom(x, Rel::Le, 2)}};
    std::vector<Formula> fs = frames(seq);
    REQUIRE(fs.size() == 3);
    CHECK(equal(fs[0], atom(x, Rel::Eq, 0)));
    CHECK(equal(fs[1], mk_or(atom(x, Rel::Eq, 0), atom(x, Rel::Eq, 1))));
    CHECK(equal(fs[2], mk_or(std::vector<Formula>{atom(x, Rel::Eq, 0), atom(x, Rel::Eq, 1),
                                                  atom(x, Rel::Le, 2)})));
    // Singleton.
    CutSequence one{{atom(x, Rel::Eq, 0)}};
    CHECK(frames(one).size() == 1);
    // Frames are monotone by construction.
    auto session = make_internal_session();
    for (size_t j = 0; j + 1 < fs.size(); ++j) {
        CHECK(session->check_entailment(fs[j], fs[j + 1]).is_valid());
    }
}

TEST_CASE("spdr: the running example is unsafe with the 0,1,2,3 trace after three unfolds") {
    auto ts = branching_system();
    Var x = mk_int("x");
    Certificate c = spdr(ctx_for(ts));
    REQUIRE(c.kind == Certificate::Kind::Unsafe);
    REQUIRE(c.trace.size() == 4);
    for (long i = 0; i <= 3; ++i) CHECK(c.trace[i].at(x) == Rational(i));
    CHECK(replay_trace(*ts, c.trace));
}

TEST_CASE("spdr: safe counter closes with an inductive frame") {
    auto ts = counter_system();
    Certificate c = spdr(ctx_for(ts));
    REQUIRE(c.kind == Certificate::Kind::Safe);
    auto session = make_internal_session();
    CHECK(verify_safe_invariant(*session, *ts, c.invariant));
}

TEST_CASE("spdr: bottom init closes immediately") {
    Var x = mk_int("x");
    auto ts = make_system({x}, "false", "(= x' (+ x 1))", "(<= x 2)");
    Certificate c = spdr(ctx_for(ts));
    CHECK(c.kind == Certificate::Kind::Safe);
}

TEST_CASE("spdr: budget exhaustion carries the final configuration summary") {
    auto ts = counter_system();
    StrategyContext ctx = ctx_for(ts);
    ctx.budget.max_loop_iterations = 2;
    Certificate c = spdr(ctx);
    CHECK(c.kind == Certificate::Kind::Unknown);
    CHECK(c.reason.find("frames") != std::string::npos);
}

TEST_CASE("spdr: optional induction rule stays sound") {
    StrategyContext ctx = ctx_for(counter_system());
    ctx.pdr_induction_rule = true;
    Certificate c = spdr(ctx);
    REQUIRE(c.kind == Certificate::Kind::Safe);
    auto session = make_internal_session();
    CHECK(verify_safe_invariant(*session, *ctx.ts, c.invariant));

    StrategyContext ctx2 = ctx_for(branching_system());
    ctx2.pdr_induction_rule = true;
    CHECK(spdr(ctx2).kind == Certificate::Kind::Unsafe);
}

TEST_CASE("lockstep: the correspondence holds on the running example and the safe counter") {
    for (auto ts : {branching_system(), counter_system()}) {
        LockstepResult r = run_lockstep(ctx_for(ts));
        CAPTURE(to_string(ts->init()));
        CHECK(r.relation.pass());
        CHECK(r.verdict.kind != Certificate::Kind::Unknown);
        CHECK(r.cut_log.entries.size() == r.frame_log.entries.size());
        CHECK(r.cut_log.entries.size() > 0);
        // The recorded logs replay through the offline checker.
        auto session = make_internal_session();
        BisimOutcome replay = bisim_check(*session, r.cut_log, r.frame_log);
        CHECK(replay.pass());
    }
}

TEST_CASE("lockstep: three unfolds precede the refutation on the running example") {
    LockstepResult r = run_lockstep(ctx_for(branching_system()));
    long unfolds = 0;
    for (auto const & e : r.cut_log.entries)
        if (e.rule == "Unfold") ++unfolds;
    CHECK(unfolds == 3);
    CHECK(r.verdict.kind == Certificate::Kind::Unsafe);
}

TEST_CASE("transition logs serialize line-delimited and round trip") {
    auto ts = branching_system();
    LockstepResult r = run_lockstep(ctx_for(ts));
    std::string text = r.cut_log.serialize(*ts);
    CHECK(text.find("(entry (step 1) (rule ") == 0);
    CHECK(text.find("(digest ") != std::string::npos);
    // One record per line.
    size_t lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == r.cut_log.entries.size());

    TransitionLog parsed = TransitionLog::deserialize(*ts, text);
    REQUIRE(parsed.entries.size() == r.cut_log.entries.size());
    for (size_t i = 0; i < parsed.entries.size(); ++i) {
        CHECK(parsed.entries[i].rule == r.cut_log.entries[i].rule);
        CHECK(parsed.entries[i].cexs.size() == r.cut_log.entries[i].cexs.size());
        REQUIRE(parsed.entries[i].formulas.size() == r.cut_log.entries[i].formulas.size());
        for (size_t j = 0; j < parsed.entries[i].formulas.size(); ++j) {
            CHECK(equal(parsed.entries[i].formulas[j], r.cut_log.entries[i].formulas[j]));
        }
    }

    // A deserialized pair still passes the offline check.
    auto session = make_internal_session();
    TransitionLog frames_parsed = TransitionLog::deserialize(*ts, r.frame_log.serialize(*ts));
    CHECK(bisim_check(*session, parsed, frames_parsed).pass());
}

TEST_CASE("bisim_check: trivial initial configurations are related") {
    auto ts = branching_system();
    TransitionLog a, b;
    a.entries.push_back({1, "Unfold", {}, {ts->init()}});
    b.entries.push_back({1, "Unfold", {}, {ts->init()}});
    auto session = make_internal_session();
    CHECK(bisim_check(*session, a, b).pass());
}

TEST_CASE("bisim_check: a perturbed conflict interpolant is reported at its step") {
    auto ts = branching_system();
    LockstepResult r = run_lockstep(ctx_for(ts));
    REQUIRE(r.relation.pass());

    // Find the first Conflict entry and weaken the frame-side formula so
    // the equivalence breaks exactly there.
    TransitionLog perturbed = r.frame_log;
    size_t conflict_at = perturbed.entries.size();
    Var x = mk_int("x");
    for (size_t i = 0; i < perturbed.entries.size(); ++i) {
        if (perturbed.entries[i].rule == "Conflict") {
            size_t top = perturbed.entries[i].formulas.size() - 1;
            // Pretend the engine kept the frame at top instead of
            // strengthening it.
            perturbed.entries[i].formulas[top] = mk_or(perturbed.entries[i].formulas[top],
                                                       atom(x, Rel::Ge, 1000));
            conflict_at = i;
            break;
        }
    }
    REQUIRE(conflict_at < perturbed.entries.size());
    auto session = make_internal_session();
    BisimOutcome out = bisim_check(*session, r.cut_log, perturbed);
    CHECK_FALSE(out.pass());
    CHECK(out.kind == BisimOutcome::Kind::Divergence);
    CHECK(out.step == conflict_at);
}

TEST_CASE("property: lockstep correspondence on random box systems") {
    std::mt19937_64 rng(20260707);
    RandomSystemOptions opts;
    opts.dims = 1;
    opts.box = 4;
    int ran = 0;
    for (int i = 0; i < 12; ++i) {
        auto ts = random_box_system(rng, opts);
        StrategyContext ctx = ctx_for(ts);
        ctx.budget.max_loop_iterations = 400;
        LockstepResult r = run_lockstep(ctx);
        CAPTURE(i);
        CHECK(r.relation.pass());
        if (r.verdict.kind == Certificate::Kind::Unsafe) CHECK(replay_trace(*ts, r.verdict.trace));
        ++ran;
    }
    CHECK(ran == 12);
}

TEST_CASE("lockstep on planar systems never diverges (size caps may stop a run)") {
    std::mt19937_64 rng(777);
    RandomSystemOptions opts;
    opts.dims = 2;
    opts.box = 3;
    for (int i = 0; i < 10; ++i) {
        auto ts = random_box_system(rng, opts);
        StrategyContext ctx = ctx_for(ts);
        ctx.budget.max_loop_iterations = 300;
        LockstepResult r = run_lockstep(ctx);
        CAPTURE(i);
        CHECK(r.relation.kind != BisimOutcome::Kind::Divergence);
        if (r.verdict.kind == Certificate::Kind::Unsafe) CHECK(replay_trace(*ts, r.verdict.trace));
    }
}

TEST_CASE("spdr and impact_mc verdicts agree on the shared suite") {
    std::mt19937_64 rng(424242);
    RandomSystemOptions opts;
    opts.dims = 1;
    opts.box = 4;
    for (int i = 0; i < 8; ++i) {
        auto ts = random_box_system(rng, opts);
        StrategyContext ctx = ctx_for(ts);
        ctx.budget.max_loop_iterations = 400;
        Certificate a = spdr(ctx);
        Certificate b = impact_mc(ctx, McrEngine::Naive);
        if (a.kind == Certificate::Kind::Unknown || b.kind == Certificate::Kind::Unknown) continue;
        CAPTURE(i);
        CHECK((a.kind == Certificate::Kind::Unsafe) == (b.kind == Certificate::Kind::Unsafe));
    }
}
