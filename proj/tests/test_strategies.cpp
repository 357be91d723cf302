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

long trace_value(const Certificate & c, size_t step, const Var & v) {
    REQUIRE(step < c.trace.size());
    const Rational & r = c.trace[step].at(v);
    REQUIRE(r.is_integer());
    return std::stol(r.str());
}

} // namespace

TEST_CASE("bmc: the running example is bounded-safe at 2 and unsafe at 3") {
    auto ts = branching_system();
    Var x = mk_int("x");
    auto ctx = ctx_for(ts);

    Certificate c2 = bmc(ctx, 2);
    CHECK(c2.kind == Certificate::Kind::BoundedSafe);
    CHECK(c2.bound == 2);
    REQUIRE(c2.proof != nullptr);
    CHECK(c2.proof->size() == 4); // three SE applications plus the open top

    Certificate c3 = bmc(ctx, 3);
    REQUIRE(c3.kind == Certificate::Kind::Unsafe);
    REQUIRE(c3.trace.size() == 4);
    for (long i = 0; i <= 3; ++i) CHECK(trace_value(c3, i, x) == i);
    CHECK(replay_trace(*ts, c3.trace));
}

TEST_CASE("bmc: bottom init is bounded-safe at any depth") {
    Var x = mk_int("x");
    auto ts = make_system({x}, "false", "(= x' (+ x 1))", "(<= x 2)");
    Certificate c = bmc(ctx_for(ts), 5);
    CHECK(c.kind == Certificate::Kind::BoundedSafe);
}

TEST_CASE("forward_criterion: closes self-loops and falls back to bmc verdicts") {
    Var x = mk_int("x");
    auto loop = make_system({x}, "(= x 0)", "(= x' x)", "(<= x 0)");
    Certificate safe = forward_criterion(ctx_for(loop), 5);
    REQUIRE(safe.kind == Certificate::Kind::Safe);
    auto session = make_internal_session();
    CHECK(session->check_entailment(safe.invariant, atom(x, Rel::Eq, 0)).is_valid());
    CHECK(session->check_entailment(atom(x, Rel::Eq, 0), safe.invariant).is_valid());

    Certificate unsafe = forward_criterion(ctx_for(branching_system()), 8);
    REQUIRE(unsafe.kind == Certificate::Kind::Unsafe);
    CHECK(unsafe.trace.size() == 4);

    auto bot = make_system({x}, "false", "(= x' x)", "(<= x 0)");
    Certificate trivially = forward_criterion(ctx_for(bot), 0);
    CHECK(trivially.kind == Certificate::Kind::Safe);
}

TEST_CASE("forward_criterion: growing images never close, verdict falls back to bounded") {
    auto ts = counter_system();
    Certificate c = forward_criterion(ctx_for(ts), 4);
    CHECK(c.kind == Certificate::Kind::BoundedSafe);
}

TEST_CASE("predicate_abstraction: the two-predicate counter proof") {
    auto ts = counter_system();
    Var x = mk_int("x");
    std::vector<Formula> preds{atom(x, Rel::Ge, 0), atom(x, Rel::Ge, 1)};
    Certificate c = predicate_abstraction(ctx_for(ts), preds);
    REQUIRE(c.kind == Certificate::Kind::Safe);
    auto session = make_internal_session();
    CHECK(verify_safe_invariant(*session, *ts, c.invariant));
}

TEST_CASE("predicate_abstraction: no predicates means top cuts and Unknown") {
    auto ts = counter_system();
    Certificate c = predicate_abstraction(ctx_for(ts), {});
    CHECK(c.kind == Certificate::Kind::Unknown);
    CHECK(c.reason.find("abstract path") != std::string::npos);
}

TEST_CASE("predicate_abstraction: assertion violation at the root is concrete") {
    Var x = mk_int("x");
    auto ts = make_system({x}, "(= x 5)", "(= x' x)", "(<= x 2)");
    Certificate c = predicate_abstraction(ctx_for(ts), {atom(x, Rel::Le, 2)});
    REQUIRE(c.kind == Certificate::Kind::Unsafe);
    CHECK(c.trace.size() == 1);
    CHECK(replay_trace(*ts, c.trace));
}

TEST_CASE("impact: safe counter converges with an invariant entailing the assertion") {
    auto ts = counter_system();
    Certificate c = impact(ctx_for(ts));
    REQUIRE(c.kind == Certificate::Kind::Safe);
    auto session = make_internal_session();
    Var x = mk_int("x");
    CHECK(session->check_entailment(c.invariant, atom(x, Rel::Ge, 0)).is_valid());
    CHECK(c.proof != nullptr);
    CHECK(c.proof->check_global_trace().empty());
}

TEST_CASE("impact: the running example refutes at depth three") {
    auto ts = branching_system();
    Var x = mk_int("x");
    Certificate c = impact(ctx_for(ts));
    REQUIRE(c.kind == Certificate::Kind::Unsafe);
    REQUIRE(c.trace.size() == 4);
    for (long i = 0; i <= 3; ++i) CHECK(trace_value(c, i, x) == i);
}

TEST_CASE("impact: trivially violated init gives a length-zero trace") {
    Var x = mk_int("x");
    auto ts = make_system({x}, "(= x 5)", "(= x' x)", "(<= x 2)");
    Certificate c = impact(ctx_for(ts));
    REQUIRE(c.kind == Certificate::Kind::Unsafe);
    CHECK(c.trace.size() == 1);
    CHECK(replay_trace(*ts, c.trace));
}

TEST_CASE("impact: budget exhaustion reports Unknown, never a verdict") {
    auto ts = counter_system();
    StrategyContext ctx = ctx_for(ts);
    ctx.itp = ItpStrength::Strongest; // exact images never cover
    ctx.budget.max_unrollings = 6;
    Certificate c = impact(ctx);
    CHECK(c.kind == Certificate::Kind::Unknown);
}

TEST_CASE("back_bmc: mirrors bmc on the running example") {
    auto ts = branching_system();
    auto ctx = ctx_for(ts);
    Certificate c3 = back_bmc(ctx, 3);
    REQUIRE(c3.kind == Certificate::Kind::Unsafe);
    CHECK(c3.trace.size() == 4);
    CHECK(replay_trace(*ts, c3.trace));

    Certificate c2 = back_bmc(ctx, 2);
    CHECK(c2.kind == Certificate::Kind::BoundedSafe);

    // k = 0 is exactly the init /\ not assert check.
    Var x = mk_int("x");
    auto bad0 = make_system({x}, "(= x 5)", "(= x' x)", "(<= x 2)");
    CHECK(back_bmc(ctx_for(bad0), 0).kind == Certificate::Kind::Unsafe);
    CHECK(back_bmc(ctx, 0).kind == Certificate::Kind::BoundedSafe);

    // A trivial assertion stays bounded-safe forever.
    auto top = make_system({x}, "(= x 0)", "(= x' (+ x 1))", "true");
    CHECK(back_bmc(ctx_for(top), 6).kind == Certificate::Kind::BoundedSafe);
}

TEST_CASE("property: bmc, back_bmc and explicit-state search agree on box systems") {
    std::mt19937_64 rng(20260401);
    RandomSystemOptions opts;
    opts.dims = 1;
    opts.box = 5;
    constexpr long kDepth = 8;
    int disagreements = 0;
    for (int i = 0; i < 60; ++i) {
        auto ts = random_box_system(rng, opts);
        long oracle = bfs_unsafe_depth(*ts, opts.box, kDepth);
        auto ctx = ctx_for(ts);
        Certificate fwd = bmc(ctx, kDepth);
        Certificate bwd = back_bmc(ctx, kDepth);
        bool oracle_unsafe = oracle >= 0;
        CAPTURE(i);
        if ((fwd.kind == Certificate::Kind::Unsafe) != oracle_unsafe) ++disagreements;
        if ((bwd.kind == Certificate::Kind::Unsafe) != oracle_unsafe) ++disagreements;
        if (fwd.kind == Certificate::Kind::Unsafe) {
            CHECK(replay_trace(*ts, fwd.trace));
            CHECK(static_cast<long>(fwd.trace.size()) == oracle + 1);
        }
        if (bwd.kind == Certificate::Kind::Unsafe) CHECK(replay_trace(*ts, bwd.trace));
    }
    CHECK(disagreements == 0);
}

TEST_CASE("two-variable systems: interpolants respect the shared-variable boundary") {
    // The suffix of a refinement chain may not mention every state
    // variable; interpolants must stay inside the actual intersection.
    Var x = mk_int("x"), y = mk_int("y");
    auto accum = make_system({x, y}, "(and (= x 0) (= y 0))",
                             "(and (= x' (+ x 1)) (= y' (+ y x)))", "(>= y 0)");
    StrategyContext ctx;
    ctx.ts = accum;
    ctx.budget.max_unrollings = 8;
    // impact may exhaust its budget here, but it must never report a wrong
    // verdict or trip the interpolant validation.
    Certificate c = impact(ctx);
    CHECK(c.kind != Certificate::Kind::Unsafe);
    Certificate s = spdr(ctx);
    REQUIRE(s.kind == Certificate::Kind::Safe);
    auto session = make_internal_session();
    CHECK(verify_safe_invariant(*session, *accum, s.invariant));

    auto drain = make_system({x, y}, "(and (= x 0) (= y 0))",
                             "(or (and (= x' (+ x 1)) (= y' y)) (and (= x' x) (= y' (- y 1))))",
                             "(>= (+ x y) (- 2))");
    StrategyContext ctx2;
    ctx2.ts = drain;
    Certificate u = impact(ctx2);
    REQUIRE(u.kind == Certificate::Kind::Unsafe);
    CHECK(u.trace.size() == 4);
    CHECK(replay_trace(*drain, u.trace));
}

TEST_CASE("property: two-variable box systems agree with the explicit oracle") {
    std::mt19937_64 rng(909090);
    RandomSystemOptions opts;
    opts.dims = 2;
    opts.box = 3;
    int disagreements = 0;
    for (int i = 0; i < 15; ++i) {
        auto ts = random_box_system(rng, opts);
        long oracle = bfs_unsafe_depth(*ts, opts.box, 5);
        StrategyContext ctx;
        ctx.ts = ts;
        Certificate fwd = bmc(ctx, 5);
        CAPTURE(i);
        if ((fwd.kind == Certificate::Kind::Unsafe) != (oracle >= 0)) ++disagreements;
        if (fwd.kind == Certificate::Kind::Unsafe) CHECK(replay_trace(*ts, fwd.trace));
    }
    CHECK(disagreements == 0);
}

TEST_CASE("portfolio: first decisive verdict wins and losers cancel") {
    Certificate safe = portfolio(ctx_for(counter_system()));
    CHECK(safe.kind == Certificate::Kind::Safe);
    Certificate unsafe = portfolio(ctx_for(branching_system()));
    CHECK(unsafe.kind == Certificate::Kind::Unsafe);
}

TEST_CASE("cancellation short-circuits strategies") {
    StrategyContext ctx = ctx_for(branching_system());
    ctx.cancel = std::make_shared<std::atomic_bool>(true);
    CHECK(bmc(ctx, 3).kind == Certificate::Kind::Unknown);
    CHECK(impact(ctx).kind == Certificate::Kind::Unknown);
    CHECK(spdr(ctx).kind == Certificate::Kind::Unknown);
}

TEST_CASE("wide covering scope preserves verdicts and the trace condition") {
    for (auto ts : {counter_system(), branching_system()}) {
        StrategyContext narrow = ctx_for(ts);
        StrategyContext wide = ctx_for(ts);
        wide.wide_covering = true;
        Certificate a = impact(narrow);
        Certificate b = impact(wide);
        CHECK(a.kind == b.kind);
        if (b.kind == Certificate::Kind::Safe) {
            REQUIRE(b.proof != nullptr);
            CHECK(b.proof->check_global_trace().empty());
        }
    }
}
