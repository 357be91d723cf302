/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "strategies/strategies.hpp"

#include <condition_variable>
#include <mutex>
#include <thread>

namespace cyclomc {

/// Independent workers race on clones of the input; the first definite
/// verdict wins and the rest are cancelled cooperatively at their next
/// query boundary.
Certificate portfolio(const StrategyContext & ctx) {
    if (ctx.cancelled()) return Certificate::unknown("cancelled");
    auto cancel = std::make_shared<std::atomic_bool>(false);

    std::vector<std::function<Certificate(StrategyContext)>> members;
    members.push_back([](StrategyContext c) { return impact(c); });
    members.push_back([](StrategyContext c) { return spdr(c); });
    members.push_back([](StrategyContext c) { return forward_criterion(c, c.budget.max_unrollings); });

    std::mutex mu;
    std::condition_variable cv;
    std::vector<Certificate> results;
    size_t finished = 0;

    std::vector<std::thread> threads;
    threads.reserve(members.size());
    for (auto & member : members) {
        threads.emplace_back([&, member] {
            StrategyContext worker = ctx;
            worker.cancel = cancel;
            Certificate c = member(worker);
            std::lock_guard<std::mutex> lock(mu);
            ++finished;
            results.push_back(std::move(c));
            cv.notify_all();
        });
    }

    Certificate best = Certificate::unknown("all portfolio members inconclusive");
    {
        std::unique_lock<std::mutex> lock(mu);
        size_t consumed = 0;
        while (true) {
            cv.wait(lock, [&] { return results.size() > consumed; });
            for (; consumed < results.size(); ++consumed) {
                const Certificate & c = results[consumed];
                if (c.kind == Certificate::Kind::Safe || c.kind == Certificate::Kind::Unsafe) {
                    best = c;
                    cancel->store(true);
                } else if (c.kind == Certificate::Kind::BoundedSafe &&
                           best.kind == Certificate::Kind::Unknown) {
                    best = c;
                }
            }
            if (best.kind == Certificate::Kind::Safe || best.kind == Certificate::Kind::Unsafe) break;
            if (finished == members.size()) break;
        }
    }
    for (auto & t : threads) t.join();
    return best;
}

} // namespace cyclomc
