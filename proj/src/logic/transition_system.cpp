/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "logic/transition_system.hpp"

#include <stdexcept>

namespace cyclomc {

TransitionSystem::TransitionSystem(std::vector<Var> state_vars, Formula init, Formula trans,
                                   Formula assertion)
    : state_vars_(std::move(state_vars)), init_(std::move(init)), trans_(std::move(trans)),
      assertion_(std::move(assertion)) {
    primed_vars_.reserve(state_vars_.size());
    for (auto const & v : state_vars_) {
        if (v.tag != Var::Tag::Plain) { throw std::invalid_argument("state variables must be unprimed"); }
        primed_vars_.push_back(v.primed());
    }
    VarSet allowed(state_vars_.begin(), state_vars_.end());
    for (auto const & v : free_vars(init_)) {
        if (!allowed.count(v)) throw std::invalid_argument("init mentions non-state variable " + v.str());
    }
    for (auto const & v : free_vars(assertion_)) {
        if (!allowed.count(v)) throw std::invalid_argument("assert mentions non-state variable " + v.str());
    }
    VarSet allowed2 = allowed;
    allowed2.insert(primed_vars_.begin(), primed_vars_.end());
    for (auto const & v : free_vars(trans_)) {
        if (!allowed2.count(v)) throw std::invalid_argument("trans mentions unknown variable " + v.str());
    }
}

Formula TransitionSystem::prime(const Formula & f) const {
    std::map<Var, Var> ren;
    for (size_t i = 0; i < state_vars_.size(); ++i) ren.emplace(state_vars_[i], primed_vars_[i]);
    return rename(f, ren);
}

Formula TransitionSystem::unprime(const Formula & f) const {
    std::map<Var, Var> ren;
    for (size_t i = 0; i < state_vars_.size(); ++i) ren.emplace(primed_vars_[i], state_vars_[i]);
    return rename(f, ren);
}

Formula TransitionSystem::at_step(const Formula & f, int k) const {
    std::map<Var, Var> ren;
    for (auto const & v : state_vars_) ren.emplace(v, v.at_step(k));
    return rename(f, ren);
}

Formula TransitionSystem::trans_step(int k) const {
    std::map<Var, Var> ren;
    for (size_t i = 0; i < state_vars_.size(); ++i) {
        ren.emplace(state_vars_[i], state_vars_[i].at_step(k));
        ren.emplace(primed_vars_[i], state_vars_[i].at_step(k + 1));
    }
    return rename(trans_, ren);
}

Model TransitionSystem::restrict_to_state(const Model & m, const std::vector<Var> & from) const {
    Model out;
    for (size_t i = 0; i < state_vars_.size(); ++i) {
        out.set(state_vars_[i], m.at(from.at(i)));
    }
    return out;
}

} // namespace cyclomc
