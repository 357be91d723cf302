/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_LOGIC_MODEL_HPP
#define CYCLOMC_LOGIC_MODEL_HPP

#include "logic/formula.hpp"

#include <map>
#include <sstream>
#include <string>

namespace cyclomc {

/// A total assignment for the variables of the formula it was produced for.
/// Values of Int-sorted variables are integral rationals.
struct Model {
    std::map<Var, Rational> values;

    bool has(const Var & v) const { return values.count(v) > 0; }
    const Rational & at(const Var & v) const { return values.at(v); }
    void set(const Var & v, Rational r) { values[v] = std::move(r); }

    std::string str() const {
        std::ostringstream os;
        os << "{";
        bool first = true;
        for (auto const & [v, r] : values) {
            if (!first) os << ", ";
            os << v.str() << "=" << r.str();
            first = false;
        }
        os << "}";
        return os.str();
    }

    friend bool operator==(const Model & a, const Model & b) { return a.values == b.values; }
};

} // namespace cyclomc

#endif
