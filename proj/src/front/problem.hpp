/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_FRONT_PROBLEM_HPP
#define CYCLOMC_FRONT_PROBLEM_HPP

#include "logic/transition_system.hpp"
#include "util/sexpr.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>

namespace cyclomc {

class ProblemError : public std::runtime_error {
public:
    ProblemError(const std::string & what, int line = 0, int column = 0)
        : std::runtime_error(line > 0 ? what + " at line " + std::to_string(line) + ", column " +
                                            std::to_string(column)
                                      : what),
          line(line), column(column) {}
    int line;
    int column;
};

struct ProblemFile {
    std::shared_ptr<const TransitionSystem> system;
    std::string name = "problem";
    std::optional<bool> expect_safe; // (expect safe|unsafe) annotation
};

/// Native s-expression format or the SMT-LIB2 HORN single-predicate linear
/// subset (detected by set-logic HORN / declare-fun).
ProblemFile parse_problem(const std::string & text);

/// Canonical native-format rendering; parses back to the same system.
std::string print_problem(const ProblemFile & p);

/// Variables in scope by their printed name ("x", "x'", "x@2").
using VarScope = std::map<std::string, Var>;

VarScope scope_of(const TransitionSystem & ts, bool with_primed);

/// SMT-LIB2-style term grammar over a fixed scope:
/// and/or/not/=>/=/<=/</>=/>/distinct, +, -, * (constant factors), exists,
/// forall, numerals and (/ p q).
Formula parse_formula(const Sexpr & e, const VarScope & scope);
Formula parse_formula(const std::string & text, const VarScope & scope);

/// Rendering compatible with parse_formula.
std::string print_formula(const Formula & f);

/// One formula per line, for --predicates files.
std::vector<Formula> parse_formula_lines(const std::string & text, const VarScope & scope);

/// Rational constants in the same grammar: 3, (- 3), (/ 1 2), (- (/ 1 2)).
std::string print_rational_sexpr(const Rational & r);
Rational parse_rational_sexpr(const Sexpr & e);

} // namespace cyclomc

#endif
