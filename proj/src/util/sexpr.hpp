/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_UTIL_SEXPR_HPP
#define CYCLOMC_UTIL_SEXPR_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace cyclomc {

/// Minimal s-expression reader used for problem files and SMT-LIB2 replies.
struct Sexpr {
    enum class Kind { Symbol, List };
    Kind kind;
    std::string symbol;        // Kind::Symbol
    std::vector<Sexpr> items;  // Kind::List
    int line = 0;
    int column = 0;

    bool is_symbol() const { return kind == Kind::Symbol; }
    bool is_symbol(const std::string & s) const { return kind == Kind::Symbol && symbol == s; }
    bool is_list() const { return kind == Kind::List; }
    size_t size() const { return items.size(); }
    const Sexpr & operator[](size_t i) const { return items.at(i); }

    std::string str() const;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string & what, int line, int column)
        : std::runtime_error(what + " at line " + std::to_string(line) + ", column " +
                             std::to_string(column)),
          line(line), column(column) {}
    int line;
    int column;
};

/// Parses all top-level s-expressions in text. Comments start with ';'.
std::vector<Sexpr> parse_sexprs(const std::string & text);

/// Parses exactly one s-expression.
Sexpr parse_sexpr(const std::string & text);

} // namespace cyclomc

#endif
