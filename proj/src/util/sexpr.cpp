/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "util/sexpr.hpp"

#include <cctype>
#include <sstream>

namespace cyclomc {

std::string Sexpr::str() const {
    if (kind == Kind::Symbol) return symbol;
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) os << " ";
        os << items[i].str();
    }
    os << ")";
    return os.str();
}

namespace {

class Reader {
public:
    explicit Reader(const std::string & text) : text_(text) {}

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    Sexpr read() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
        char c = text_[pos_];
        if (c == '(') {
            Sexpr list;
            list.kind = Sexpr::Kind::List;
            list.line = line_;
            list.column = col_;
            advance();
            while (true) {
                skip_ws();
                if (pos_ >= text_.size()) throw ParseError("unterminated list", list.line, list.column);
                if (text_[pos_] == ')') {
                    advance();
                    return list;
                }
                list.items.push_back(read());
            }
        }
        if (c == ')') throw ParseError("unexpected ')'", line_, col_);
        Sexpr sym;
        sym.kind = Sexpr::Kind::Symbol;
        sym.line = line_;
        sym.column = col_;
        if (c == '|') {
            advance();
            while (pos_ < text_.size() && text_[pos_] != '|') {
                sym.symbol.push_back(text_[pos_]);
                advance();
            }
            if (pos_ >= text_.size()) throw ParseError("unterminated quoted symbol", sym.line, sym.column);
            advance();
            return sym;
        }
        if (c == '"') {
            sym.symbol.push_back('"');
            advance();
            while (pos_ < text_.size() && text_[pos_] != '"') {
                sym.symbol.push_back(text_[pos_]);
                advance();
            }
            if (pos_ >= text_.size()) throw ParseError("unterminated string", sym.line, sym.column);
            sym.symbol.push_back('"');
            advance();
            return sym;
        }
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != ';') {
            sym.symbol.push_back(text_[pos_]);
            advance();
        }
        return sym;
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    const std::string & text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

} // namespace

std::vector<Sexpr> parse_sexprs(const std::string & text) {
    Reader r(text);
    std::vector<Sexpr> out;
    while (!r.at_end()) out.push_back(r.read());
    return out;
}

Sexpr parse_sexpr(const std::string & text) {
    Reader r(text);
    Sexpr e = r.read();
    if (!r.at_end()) throw ParseError("trailing input after s-expression", 0, 0);
    return e;
}

} // namespace cyclomc
