/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "logic/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace cyclomc {

Rational Rational::from_string(const std::string & text) {
    mpq_class v;
    if (v.set_str(text, 10) != 0) { throw std::invalid_argument("not a rational literal: " + text); }
    v.canonicalize();
    return Rational(std::move(v));
}

Rational & Rational::operator/=(const Rational & o) {
    if (o.is_zero()) { throw std::domain_error("rational division by zero"); }
    value_ /= o.value_;
    return *this;
}

Rational Rational::floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), value_.get_num().get_mpz_t(), value_.get_den().get_mpz_t());
    return Rational(q);
}

Rational Rational::ceil() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), value_.get_num().get_mpz_t(), value_.get_den().get_mpz_t());
    return Rational(q);
}

std::ostream & operator<<(std::ostream & os, const Rational & r) { return os << r.str(); }

} // namespace cyclomc
