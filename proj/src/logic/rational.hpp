/*
 * Copyright (c) 2026, the cyclomc authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef CYCLOMC_LOGIC_RATIONAL_HPP
#define CYCLOMC_LOGIC_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <string>

namespace cyclomc {

/// Arbitrary-precision rational, always kept in canonical (gcd-reduced,
/// positive-denominator) form. All arithmetic in the solver is exact.
class Rational {
public:
    Rational() : value_(0) {}
    Rational(long n) : value_(n) {}
    Rational(long num, long den) : value_(num, den) { value_.canonicalize(); }
    explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }
    explicit Rational(const mpz_class & z) : value_(z) {}

    static Rational from_string(const std::string & text);

    bool is_zero() const { return sgn(value_) == 0; }
    bool is_integer() const { return value_.get_den() == 1; }
    bool is_negative() const { return sgn(value_) < 0; }
    int sign() const { return sgn(value_); }

    mpz_class numerator() const { return value_.get_num(); }
    mpz_class denominator() const { return value_.get_den(); }

    Rational floor() const;
    Rational ceil() const;

    Rational operator-() const { return Rational(mpq_class(-value_)); }
    Rational & operator+=(const Rational & o) { value_ += o.value_; return *this; }
    Rational & operator-=(const Rational & o) { value_ -= o.value_; return *this; }
    Rational & operator*=(const Rational & o) { value_ *= o.value_; return *this; }
    Rational & operator/=(const Rational & o);

    friend Rational operator+(Rational a, const Rational & b) { return a += b; }
    friend Rational operator-(Rational a, const Rational & b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational & b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational & b) { return a /= b; }

    friend bool operator==(const Rational & a, const Rational & b) { return a.value_ == b.value_; }
    friend bool operator!=(const Rational & a, const Rational & b) { return a.value_ != b.value_; }
    friend bool operator<(const Rational & a, const Rational & b) { return a.value_ < b.value_; }
    friend bool operator<=(const Rational & a, const Rational & b) { return a.value_ <= b.value_; }
    friend bool operator>(const Rational & a, const Rational & b) { return a.value_ > b.value_; }
    friend bool operator>=(const Rational & a, const Rational & b) { return a.value_ >= b.value_; }

    /// Decimal string, "num/den" when not integral.
    std::string str() const { return value_.get_str(); }

    const mpq_class & raw() const { return value_; }

private:
    mpq_class value_;
};

std::ostream & operator<<(std::ostream & os, const Rational & r);

} // namespace cyclomc

#endif
