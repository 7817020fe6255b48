#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "gf/error.hpp"

namespace gf {

// Arbitrary-precision rational, always in canonical form: denominator > 0,
// gcd(|num|, den) = 1. Backed by GMP. Immutable in spirit: all operations
// return fresh values.
class Rational {
  public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {}
    Rational(const mpz_class& n) : q_(n) {}
    Rational(long num, long den);
    Rational(const mpz_class& num, const mpz_class& den);

    // Parses "p" or "p/q". Throws ParseError on anything else.
    static Rational parse(const std::string& text);

    const mpz_class& num() const { return q_.get_num(); }
    const mpz_class& den() const { return q_.get_den(); }

    bool is_zero() const { return sgn(q_) == 0; }
    int sign() const { return sgn(q_); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational operator+(const Rational& o) const { return Rational(mpq_class(q_ + o.q_)); }
    Rational operator-(const Rational& o) const { return Rational(mpq_class(q_ - o.q_)); }
    Rational operator*(const Rational& o) const { return Rational(mpq_class(q_ * o.q_)); }
    Rational operator/(const Rational& o) const;
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }

    bool operator==(const Rational& o) const { return q_ == o.q_; }
    bool operator!=(const Rational& o) const { return q_ != o.q_; }
    bool operator<(const Rational& o) const { return q_ < o.q_; }
    bool operator<=(const Rational& o) const { return q_ <= o.q_; }
    bool operator>(const Rational& o) const { return q_ > o.q_; }
    bool operator>=(const Rational& o) const { return q_ >= o.q_; }

    // Canonical text form: "p" for integers, "p/q" otherwise.
    std::string str() const;

  private:
    explicit Rational(mpq_class q) : q_(std::move(q)) {}
    mpq_class q_;
};

// den != 0 required; the sign ends up on the numerator.
Rational rat(long num, long den);

// Exact base^exp. exp may be negative iff base != 0.
Rational pow_int(const Rational& base, long exp);

// Exact inner product; lengths must match.
Rational dot(std::span<const Rational> u, std::span<const Rational> v);

// Dense row-major matrix of rationals.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<Rational> entries; // rows * cols

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), entries(size_t(r) * size_t(c)) {}

    Rational& at(int r, int c) { return entries[size_t(r) * cols + c]; }
    const Rational& at(int r, int c) const { return entries[size_t(r) * cols + c]; }
};

Matrix operator*(const Matrix& a, const Matrix& b);

// Exact rank over the rationals: rows are scaled integral, then eliminated
// fraction-free (Bareiss). Pivots: columns left to right, rows top-down,
// first nonzero wins.
int rank(const Matrix& a);

} // namespace gf
