#include "gf/exact.hpp"

#include <algorithm>

namespace gf {

Rational::Rational(long num, long den) {
    if (den == 0)
        throw MathError("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (sgn(den) == 0)
        throw MathError("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational Rational::operator/(const Rational& o) const {
    if (o.is_zero())
        throw MathError("division by zero");
    return Rational(mpq_class(q_ / o.q_));
}

Rational Rational::parse(const std::string& text) {
    if (text.empty())
        throw ParseError("empty rational literal");
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            mpz_class n(text);
            return Rational(n);
        }
        mpz_class n(text.substr(0, slash));
        mpz_class d(text.substr(slash + 1));
        if (sgn(d) == 0)
            throw ParseError("zero denominator in '" + text + "'");
        return Rational(n, d);
    } catch (const std::invalid_argument&) {
        throw ParseError("bad rational literal '" + text + "'");
    }
}

std::string Rational::str() const {
    if (den() == 1)
        return num().get_str();
    return num().get_str() + "/" + den().get_str();
}

Rational rat(long num, long den) {
    return Rational(num, den);
}

Rational pow_int(const Rational& base, long exp) {
    if (exp == 0)
        return Rational(1);
    if (base.is_zero()) {
        if (exp < 0)
            throw MathError("0 raised to a negative exponent");
        return Rational(0);
    }
    unsigned long e = exp < 0 ? static_cast<unsigned long>(-exp) : static_cast<unsigned long>(exp);
    mpz_class pn, pd;
    mpz_pow_ui(pn.get_mpz_t(), base.num().get_mpz_t(), e);
    mpz_pow_ui(pd.get_mpz_t(), base.den().get_mpz_t(), e);
    if (exp < 0)
        return Rational(pd, pn);
    return Rational(pn, pd);
}

Rational dot(std::span<const Rational> u, std::span<const Rational> v) {
    if (u.size() != v.size())
        throw MathError("dot product of vectors with different lengths");
    Rational acc;
    for (size_t i = 0; i < u.size(); ++i)
        acc += u[i] * v[i];
    return acc;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows)
        throw MathError("matrix product dimension mismatch");
    Matrix c(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int k = 0; k < a.cols; ++k) {
            const Rational& aik = a.at(i, k);
            if (aik.is_zero())
                continue;
            for (int j = 0; j < b.cols; ++j)
                c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

int rank(const Matrix& a) {
    if (a.rows == 0 || a.cols == 0)
        return 0;

    // Scale each row by the lcm of its denominators; row scaling by a
    // positive constant keeps the rank.
    std::vector<mpz_class> m(size_t(a.rows) * size_t(a.cols));
    for (int i = 0; i < a.rows; ++i) {
        mpz_class l(1);
        for (int j = 0; j < a.cols; ++j)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a.at(i, j).den().get_mpz_t());
        for (int j = 0; j < a.cols; ++j) {
            const Rational& e = a.at(i, j);
            m[size_t(i) * a.cols + j] = e.num() * (l / e.den());
        }
    }
    auto at = [&](int r, int c) -> mpz_class& { return m[size_t(r) * a.cols + c]; };

    int rk = 0;
    int row = 0;
    mpz_class prev(1);
    for (int col = 0; col < a.cols && row < a.rows; ++col) {
        int pivot = -1;
        for (int i = row; i < a.rows; ++i)
            if (sgn(at(i, col)) != 0) {
                pivot = i;
                break;
            }
        if (pivot < 0)
            continue;
        if (pivot != row)
            for (int j = 0; j < a.cols; ++j)
                std::swap(at(pivot, j), at(row, j));

        // One fraction-free elimination step: entries stay minors of the
        // input, so the division by the previous pivot is exact.
        mpz_class t;
        for (int i = row + 1; i < a.rows; ++i) {
            for (int j = col + 1; j < a.cols; ++j) {
                t = at(row, col) * at(i, j) - at(i, col) * at(row, j);
                mpz_divexact(at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            at(i, col) = 0;
        }
        prev = at(row, col);
        ++row;
        ++rk;
    }
    return rk;
}

} // namespace gf
