#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace sumlevel {

using BigInt = mpz_class;

/// Exact fraction in lowest terms with a positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(long value) : v_(value) {} // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    Rational(const BigInt& num, const BigInt& den);
    explicit Rational(const mpq_class& q);

    /// Parses "p/q" or "p".
    static Rational parse(std::string_view text);

    const BigInt& numerator() const { return v_.get_num(); }
    const BigInt& denominator() const { return v_.get_den(); }
    const mpq_class& raw() const { return v_; }

    double to_double() const;
    /// Always "p/q", including integers ("1/1").
    std::string str() const;

    bool is_zero() const { return sgn(v_) == 0; }
    int sign() const { return sgn(v_); }

    Rational reciprocal() const;
    /// Largest integer <= value.
    BigInt floor() const;

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a);

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

private:
    mpq_class v_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// Mediant (a+c)/(b+d) of a/b and c/d, taken on the stored lowest-terms representations.
Rational mediant(const Rational& x, const Rational& y);

} // namespace sumlevel
