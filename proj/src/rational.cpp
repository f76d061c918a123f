#include "sumlevel/rational.hpp"

#include "sumlevel/errors.hpp"

#include <ostream>

namespace sumlevel {

Rational::Rational(long num, long den) : Rational(BigInt(num), BigInt(den)) {}

Rational::Rational(const BigInt& num, const BigInt& den) {
    if (sgn(den) == 0) {
        throw DomainError("rational with zero denominator");
    }
    v_ = mpq_class(num, den);
    v_.canonicalize();
}

Rational::Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) {
            return Rational(BigInt(std::string(text)), BigInt(1));
        }
        return Rational(BigInt(std::string(text.substr(0, slash))),
                        BigInt(std::string(text.substr(slash + 1))));
    } catch (const std::invalid_argument&) {
        throw DomainError("cannot parse rational '" + std::string(text) + "'");
    }
}

double Rational::to_double() const { return v_.get_d(); }

std::string Rational::str() const { return numerator().get_str() + "/" + denominator().get_str(); }

Rational Rational::reciprocal() const {
    if (is_zero()) {
        throw DomainError("reciprocal of zero");
    }
    return Rational(denominator(), numerator());
}

BigInt Rational::floor() const {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), numerator().get_mpz_t(), denominator().get_mpz_t());
    return q;
}

Rational& Rational::operator+=(const Rational& o) {
    v_ += o.v_;
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    v_ -= o.v_;
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    v_ *= o.v_;
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) {
        throw DomainError("division by zero");
    }
    v_ /= o.v_;
    return *this;
}

Rational operator-(const Rational& a) {
    Rational r;
    r.v_ = -a.v_;
    return r;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational mediant(const Rational& x, const Rational& y) {
    return Rational(BigInt(x.numerator() + y.numerator()), BigInt(x.denominator() + y.denominator()));
}

} // namespace sumlevel
