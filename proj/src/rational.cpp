#include "dyncalc/rational.hpp"

#include <boost/multiprecision/integer.hpp>

#include <limits>

namespace dyncalc {

Rational::Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ == 0) throw DomainError("rational with zero denominator");
    reduce();
}

void Rational::reduce() {
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    if (num_ == 0) {
        den_ = 1;
        return;
    }
    BigInt g = boost::multiprecision::gcd(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

long long Rational::to_int() const {
    if (den_ != 1) throw DomainError("rational " + str() + " is not an integer");
    if (num_ > std::numeric_limits<long long>::max() || num_ < std::numeric_limits<long long>::min())
        throw DomainError("integer " + str() + " does not fit in 64 bits");
    return num_.convert_to<long long>();
}

double Rational::to_double() const {
    return num_.convert_to<double>() / den_.convert_to<double>();
}

Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw DomainError("division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    BigInt lhs = a.num_ * b.den_;
    BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Rational Rational::pow_int(long long e) const {
    if (e == 0) return Rational(1);
    if (is_zero() && e < 0) throw DomainError("zero base with negative exponent");
    bool invert = e < 0;
    unsigned long long k = invert ? static_cast<unsigned long long>(-(e + 1)) + 1ULL
                                  : static_cast<unsigned long long>(e);
    BigInt n = 1, d = 1;
    BigInt bn = num_, bd = den_;
    while (k > 0) {
        if (k & 1ULL) {
            n *= bn;
            d *= bd;
        }
        bn *= bn;
        bd *= bd;
        k >>= 1ULL;
    }
    return invert ? Rational(d, n) : Rational(n, d);
}

Rational Rational::factorial(unsigned n) {
    BigInt r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return Rational(r);
}

std::string Rational::str() const {
    std::string s = num_.str();
    if (den_ != 1) s += "/" + den_.str();
    return s;
}

}  // namespace dyncalc
