#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <string>

#include "dyncalc/error.hpp"

namespace dyncalc {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational number. Always stored reduced (gcd(|num|, den) = 1) with a
// positive denominator; arithmetic never rounds.
class Rational {
  public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
    Rational(BigInt n) : num_(std::move(n)), den_(1) {}
    Rational(BigInt num, BigInt den);
    Rational(long long num, long long den) : Rational(BigInt(num), BigInt(den)) {}

    const BigInt& numerator() const { return num_; }
    const BigInt& denominator() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }
    bool is_nonneg_integer() const { return den_ == 1 && num_ >= 0; }

    // The value as a machine integer; only valid when is_integer() and the
    // magnitude fits.
    long long to_int() const;
    double to_double() const;

    Rational operator-() const;
    friend Rational operator+(const Rational&, const Rational&);
    friend Rational operator-(const Rational&, const Rational&);
    friend Rational operator*(const Rational&, const Rational&);
    friend Rational operator/(const Rational&, const Rational&);
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    // Exact integer power; e may be negative (throws DomainError on 0 base).
    Rational pow_int(long long e) const;

    static Rational factorial(unsigned n);

    // "p" or "p/q".
    std::string str() const;

  private:
    BigInt num_;
    BigInt den_;  // > 0
    void reduce();
};

}  // namespace dyncalc
