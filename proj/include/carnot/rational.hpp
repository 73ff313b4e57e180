#pragma once

#include <cstdint>
#include <string>

namespace carnot {

// Exact rational with 64-bit parts; overflow throws DomainError.
class Rational {
public:
    Rational(std::int64_t num = 0, std::int64_t den = 1);

    // Smallest-denominator rational that converts back to exactly x
    // (denominator at most 2^40), e.g. 0.1 -> 1/10.
    static Rational from_double(double x);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a) { return Rational(-a.num_, a.den_); }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

private:
    struct Raw {};
    Rational(std::int64_t num, std::int64_t den, Raw) : num_(num), den_(den) {}
    static Rational reduce(__int128 n, __int128 d);
    std::int64_t num_, den_;
};

}  // namespace carnot
