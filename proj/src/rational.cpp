#include "carnot/rational.hpp"

#include <cmath>
#include <limits>

#include "carnot/error.hpp"

namespace carnot {

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) : Rational(reduce(num, den)) {}

Rational Rational::reduce(__int128 n, __int128 d) {
    if (d == 0) throw DomainError("rational division by zero");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
    if (n > lim || -n > lim || d > lim) throw DomainError("rational overflow");
    return Rational(static_cast<std::int64_t>(n), static_cast<std::int64_t>(d), Raw{});
}

Rational Rational::from_double(double x) {
    if (!std::isfinite(x)) throw DomainError("cannot convert a non-finite value to a rational");
    // continued-fraction convergents until one reproduces x exactly
    double r = x;
    __int128 h0 = 1, h1 = static_cast<__int128>(std::floor(r));
    __int128 k0 = 0, k1 = 1;
    for (int it = 0; it < 64; ++it) {
        if (static_cast<double>(h1) / static_cast<double>(k1) == x) return reduce(h1, k1);
        const double frac = r - std::floor(r);
        if (frac == 0.0) break;
        r = 1.0 / frac;
        const __int128 a = static_cast<__int128>(std::floor(r));
        const __int128 h2 = a * h1 + h0, k2 = a * k1 + k0;
        if (k2 > (static_cast<__int128>(1) << 40)) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    if (static_cast<double>(h1) / static_cast<double>(k1) == x) return reduce(h1, k1);
    throw DomainError("value has no short rational representation");
}

std::string Rational::str() const {
    return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational::reduce(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                            static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    return Rational::reduce(static_cast<__int128>(a.num_) * b.num_,
                            static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw DomainError("rational division by zero");
    return Rational::reduce(static_cast<__int128>(a.num_) * b.den_,
                            static_cast<__int128>(a.den_) * b.num_);
}

}  // namespace carnot
