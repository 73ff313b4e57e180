#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "carnot/constants.hpp"
#include "carnot/error.hpp"

using namespace carnot;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// mpmath at 50 digits
constexpr double kA2E3 = 0.73510519389572273268;
constexpr double kA2E4 = 1.1968268412042980338;
constexpr double kA2E5 = 2.6299922946623991704;
constexpr double kA2E6 = 6.9098829894267095853;
constexpr double kA2H2 = 0.10026133149814978123;
constexpr double kA2H3 = 0.055353543839014878152;

}  // namespace

TEST(Gamma, LanczosAgainstHighPrecision) {
    const std::pair<double, double> cases[] = {
        {0.1, 9.5135076986687312858},   {0.3, 2.9915689876875907446},   {1.5, 0.88622692545275801365},
        {2.5, 1.3293403881791370205},   {7.25, 1155.3810139199896872},  {12.5, 136843365.46556585726}};
    for (auto [x, g] : cases) EXPECT_LT(rel(lanczos_gamma(x), g), 1e-13) << x;
    for (int n = 1; n <= 15; ++n) {
        double f = 1.0;
        for (int k = 2; k < n; ++k) f *= k;
        EXPECT_LT(rel(lanczos_gamma(n), f), 1e-13) << n;
    }
}

TEST(Gamma, LanczosMatchesTgammaOnRange) {
    for (double x = 0.05; x < 20.0; x += 0.0371) EXPECT_LT(rel(lanczos_gamma(x), std::tgamma(x)), 1e-13) << x;
}

TEST(SobolevA2, ClosedForms) {
    EXPECT_LT(rel(*sobolev_A2(Group::heisenberg(1)), 1.0 / std::numbers::pi), 1e-12);
    EXPECT_LT(rel(*sobolev_A2(Group::euclidean(3)), 4.0 / (std::sqrt(3.0) * std::numbers::pi)), 1e-12);
    EXPECT_LT(rel(*sobolev_A2(Group::euclidean(3)), kA2E3), 1e-12);
    EXPECT_LT(rel(*sobolev_A2(Group::euclidean(4)), kA2E4), 1e-12);
    EXPECT_LT(rel(*sobolev_A2(Group::euclidean(5)), kA2E5), 1e-12);
    EXPECT_LT(rel(*sobolev_A2(Group::euclidean(6)), kA2E6), 1e-12);
    EXPECT_LT(rel(*sobolev_A2(Group::heisenberg(2)), kA2H2), 1e-12);
    EXPECT_LT(rel(*sobolev_A2(Group::heisenberg(3)), kA2H3), 1e-12);
}

TEST(SobolevA2, UnavailableOrUndefined) {
    EXPECT_FALSE(sobolev_A2(Group::custom({2, 1}, {{{0, -0.5}}, {{0.5, 0}}})).has_value());
    EXPECT_THROW(sobolev_A2(Group::euclidean(2)), DomainError);
}

TEST(HardyConstant, Settings) {
    EXPECT_EQ(hardy_C(HardySetting::HalfSpace, Group::heisenberg(1)), 0.25);
    EXPECT_EQ(hardy_C(HardySetting::HalfSpace, Group::euclidean(3)), 0.25);
    EXPECT_EQ(hardy_C(HardySetting::Horizontal, Group::euclidean(4)), 1.0);
    EXPECT_EQ(hardy_C(HardySetting::Horizontal, Group::euclidean(3)), 0.25);
    EXPECT_EQ(hardy_C(HardySetting::Horizontal, Group::heisenberg(1)), 0.0);
}

TEST(LogHardyConstant, BetaZeroIsFourthPower) {
    for (double a : {0.1, 1.0 / std::numbers::pi, 0.7351, 2.5})
        for (double ch : {0.0, 0.25, 1.0, 7.0}) {
            const double a4 = a * a * a * a;
            for (int Q = 3; Q <= 8; ++Q) EXPECT_EQ(c_lh(a, ch, Q, 0.0), std::pow(a, 4.0));
            EXPECT_LT(rel(c_lh(a, ch, 4, 0.0), a4), 1e-15);
        }
}

TEST(LogHardyConstant, Specializations) {
    for (int Q = 3; Q <= 8; ++Q)
        for (int N = 3; N <= 6; ++N)
            for (double b : {0.0, 0.5, 1.0, 1.5}) {
                const double A2 = 0.37 + 0.11 * Q;
                const double e = 2.0 * Q * (2.0 - b) / (Q - b);
                const double half = std::pow(A2, e) * std::pow(2.0, 2.0 * b * (Q - 2) / (Q - b));
                EXPECT_LT(rel(c_lh(A2, 0.25, Q, b), half), 1e-14) << Q << " " << b;
                const double h = 0.5 * (N - 2);
                const double hor = std::pow(A2, e) * std::pow(h, -2.0 * b * (Q - 2) / (Q - b));
                EXPECT_LT(rel(c_lh(A2, h * h, Q, b), hor), 1e-14) << Q << " " << N << " " << b;
            }
}

TEST(LogHardyConstant, ContinuousAtBetaZero) {
    // gap(beta) = beta |d/dbeta log C_LH| + O(beta^2) with
    // d/dbeta log C_LH(0) = 2(2-Q)/Q log A2 - (Q-2)/Q log C_H
    const double A2 = 0.7351051938957227;
    for (int Q : {3, 4, 6})
        for (double ch : {0.25, 1.0, 4.0}) {
            const double slope = 2.0 * (2 - Q) / Q * std::log(A2) - (Q - 2.0) / Q * std::log(ch);
            const double c0 = c_lh(A2, ch, Q, 0.0);
            const double gap = rel(c_lh(A2, ch, Q, 1e-8), c0);
            EXPECT_NEAR(gap, 1e-8 * std::abs(slope), 1e-8 * std::abs(slope) * 1e-4 + 1e-15);
            EXPECT_LT(rel(c_lh(A2, ch, Q, 1e-12), c0), 1e-10);
        }
}

TEST(LogHardyConstant, DegenerateHorizontalConstant) {
    EXPECT_THROW(c_lh(0.3, 0.0, 4, 0.5), DegenerateError);
    EXPECT_THROW(c_lh(0.3, 0.25, 4, 2.0), DomainError);
    EXPECT_THROW(c_lh(0.3, 0.25, 2, 0.5), DomainError);
}

TEST(LogHardyConstant, Oracles) {
    EXPECT_LT(rel(c_lh(kA2E4, 1.0, 4, 1.0), 1.6146690524133966662), 1e-13);
    EXPECT_LT(rel(c_lh(kA2H2, 0.25, 6, 0.5), 0.00089107275358448020513), 1e-13);
}

TEST(Exponents, RationalAndExact) {
    EXPECT_EQ(c_lh_a2_exponent(4, Rational(0)), Rational(4));
    EXPECT_EQ(c_lh_a2_exponent(4, Rational(1)), Rational(8, 3));
    EXPECT_EQ(c_lh_ch_exponent(4, Rational(1)), Rational(-2, 3));
    EXPECT_EQ(c_lh_ch_exponent(7, Rational(0)), Rational(0));
    // beta/2 + Q(2-beta)/(2(Q-2)) = (Q-beta)/(Q-2)
    for (int Q = 3; Q <= 12; ++Q)
        for (int k = 0; k <= 8; ++k) {
            const Rational b(k, 4), q(Q), two(2);
            EXPECT_EQ(b / two + q * (two - b) / (two * (q - two)), (q - b) / (q - two)) << Q << " " << k;
        }
}

TEST(GrossGamma, Oracles) {
    const Group e3 = Group::euclidean(3), h1 = Group::heisenberg(1);
    const auto b0 = make_bundle(e3, HardySetting::Horizontal, 0.0, std::nullopt, std::nullopt, true);
    EXPECT_LT(rel(*b0.gamma, 0.75731717560980979167), 1e-12);
    const auto b1 = make_bundle(e3, HardySetting::Horizontal, 1.0, std::nullopt, std::nullopt, true);
    EXPECT_LT(rel(*b1.gamma, 2.8287766717670651013), 1e-12);
    const auto bh = make_bundle(h1, HardySetting::Horizontal, 0.0, std::nullopt, std::nullopt, true);
    EXPECT_LT(rel(*bh.gamma, 0.0001737593804465322571), 1e-12);
    const double pi4 = std::pow(std::numbers::pi, -4.0);
    EXPECT_LT(rel(*bh.gamma, std::pow(pi4 * std::exp(0.25), 2.0)), 1e-12);
    const auto b4 = make_bundle(Group::euclidean(4), HardySetting::Horizontal, 1.0, std::nullopt, std::nullopt, true);
    EXPECT_LT(rel(*b4.gamma, 63.674576382233983138), 1e-12);
}

TEST(GrossGamma, ExponentAtBetaZeroQFour) {
    // (Q - beta)/(2 - beta) = 2: gamma is the square of the inner factor
    const double c = 0.0123;
    const double inner = 1.0 * c * std::exp((2.0 / 2 + 0.25) * 1.0 - 1.0);
    EXPECT_LT(rel(gross_gamma(4, 2, 0.0, c), inner * inner), 1e-15);
}

TEST(Bundle, Fields) {
    const auto b = make_bundle(Group::euclidean(4), HardySetting::Horizontal, 1.0);
    EXPECT_LT(rel(b.A2, kA2E4), 1e-12);
    EXPECT_EQ(b.C_H, 1.0);
    ASSERT_TRUE(b.C_LH.has_value());
    EXPECT_FALSE(b.gamma.has_value());
    const auto h = make_bundle(Group::heisenberg(1), HardySetting::Horizontal, 0.5);
    EXPECT_FALSE(h.C_LH.has_value());
    const auto c = make_bundle(Group::custom({2, 1}, {{{0, -0.5}}, {{0.5, 0}}}), HardySetting::HalfSpace, 0.5, 0.2);
    EXPECT_EQ(c.A2, 0.2);
    EXPECT_THROW(make_bundle(Group::custom({2, 1}, {{{0, -0.5}}, {{0.5, 0}}}), HardySetting::HalfSpace, 0.5),
                 ConfigError);
}
