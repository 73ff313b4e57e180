#include "carnot/constants.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "carnot/error.hpp"

namespace carnot {

namespace {

void check_beta(double beta) {
    if (!(beta >= 0.0 && beta < 2.0)) throw DomainError("beta must lie in [0, 2)");
}

}  // namespace

double lanczos_gamma(double x) {
    // g = 671/128, 14 terms
    static constexpr std::array<double, 14> c = {
        57.1562356658629235,     -59.5979603554754912,    14.1360979747417471,
        -0.491913816097620199,   .339946499848118887e-4,  .465236289270485756e-4,
        -.983744753048795646e-4, .158088703224912494e-3,  -.210264441724104883e-3,
        .217439618115212643e-3,  -.164318106536763890e-3, .844182239838527433e-4,
        -.261908384015814087e-4, .368991826595316234e-5};
    if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos_gamma(1.0 - x));
    double t = x + 5.24218750000000000;
    t = (x + 0.5) * std::log(t) - t;
    double ser = 0.999999999999997092, y = x;
    for (double ci : c) ser += ci / ++y;
    return std::exp(t + std::log(2.5066282746310005 * ser / x));
}

std::optional<double> sobolev_A2(const Group& g) {
    if (g.kind() == GroupKind::Heisenberg) {
        const double n = g.order();
        return std::pow(lanczos_gamma(n + 1.0), 1.0 / (n + 1.0)) / (std::numbers::pi * n * n);
    }
    if (g.kind() == GroupKind::Euclidean) {
        const int n = g.dim();
        if (n <= 2) throw DomainError("the Euclidean Sobolev constant needs n >= 3");
        const double pi = std::numbers::pi;
        return std::pow(pi * n * n - 2.0 * pi * n, -0.5) * lanczos_gamma(n) / lanczos_gamma(0.5 * n);
    }
    return std::nullopt;
}

double hardy_C(HardySetting s, const Group& g) {
    if (s == HardySetting::HalfSpace) return 0.25;
    if (g.homogeneous_dim() < 3) throw DomainError("the horizontal Hardy constant needs Q >= 3");
    const double h = 0.5 * (g.horizontal_dim() - 2);
    return h * h;
}

Rational c_lh_a2_exponent(int Q, const Rational& beta) {
    const Rational q(Q);
    return Rational(2) * q * (Rational(2) - beta) / (q - beta);
}

Rational c_lh_ch_exponent(int Q, const Rational& beta) {
    const Rational q(Q);
    return -(beta * (q - Rational(2))) / (q - beta);
}

double c_lh(double A2, double C_H, int Q, double beta) {
    check_beta(beta);
    if (Q < 3) throw DomainError("C_LH needs Q >= 3");
    if (!(A2 > 0.0)) throw DomainError("A2 must be positive");
    if (C_H < 0.0) throw DomainError("C_H must be nonnegative");
    const Rational b = Rational::from_double(beta);
    const double ea = c_lh_a2_exponent(Q, b).to_double();
    if (beta == 0.0) return std::pow(A2, ea);
    if (C_H == 0.0) throw DegenerateError("C_LH is undefined for C_H = 0 and beta > 0");
    return std::pow(A2, ea) * std::pow(C_H, c_lh_ch_exponent(Q, b).to_double());
}

double gross_gamma(int Q, int N, double beta, double C_LH2) {
    check_beta(beta);
    if (Q < 3 || N < 1) throw DomainError("gross_gamma needs Q >= 3 and N >= 1");
    if (!(C_LH2 > 0.0)) throw DomainError("C_LH2 must be positive");
    const Rational b = Rational::from_double(beta);
    const Rational two(2), q(Q);
    const Rational outer = (q - b) / (two - b);
    const Rational front = (q - b) / (two * (two - b));
    const Rational expo = (Rational(N, 2) + Rational(1, 4)) * (two * (two - b) / (q - b)) - Rational(1);
    const double inner = front.to_double() * C_LH2 * std::exp(expo.to_double());
    return std::pow(inner, outer.to_double());
}

ConstantBundle make_bundle(const Group& g, HardySetting s, double beta,
                           std::optional<double> A2_override, std::optional<double> q,
                           bool with_gamma) {
    ConstantBundle b;
    b.beta = beta;
    b.q = q;
    std::optional<double> a2 = A2_override;
    if (!a2) a2 = sobolev_A2(g);
    if (!a2) throw ConfigError("no closed-form A2 for " + g.name() + "; supply A2 explicitly");
    b.A2 = *a2;
    b.C_H = hardy_C(s, g);
    if (beta == 0.0 || b.C_H > 0.0) b.C_LH = c_lh(b.A2, b.C_H, g.homogeneous_dim(), beta);
    if (with_gamma) {
        const double ch2 = hardy_C(HardySetting::Horizontal, g);
        const double clh2 = c_lh(b.A2, ch2, g.homogeneous_dim(), beta);
        b.gamma = gross_gamma(g.homogeneous_dim(), g.horizontal_dim(), beta, clh2);
    }
    return b;
}

std::string setting_name(HardySetting s) {
    return s == HardySetting::HalfSpace ? "halfspace" : "horizontal";
}

}  // namespace carnot
