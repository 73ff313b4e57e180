#pragma once

#include <optional>
#include <string>

#include "carnot/group.hpp"
#include "carnot/rational.hpp"

namespace carnot {

enum class HardySetting { HalfSpace, Horizontal };

struct ConstantBundle {
    double A2 = 0.0;
    double C_H = 0.0;
    double beta = 0.0;
    std::optional<double> q;
    std::optional<double> C_LH;
    std::optional<double> gamma;
};

// Lanczos approximation (g = 671/128, 14 terms), reflection below 1/2.
double lanczos_gamma(double x);

// Best Sobolev constant for Heisenberg and Euclidean groups, nullopt otherwise.
std::optional<double> sobolev_A2(const Group& g);

double hardy_C(HardySetting s, const Group& g);

// A2^{2Q(2-beta)/(Q-beta)} C_H^{-beta(Q-2)/(Q-beta)}
double c_lh(double A2, double C_H, int Q, double beta);

// ((Q-beta)/(2(2-beta)) C_LH2 e^{(N/2+1/4)(2(2-beta)/(Q-beta)) - 1})^{(Q-beta)/(2-beta)}
double gross_gamma(int Q, int N, double beta, double C_LH2);

// C_LH exponents as exact rationals.
Rational c_lh_a2_exponent(int Q, const Rational& beta);
Rational c_lh_ch_exponent(int Q, const Rational& beta);

// Fills the bundle for a group and setting. A2 falls back to the override when
// no closed form exists; C_LH is left empty when it is degenerate and gamma is
// computed only when requested (it needs the horizontal C_LH).
ConstantBundle make_bundle(const Group& g, HardySetting s, double beta,
                           std::optional<double> A2_override = std::nullopt,
                           std::optional<double> q = std::nullopt, bool with_gamma = false);

std::string setting_name(HardySetting s);

}  // namespace carnot
