#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "carnot/functionals.hpp"

namespace carnot {

struct NelderMeadOptions {
    int max_iter = 200;
    double xtol = 1e-4;
    double ftol = 1e-6;
    double alpha = 1.0;  // reflection
    double gamma = 2.0;  // expansion
    double rho = 0.5;    // contraction
    double sigma = 0.5;  // shrink
    double initial_step = 0.1;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    std::vector<double> best_history;  // best value after each iteration
};

// Box-constrained Nelder-Mead; the simplex lives in coordinates rescaled to the
// unit cube, so xtol is relative to the box. Evaluations that throw
// DegenerateError count as +inf.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const std::vector<double>& lo,
                             const std::vector<double>& hi, const NelderMeadOptions& opts = {});

struct ProbeFamily {
    std::string name;
    std::vector<std::string> params;
    std::vector<double> lo, hi, theta0;
    std::function<TestFunction(std::span<const double>)> make;
};

// theta = (a, ell): |x'|^a with cutoffs at r_in = e^{-ell/2}, r_out = e^{ell/2}.
ProbeFamily radial_power_probe(const Group& g);
// theta = (b, ell, L): dist^b with log cutoffs at e^{-ell} and 1, transverse width L.
ProbeFamily halfspace_power_probe(const Group& g, const HalfSpace& h);
// theta = (t, ratio): bump at distance t along the normal with radius ratio * t.
ProbeFamily halfspace_bump_probe(const Group& g, const HalfSpace& h);

struct QuotientValue {
    double value = 0.0;
    double err = 0.0;
    bool converged = true;
};

// int |grad_H u|^2 / int u^2 / w^2
QuotientValue rayleigh_quotient(const Group& g, const Weight& w, const TestFunction& u,
                                const QuadOptions& opts = {});
QuotientValue rayleigh_quotient(const Group& g, const Weight& w, const ProbeFamily& family,
                                std::span<const double> theta, const QuadOptions& opts = {});

struct ProbeResult {
    std::vector<double> theta_star;
    double quotient_min = 0.0;
    double reference_constant = 0.0;
    double gap = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
    double min_evaluated = 0.0;
    std::vector<double> best_history;
    std::string family;
    bool quad_converged = true;  // every quotient evaluation met the quadrature tolerance
    double quad_err = 0.0;       // error estimate of the quotient at theta_star
};

ProbeResult minimize_quotient(const Group& g, const Weight& w, const ProbeFamily& family,
                              std::vector<double> theta0, const NelderMeadOptions& opts = {},
                              const QuadOptions& qopts = {});

}  // namespace carnot
