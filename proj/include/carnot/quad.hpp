#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "carnot/domain.hpp"
#include "carnot/group.hpp"

namespace carnot {

struct Measure {
    enum class Tag { Lebesgue, SemiGaussian };

    Tag tag = Tag::Lebesgue;
    double gamma = 1.0;
    int first_dim = 0;

    static Measure lebesgue() { return {}; }
    // gamma * exp(-|x'|^2/2) dx' dx'' with x' the first first_dim coordinates.
    static Measure semi_gaussian(double gamma, int first_dim);

    double density(std::span<const double> x) const;
};

struct QuadOptions {
    double tol = 1e-8;
    std::size_t max_nodes = std::size_t{1} << 22;
};

struct QuadResult {
    double value = 0.0;
    double err_est = 0.0;
    std::size_t nodes_used = 0;
    bool converged = false;
    std::vector<double> levels;  // value at each refinement level
};

struct MultiQuadResult {
    std::vector<double> value;
    std::vector<double> err_est;
    std::size_t nodes_used = 0;
    bool converged = false;
    int level = 0;
};

using Integrand = std::function<double(std::span<const double>)>;
using MultiIntegrand = std::function<void(std::span<const double>, std::span<double>)>;

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights);

// Integrates ncomp integrands in one sweep; refinement stops once every component
// satisfies |L_k - L_{k-1}| <= tol (1 + |L_k|) (k >= 2) or the node budget would
// be exceeded.
MultiQuadResult integrate_multi(const MultiIntegrand& f, std::size_t ncomp, const Domain& domain,
                                const Measure& measure, const QuadOptions& opts);

QuadResult integrate(const Integrand& f, const Domain& domain, const Measure& measure,
                     const QuadOptions& opts);
QuadResult integrate(const Integrand& f, const Box& box, const Measure& measure,
                     const QuadOptions& opts);

// Integrates f(x) |x'|^-alpha over r_lo <= |x'| <= r_hi times the higher box.
QuadResult integrate_polar_first_stratum(const Integrand& f, const Group& g, double r_lo,
                                         double r_hi, const Box& higher, double alpha,
                                         const Measure& measure, const QuadOptions& opts);

QuadResult integrate_halfspace(const Integrand& f, const HalfSpace& h, const Box& box,
                               const Measure& measure, const QuadOptions& opts);

// Surface area of the unit sphere in R^d.
double sphere_area(int d);

}  // namespace carnot
