#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "carnot/domain.hpp"
#include "carnot/group.hpp"

namespace carnot {

// Smooth compactly supported function with analytic Euclidean gradient.
class TestFunction {
public:
    struct Impl {
        virtual ~Impl() = default;
        // Writes the full gradient into grad and returns the value.
        virtual double eval(std::span<const double> x, std::span<double> grad) const = 0;
    };

    TestFunction(std::shared_ptr<const Impl> impl, int dim, Box support, Domain domain,
                 double margin, bool radial, std::string id);

    int dim() const { return dim_; }
    double operator()(std::span<const double> x) const;
    double value_and_grad(std::span<const double> x, std::span<double> grad) const;
    std::vector<double> grad(std::span<const double> x) const;

    const Box& support_box() const { return support_; }
    // Integration domain covering the support.
    const Domain& domain() const { return domain_; }
    // Radius around the singular set |x'| = 0 on which the function vanishes.
    double margin() const { return margin_; }
    // Depends on x' only through |x'|.
    bool radial() const { return radial_; }
    const std::string& id() const { return id_; }
    TestFunction with_id(std::string id) const;

private:
    std::shared_ptr<const Impl> impl_;
    int dim_;
    Box support_;
    Domain domain_;
    double margin_;
    bool radial_;
    std::string id_;
};

// C^inf step: 0 for t <= 0, 1 for t >= 1.
struct Step {
    double value;
    double deriv;
};
Step smooth_step(double t);

TestFunction bump(std::vector<double> center, double radius, double amplitude = 1.0);

// |x'|^a chi(|x'|) eta(x''), chi = 1 on [2 r_in, r_out/2] with log-scale
// transitions, eta = 1 on |x''_j| <= r_out^{w_j}/2.
TestFunction radial_power_family(const Group& g, double a, double r_in, double r_out);

// exp(-|x|^2/(2 sigma^2)) chi_R(|x|), optionally times a first-stratum hole that
// vanishes for |x'| <= hole and equals 1 for |x'| >= 2 hole.
TestFunction gaussian_cutoff(const Group& g, double sigma, double R, double hole = 0.0);

// dist^b chi(dist) prod_{j != axis} zeta(x_j / L) for a half-space whose normal
// is a coordinate axis; chi = 1 on [2 e^-ell, 1/2], 0 outside (e^-ell, 1).
TestFunction halfspace_power_profile(const Group& g, const HalfSpace& h, double b, double ell,
                                     double L);

// Wraps a callable returning the value and writing the gradient; the domain is
// the support box.
TestFunction make_function(int dim, std::function<double(std::span<const double>, std::span<double>)> fn,
                           Box support, std::string id = "custom");

TestFunction scaled(const TestFunction& f, double lambda);
// x -> f(D_r x)
TestFunction dilated(const TestFunction& f, const Group& g, double r);

std::vector<double> fd_gradient(const TestFunction& f, std::span<const double> x, double h);

}  // namespace carnot
