#pragma once

#include <variant>
#include <vector>

namespace carnot {

class Group;

struct Box {
    std::vector<double> lo, hi;

    int dim() const { return static_cast<int>(lo.size()); }
};

// One axis of a tensor cell grid. Breakpoints split the axis into segments; a
// log-scale axis is integrated in s = log(x - origin) and long segments are cut
// into pieces no wider than max_log_width in s.
struct Axis {
    std::vector<double> breaks;
    bool log_scale = false;
    double origin = 0.0;
    double max_log_width = 2.0;
};

struct CellGrid {
    std::vector<Axis> axes;
};

// {center + radius * diag(scale) * y : |y| <= 1}, integrated in polar
// coordinates about the center.
struct Ellipsoid {
    std::vector<double> center;
    double radius = 1.0;
    std::vector<double> scale;
};

// First-stratum shell r_lo <= |x'| <= r_hi times a cell grid in the higher
// coordinates. r_breaks are interior radial breakpoints. radial = true declares
// the integrand invariant under rotations of x', which reduces the angular rule
// to a single direction. singular_exponent is the largest alpha of an |x'|^-alpha
// factor the integrand may carry; it only steers grading toward r = 0.
struct PolarRegion {
    int first_dim = 1;
    double r_lo = 0.0;
    double r_hi = 1.0;
    std::vector<double> r_breaks;
    CellGrid higher;
    bool radial = false;
    double singular_exponent = 0.0;
};

using Domain = std::variant<CellGrid, Ellipsoid, PolarRegion>;

CellGrid grid_from_box(const Box& b);
Box bounding_box(const Domain& d);
// Domain of u o D_r given the domain of u, i.e. the image under D_{1/r}.
Domain dilate_domain(const Domain& d, const Group& g, double r);

}  // namespace carnot
