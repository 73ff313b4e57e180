#include "carnot/domain.hpp"

#include <algorithm>
#include <cmath>

#include "carnot/group.hpp"

namespace carnot {

CellGrid grid_from_box(const Box& b) {
    CellGrid g;
    for (int k = 0; k < b.dim(); ++k) g.axes.push_back(Axis{{b.lo[k], b.hi[k]}});
    return g;
}

namespace {

void grid_bounds(const CellGrid& g, Box& out) {
    for (const auto& a : g.axes) {
        out.lo.push_back(a.breaks.front());
        out.hi.push_back(a.breaks.back());
    }
}

Axis scale_axis(const Axis& a, double s) {
    Axis b = a;
    for (double& x : b.breaks) x *= s;
    b.origin *= s;
    return b;
}

}  // namespace

Box bounding_box(const Domain& d) {
    Box out;
    if (const auto* g = std::get_if<CellGrid>(&d)) {
        grid_bounds(*g, out);
    } else if (const auto* e = std::get_if<Ellipsoid>(&d)) {
        for (std::size_t k = 0; k < e->center.size(); ++k) {
            const double h = e->radius * e->scale[k];
            out.lo.push_back(e->center[k] - h);
            out.hi.push_back(e->center[k] + h);
        }
    } else {
        const auto& p = std::get<PolarRegion>(d);
        for (int k = 0; k < p.first_dim; ++k) {
            out.lo.push_back(-p.r_hi);
            out.hi.push_back(p.r_hi);
        }
        grid_bounds(p.higher, out);
    }
    return out;
}

Domain dilate_domain(const Domain& d, const Group& g, double r) {
    const auto& w = g.weights();
    if (const auto* grid = std::get_if<CellGrid>(&d)) {
        CellGrid out;
        for (std::size_t k = 0; k < grid->axes.size(); ++k)
            out.axes.push_back(scale_axis(grid->axes[k], std::pow(r, -w[k])));
        return out;
    }
    if (const auto* e = std::get_if<Ellipsoid>(&d)) {
        Ellipsoid out = *e;
        for (std::size_t k = 0; k < out.center.size(); ++k) {
            const double s = std::pow(r, -w[k]);
            out.center[k] *= s;
            out.scale[k] *= s;
        }
        return out;
    }
    PolarRegion p = std::get<PolarRegion>(d);
    p.r_lo /= r;
    p.r_hi /= r;
    for (double& b : p.r_breaks) b /= r;
    for (std::size_t k = 0; k < p.higher.axes.size(); ++k)
        p.higher.axes[k] = scale_axis(p.higher.axes[k], std::pow(r, -w[p.first_dim + k]));
    return p;
}

}  // namespace carnot
