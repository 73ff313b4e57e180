#include "carnot/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "carnot/error.hpp"

namespace carnot {

TestFunction::TestFunction(std::shared_ptr<const Impl> impl, int dim, Box support, Domain domain,
                           double margin, bool radial, std::string id)
    : impl_(std::move(impl)),
      dim_(dim),
      support_(std::move(support)),
      domain_(std::move(domain)),
      margin_(margin),
      radial_(radial),
      id_(std::move(id)) {}

double TestFunction::operator()(std::span<const double> x) const {
    double buf[16];
    std::vector<double> heap;
    std::span<double> grad;
    if (dim_ <= 16) {
        grad = std::span<double>(buf, dim_);
    } else {
        heap.resize(dim_);
        grad = heap;
    }
    return impl_->eval(x, grad);
}

double TestFunction::value_and_grad(std::span<const double> x, std::span<double> grad) const {
    return impl_->eval(x, grad);
}

std::vector<double> TestFunction::grad(std::span<const double> x) const {
    std::vector<double> g(dim_);
    impl_->eval(x, g);
    return g;
}

TestFunction TestFunction::with_id(std::string id) const {
    TestFunction f = *this;
    f.id_ = std::move(id);
    return f;
}

Step smooth_step(double t) {
    if (t <= 0.0) return {0.0, 0.0};
    if (t >= 1.0) return {1.0, 0.0};
    const double a = std::exp(-1.0 / t);
    const double b = std::exp(-1.0 / (1.0 - t));
    const double s = a + b;
    const double u = 1.0 - t;
    return {a / s, a * b * (1.0 / (t * t) + 1.0 / (u * u)) / (s * s)};
}

namespace {

// zeta(t) = 1 on |t| <= 1/2, 0 on |t| >= 1.
Step plateau(double t) {
    const double a = std::abs(t);
    const Step s = smooth_step(2.0 * (1.0 - a));
    return {s.value, t >= 0.0 ? -2.0 * s.deriv : 2.0 * s.deriv};
}

Axis plateau_axis(double H) { return Axis{{-H, -0.5 * H, 0.5 * H, H}}; }

std::vector<double> radial_breaks(double r_lo, double r_hi, std::initializer_list<double> cand) {
    std::vector<double> out;
    for (double b : cand)
        if (b > r_lo && b < r_hi) out.push_back(b);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct BumpImpl final : TestFunction::Impl {
    std::vector<double> c;
    double inv_r2, amp;

    double eval(std::span<const double> x, std::span<double> grad) const override {
        double s = 0.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            const double d = x[k] - c[k];
            s += d * d;
        }
        s *= inv_r2;
        if (s >= 1.0) {
            std::fill(grad.begin(), grad.end(), 0.0);
            return 0.0;
        }
        const double u = 1.0 - s;
        const double v = amp * std::exp(-1.0 / u);
        const double f = -2.0 * v * inv_r2 / (u * u);
        for (std::size_t k = 0; k < c.size(); ++k) grad[k] = f * (x[k] - c[k]);
        return v;
    }
};

struct RadialPowerImpl final : TestFunction::Impl {
    int N, n;
    double a, r_in, r_out;
    std::vector<double> H;

    double eval(std::span<const double> x, std::span<double> grad) const override {
        std::fill(grad.begin(), grad.end(), 0.0);
        double r2 = 0.0;
        for (int k = 0; k < N; ++k) r2 += x[k] * x[k];
        const double r = std::sqrt(r2);
        if (r <= r_in || r >= r_out) return 0.0;
        const double eta_h = 1.0 / std::numbers::ln2;
        const Step s1 = smooth_step(std::log2(r / r_in));
        const Step s2 = smooth_step(std::log2(r_out / r));
        const double chi = s1.value * s2.value;
        const double dchi = (s1.deriv * s2.value - s1.value * s2.deriv) * eta_h / r;
        const double ra = std::pow(r, a);
        const double R = ra * chi;
        const double dR = a * ra / r * chi + ra * dchi;

        double eta = 1.0;
        double zv[8], zd[8];
        for (int j = 0; j < n - N; ++j) {
            const Step z = plateau(x[N + j] / H[j]);
            zv[j] = z.value;
            zd[j] = z.deriv / H[j];
            eta *= z.value;
        }
        if (eta == 0.0 || R == 0.0) return 0.0;
        for (int k = 0; k < N; ++k) grad[k] = dR * x[k] / r * eta;
        for (int j = 0; j < n - N; ++j) {
            double others = 1.0;
            for (int l = 0; l < n - N; ++l)
                if (l != j) others *= zv[l];
            grad[N + j] = R * zd[j] * others;
        }
        return R * eta;
    }
};

struct GaussianCutoffImpl final : TestFunction::Impl {
    int N, n;
    double sigma, R, hole;

    double eval(std::span<const double> x, std::span<double> grad) const override {
        std::fill(grad.begin(), grad.end(), 0.0);
        double r2 = 0.0;
        for (int k = 0; k < N; ++k) r2 += x[k] * x[k];
        double rho2 = r2;
        for (int k = N; k < n; ++k) rho2 += x[k] * x[k];
        const double rho = std::sqrt(rho2);
        if (rho >= R) return 0.0;
        const double r = std::sqrt(r2);
        Step h{1.0, 0.0};
        if (hole > 0.0) {
            if (r <= hole) return 0.0;
            const Step s = smooth_step(r / hole - 1.0);
            h = {s.value, s.deriv / hole};
        }
        const Step c = smooth_step(2.0 * (1.0 - rho / R));
        const double chi = c.value;
        const double dchi = -2.0 / R * c.deriv;
        const double G = std::exp(-rho2 / (2.0 * sigma * sigma));
        const double v = G * chi * h.value;
        const double inv_s2 = 1.0 / (sigma * sigma);
        for (int k = 0; k < n; ++k) {
            double gk = -v * x[k] * inv_s2;
            if (dchi != 0.0 && rho > 0.0) gk += G * dchi * x[k] / rho * h.value;
            if (k < N && h.deriv != 0.0) gk += G * chi * h.deriv * x[k] / r;
            grad[k] = gk;
        }
        return v;
    }
};

struct HalfSpacePowerImpl final : TestFunction::Impl {
    int n, axis;
    double d, b, r_in, L;

    double eval(std::span<const double> x, std::span<double> grad) const override {
        std::fill(grad.begin(), grad.end(), 0.0);
        const double s = x[axis] - d;
        if (s <= r_in || s >= 1.0) return 0.0;
        const double inv_ln2 = 1.0 / std::numbers::ln2;
        const Step s1 = smooth_step(std::log2(s / r_in));
        const Step s2 = smooth_step(std::log2(1.0 / s));
        const double chi = s1.value * s2.value;
        const double dchi = (s1.deriv * s2.value - s1.value * s2.deriv) * inv_ln2 / s;
        const double sb = std::pow(s, b);
        const double phi = sb * chi;
        const double dphi = b * sb / s * chi + sb * dchi;

        double zv[8], zd[8];
        double eta = 1.0;
        for (int k = 0; k < n; ++k) {
            if (k == axis) continue;
            const Step z = plateau(x[k] / L);
            zv[k] = z.value;
            zd[k] = z.deriv / L;
            eta *= z.value;
        }
        if (eta == 0.0 || phi == 0.0) return 0.0;
        grad[axis] = dphi * eta;
        for (int k = 0; k < n; ++k) {
            if (k == axis) continue;
            double others = 1.0;
            for (int l = 0; l < n; ++l)
                if (l != axis && l != k) others *= zv[l];
            grad[k] = phi * zd[k] * others;
        }
        return phi * eta;
    }
};

struct ScaledImpl final : TestFunction::Impl {
    std::shared_ptr<const TestFunction> f;
    double lambda;

    double eval(std::span<const double> x, std::span<double> grad) const override {
        const double v = f->value_and_grad(x, grad);
        for (double& g : grad) g *= lambda;
        return lambda * v;
    }
};

struct DilatedImpl final : TestFunction::Impl {
    std::shared_ptr<const TestFunction> f;
    std::vector<double> factor;

    double eval(std::span<const double> x, std::span<double> grad) const override {
        double y[16];
        for (std::size_t k = 0; k < factor.size(); ++k) y[k] = factor[k] * x[k];
        const double v = f->value_and_grad(std::span<const double>(y, factor.size()), grad);
        for (std::size_t k = 0; k < factor.size(); ++k) grad[k] *= factor[k];
        return v;
    }
};

}  // namespace

TestFunction bump(std::vector<double> center, double radius, double amplitude) {
    if (!(radius > 0.0)) throw DomainError("bump radius must be positive");
    const int n = static_cast<int>(center.size());
    if (n < 1 || n > 16) throw DomainError("bump dimension must be in [1, 16]");
    auto impl = std::make_shared<BumpImpl>();
    impl->c = center;
    impl->inv_r2 = 1.0 / (radius * radius);
    impl->amp = amplitude;
    Box box;
    for (double c : center) {
        box.lo.push_back(c - radius);
        box.hi.push_back(c + radius);
    }
    Ellipsoid e{center, radius, std::vector<double>(n, 1.0)};
    return TestFunction(impl, n, box, e, 0.0, false, "bump");
}

TestFunction radial_power_family(const Group& g, double a, double r_in, double r_out) {
    if (!(r_in > 0.0) || !(r_in < r_out)) throw DomainError("radial_power_family needs 0 < r_in < r_out");
    const int N = g.horizontal_dim(), n = g.dim();
    if (n - N > 8) throw DomainError("too many higher coordinates");
    auto impl = std::make_shared<RadialPowerImpl>();
    impl->N = N;
    impl->n = n;
    impl->a = a;
    impl->r_in = r_in;
    impl->r_out = r_out;
    Box box;
    for (int k = 0; k < N; ++k) {
        box.lo.push_back(-r_out);
        box.hi.push_back(r_out);
    }
    PolarRegion p;
    p.first_dim = N;
    p.r_lo = r_in;
    p.r_hi = r_out;
    p.r_breaks = radial_breaks(r_in, r_out, {2.0 * r_in, 0.5 * r_out});
    for (int j = 0; j < n - N; ++j) {
        const double H = std::pow(r_out, g.weights()[N + j]);
        impl->H.push_back(H);
        box.lo.push_back(-H);
        box.hi.push_back(H);
        p.higher.axes.push_back(plateau_axis(H));
    }
    return TestFunction(impl, n, box, p, r_in, true, "radial_power");
}

TestFunction gaussian_cutoff(const Group& g, double sigma, double R, double hole) {
    if (!(sigma > 0.0) || !(R > 0.0)) throw DomainError("gaussian_cutoff needs sigma, R > 0");
    if (hole < 0.0 || !(2.0 * hole < R)) throw DomainError("gaussian_cutoff hole must lie in [0, R/2)");
    const int N = g.horizontal_dim(), n = g.dim();
    auto impl = std::make_shared<GaussianCutoffImpl>();
    impl->N = N;
    impl->n = n;
    impl->sigma = sigma;
    impl->R = R;
    impl->hole = hole;
    Box box{std::vector<double>(n, -R), std::vector<double>(n, R)};
    PolarRegion p;
    p.first_dim = N;
    p.r_lo = hole;
    p.r_hi = R;
    p.r_breaks = radial_breaks(hole, R, {hole > 0.0 ? 2.0 * hole : 0.0, 0.5 * R});
    for (int j = 0; j < n - N; ++j) p.higher.axes.push_back(plateau_axis(R));
    return TestFunction(impl, n, box, p, hole, true, "gaussian_cutoff");
}

TestFunction halfspace_power_profile(const Group& g, const HalfSpace& h, double b, double ell,
                                     double L) {
    const int n = g.dim();
    if (static_cast<int>(h.v.size()) != n) throw DomainError("half-space normal has wrong dimension");
    if (n > 8) throw DomainError("too many coordinates");
    int axis = -1;
    for (int k = 0; k < n; ++k) {
        if (h.v[k] == 1.0 && axis < 0)
            axis = k;
        else if (h.v[k] != 0.0)
            axis = -2;
    }
    if (axis < 0) throw DomainError("halfspace_power_profile needs a positive coordinate-axis normal");
    if (!(ell > std::log(4.0))) throw DomainError("halfspace_power_profile needs ell > log 4");
    if (!(L > 0.0)) throw DomainError("halfspace_power_profile needs L > 0");
    auto impl = std::make_shared<HalfSpacePowerImpl>();
    impl->n = n;
    impl->axis = axis;
    impl->d = h.d;
    impl->b = b;
    impl->r_in = std::exp(-ell);
    impl->L = L;
    Box box;
    CellGrid grid;
    for (int k = 0; k < n; ++k) {
        if (k == axis) {
            const double r_in = impl->r_in;
            box.lo.push_back(h.d + r_in);
            box.hi.push_back(h.d + 1.0);
            grid.axes.push_back(
                Axis{{h.d + r_in, h.d + 2.0 * r_in, h.d + 0.5, h.d + 1.0}, true, h.d, 6.0});
        } else {
            box.lo.push_back(-L);
            box.hi.push_back(L);
            grid.axes.push_back(plateau_axis(L));
        }
    }
    return TestFunction(impl, n, box, grid, 0.0, false, "halfspace_power");
}

TestFunction scaled(const TestFunction& f, double lambda) {
    auto impl = std::make_shared<ScaledImpl>();
    impl->f = std::make_shared<const TestFunction>(f);
    impl->lambda = lambda;
    return TestFunction(impl, f.dim(), f.support_box(), f.domain(), f.margin(), f.radial(), f.id());
}

TestFunction dilated(const TestFunction& f, const Group& g, double r) {
    if (!(r > 0.0)) throw DomainError("dilation factor must be positive");
    if (f.dim() != g.dim() || f.dim() > 16) throw DomainError("dimension mismatch in dilated");
    auto impl = std::make_shared<DilatedImpl>();
    impl->f = std::make_shared<const TestFunction>(f);
    Box box = f.support_box();
    for (int k = 0; k < f.dim(); ++k) {
        const double s = std::pow(r, g.weights()[k]);
        impl->factor.push_back(s);
        box.lo[k] /= s;
        box.hi[k] /= s;
    }
    return TestFunction(impl, f.dim(), box, dilate_domain(f.domain(), g, r), f.margin() / r,
                        f.radial(), f.id());
}

std::vector<double> fd_gradient(const TestFunction& f, std::span<const double> x, double h) {
    if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
    const std::size_t n = x.size();
    std::vector<double> y(x.begin(), x.end()), out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double x0 = y[k];
        y[k] = x0 + h;
        const double fp = f(y);
        y[k] = x0 - h;
        const double fm = f(y);
        y[k] = x0;
        out[k] = (fp - fm) / (2.0 * h);
    }
    return out;
}

TestFunction make_function(int dim, std::function<double(std::span<const double>, std::span<double>)> fn,
                           Box support, std::string id) {
    struct CallableImpl final : TestFunction::Impl {
        std::function<double(std::span<const double>, std::span<double>)> fn;
        double eval(std::span<const double> x, std::span<double> grad) const override {
            return fn(x, grad);
        }
    };
    auto impl = std::make_shared<CallableImpl>();
    impl->fn = std::move(fn);
    Domain d = grid_from_box(support);
    return TestFunction(impl, dim, std::move(support), std::move(d), 0.0, false, std::move(id));
}

}  // namespace carnot
