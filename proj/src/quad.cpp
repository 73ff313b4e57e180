#include "carnot/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include "carnot/error.hpp"

namespace carnot {

namespace {

constexpr int kCellOrder = 8;       // GL nodes per cell on grid axes and polar radii
constexpr int kBallRadialOrder = 16;
constexpr int kMaxLevel = 30;
constexpr double kPolarLogWidth = 1.0;

struct Rule1D {
    std::vector<double> x, w;
};

struct GLTable {
    std::array<std::vector<double>, 65> nodes, weights;
};

void compute_gl(int m, std::vector<double>& x, std::vector<double>& w) {
    x.assign(m, 0.0);
    w.assign(m, 0.0);
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double pp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= m; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            pp = m * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = w[m - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
}

const GLTable& gl_table() {
    static const GLTable table = [] {
        GLTable t;
        for (int m = 1; m <= 64; ++m) compute_gl(m, t.nodes[m], t.weights[m]);
        return t;
    }();
    return table;
}

// Appends a GL rule on [a, b] in the variable s; if log_origin is set the
// physical coordinate is origin + e^s.
void append_cell(Rule1D& r, double a, double b, int m, bool log_scale, double origin) {
    const auto& t = gl_table();
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    for (int i = 0; i < m; ++i) {
        const double s = c + h * t.nodes[m][i];
        const double w = h * t.weights[m][i];
        if (log_scale) {
            const double e = std::exp(s);
            r.x.push_back(origin + e);
            r.w.push_back(w * e);
        } else {
            r.x.push_back(s);
            r.w.push_back(w);
        }
    }
}

void append_segment(Rule1D& r, double a, double b, int pieces, int level, int m, bool log_scale,
                    double origin) {
    const int cells = pieces << level;
    const double h = (b - a) / cells;
    for (int c = 0; c < cells; ++c) {
        const double lo = a + c * h;
        const double hi = (c + 1 == cells) ? b : a + (c + 1) * h;
        append_cell(r, lo, hi, m, log_scale, origin);
    }
}

Rule1D axis_rule(const Axis& a, int level) {
    Rule1D r;
    if (a.breaks.size() < 2) throw DomainError("axis needs at least two breakpoints");
    for (std::size_t i = 0; i + 1 < a.breaks.size(); ++i) {
        const double lo = a.breaks[i], hi = a.breaks[i + 1];
        if (!(hi > lo)) {
            if (hi == lo) continue;
            throw DomainError("axis breakpoints must be increasing");
        }
        if (a.log_scale) {
            if (!(lo > a.origin)) throw DomainError("log-scale axis must stay above its origin");
            const double s0 = std::log(lo - a.origin), s1 = std::log(hi - a.origin);
            const int pieces = std::max(1, static_cast<int>(std::ceil((s1 - s0) / a.max_log_width)));
            append_segment(r, s0, s1, pieces, level, kCellOrder, true, a.origin);
        } else {
            append_segment(r, lo, hi, 1, level, kCellOrder, false, 0.0);
        }
    }
    return r;
}

std::vector<Rule1D> grid_rules(const CellGrid& g, int level) {
    std::vector<Rule1D> rules;
    for (const auto& a : g.axes) rules.push_back(axis_rule(a, level));
    return rules;
}

std::size_t grid_count(const std::vector<Rule1D>& rules) {
    std::size_t c = 1;
    for (const auto& r : rules) c *= r.x.size();
    return c;
}

// Product rule on S^{d-1}: GL in the polar angles with sin^p weights, trapezoid
// in the azimuth. Weights are rescaled to the exact surface area.
struct SphereRule {
    std::vector<std::vector<double>> dirs;
    std::vector<double> w;
};

SphereRule sphere_rule(int d, int na, bool radial) {
    SphereRule s;
    const double area = sphere_area(d);
    if (radial || d == 1) {
        if (d == 1 && !radial) {
            s.dirs = {{1.0}, {-1.0}};
            s.w = {1.0, 1.0};
            return s;
        }
        std::vector<double> e(d, 0.0);
        e[0] = 1.0;
        s.dirs.push_back(e);
        s.w.push_back(area);
        return s;
    }
    const int nphi = 2 * na;
    std::vector<double> phis(nphi);
    for (int j = 0; j < nphi; ++j) phis[j] = 2.0 * std::numbers::pi * j / nphi;
    const auto& t = gl_table();
    const int npolar = d - 2;
    std::vector<double> th(na), thw(na);
    for (int i = 0; i < na; ++i) {
        th[i] = 0.5 * std::numbers::pi * (1.0 + t.nodes[na][i]);
        thw[i] = 0.5 * std::numbers::pi * t.weights[na][i];
    }
    std::vector<int> idx(npolar, 0);
    while (true) {
        double wt = 2.0 * std::numbers::pi / nphi;
        std::vector<double> base(d, 0.0);
        double sprod = 1.0;
        for (int a = 0; a < npolar; ++a) {
            const double ang = th[idx[a]];
            base[a] = sprod * std::cos(ang);
            wt *= thw[idx[a]] * std::pow(std::sin(ang), d - 2 - a);
            sprod *= std::sin(ang);
        }
        for (int j = 0; j < nphi; ++j) {
            std::vector<double> dir = base;
            dir[d - 2] = sprod * std::cos(phis[j]);
            dir[d - 1] = sprod * std::sin(phis[j]);
            s.dirs.push_back(std::move(dir));
            s.w.push_back(wt);
        }
        int a = npolar - 1;
        while (a >= 0 && ++idx[a] == na) idx[a--] = 0;
        if (a < 0) break;
    }
    double sum = 0.0;
    for (double w : s.w) sum += w;
    for (double& w : s.w) w *= area / sum;
    return s;
}

Rule1D polar_radial_rule(const PolarRegion& p, int level) {
    if (!(p.r_hi > p.r_lo) || p.r_lo < 0.0) throw DomainError("polar region needs 0 <= r_lo < r_hi");
    std::vector<double> pts{p.r_lo};
    for (double b : p.r_breaks)
        if (b > p.r_lo && b < p.r_hi) pts.push_back(b);
    pts.push_back(p.r_hi);
    std::sort(pts.begin(), pts.end());
    Rule1D r;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double lo = pts[i], hi = pts[i + 1];
        if (lo > 0.0) {
            const double s0 = std::log(lo), s1 = std::log(hi);
            const int pieces = std::max(1, static_cast<int>(std::ceil((s1 - s0) / kPolarLogWidth)));
            append_segment(r, s0, s1, pieces, level, kCellOrder, true, 0.0);
            continue;
        }
        // graded toward r = 0: geometric cells of ratio 2, then a linear core
        const double pw = p.first_dim - 1 - p.singular_exponent;
        if (!(pw > -1.0))
            throw SingularityError("non-integrable singularity at |x'| = 0");
        const int K = std::clamp(static_cast<int>(std::ceil(50.0 / (pw + 1.0))), 6, 200);
        const double core = std::ldexp(hi, -K);
        append_segment(r, 0.0, core, 1, level, kCellOrder, false, 0.0);
        append_segment(r, std::log(core), std::log(hi), K, level, kCellOrder, true, 0.0);
    }
    for (std::size_t i = 0; i < r.x.size(); ++i) r.w[i] *= std::pow(r.x[i], p.first_dim - 1);
    return r;
}

Rule1D ball_radial_rule(int n, int level) {
    Rule1D r;
    append_segment(r, 0.0, 1.0, 1, level, kBallRadialOrder, false, 0.0);
    for (std::size_t i = 0; i < r.x.size(); ++i) r.w[i] *= std::pow(r.x[i], n - 1);
    return r;
}

int angular_order(int level) { return 8 + 2 * level; }

struct Accumulator {
    std::vector<double> sum, comp, buf;

    explicit Accumulator(std::size_t n) : sum(n, 0.0), comp(n, 0.0), buf(n, 0.0) {}

    void add(std::size_t k, double v) {
        // Neumaier summation
        const double t = sum[k] + v;
        if (std::abs(sum[k]) >= std::abs(v))
            comp[k] += (sum[k] - t) + v;
        else
            comp[k] += (v - t) + sum[k];
        sum[k] = t;
    }

    std::vector<double> result() const {
        std::vector<double> r(sum.size());
        for (std::size_t k = 0; k < r.size(); ++k) r[k] = sum[k] + comp[k];
        return r;
    }
};

[[noreturn]] void bad_sample(std::span<const double> x, double v) {
    std::ostringstream os;
    os.precision(17);
    os << "integrand is " << v << " at (";
    for (std::size_t k = 0; k < x.size(); ++k) os << (k ? ", " : "") << x[k];
    os << ")";
    throw EvaluationError(os.str());
}

class Sweeper {
public:
    Sweeper(const MultiIntegrand& f, std::size_t ncomp, const Measure& m)
        : f_(f), m_(m), acc_(ncomp) {}

    void node(std::span<const double> x, double w) {
        if (w == 0.0) return;
        const double dens = m_.density(x);
        f_(x, acc_.buf);
        for (std::size_t k = 0; k < acc_.buf.size(); ++k) {
            const double v = acc_.buf[k];
            if (!std::isfinite(v)) bad_sample(x, v);
            if (v != 0.0) acc_.add(k, w * dens * v);
        }
    }

    std::vector<double> result() const { return acc_.result(); }

private:
    const MultiIntegrand& f_;
    const Measure& m_;
    Accumulator acc_;
};

// Iterates the tensor product of rules, filling x[offset..offset+rules.size()).
template <class F>
void tensor_for_each(const std::vector<Rule1D>& rules, std::vector<double>& x, std::size_t offset,
                     double w0, F&& fn) {
    const std::size_t d = rules.size();
    if (d == 0) {
        fn(w0);
        return;
    }
    for (const auto& r : rules)
        if (r.x.empty()) return;
    std::vector<std::size_t> idx(d, 0);
    while (true) {
        double w = w0;
        for (std::size_t a = 0; a < d; ++a) {
            x[offset + a] = rules[a].x[idx[a]];
            w *= rules[a].w[idx[a]];
        }
        fn(w);
        std::size_t a = d;
        while (a > 0) {
            --a;
            if (++idx[a] < rules[a].x.size()) break;
            idx[a] = 0;
            if (a == 0) return;
        }
    }
}

struct LevelPlan {
    std::size_t count = 0;
    std::function<void(Sweeper&)> run;
};

LevelPlan plan_level(const Domain& domain, int level) {
    LevelPlan plan;
    if (const auto* g = std::get_if<CellGrid>(&domain)) {
        auto rules = std::make_shared<std::vector<Rule1D>>(grid_rules(*g, level));
        plan.count = grid_count(*rules);
        plan.run = [rules](Sweeper& s) {
            std::vector<double> x(rules->size());
            tensor_for_each(*rules, x, 0, 1.0, [&](double w) { s.node(x, w); });
        };
        return plan;
    }
    if (const auto* e = std::get_if<Ellipsoid>(&domain)) {
        const int n = static_cast<int>(e->center.size());
        auto rad = std::make_shared<Rule1D>(ball_radial_rule(n, level));
        auto sph = std::make_shared<SphereRule>(sphere_rule(n, angular_order(level), false));
        plan.count = rad->x.size() * sph->w.size();
        Ellipsoid ell = *e;
        plan.run = [rad, sph, ell, n](Sweeper& s) {
            double jac = std::pow(ell.radius, n);
            for (double sc : ell.scale) jac *= sc;
            std::vector<double> x(n);
            for (std::size_t a = 0; a < sph->w.size(); ++a) {
                const auto& dir = sph->dirs[a];
                for (std::size_t i = 0; i < rad->x.size(); ++i) {
                    const double t = rad->x[i] * ell.radius;
                    for (int k = 0; k < n; ++k) x[k] = ell.center[k] + t * ell.scale[k] * dir[k];
                    s.node(x, jac * sph->w[a] * rad->w[i]);
                }
            }
        };
        return plan;
    }
    const auto& p = std::get<PolarRegion>(domain);
    auto rad = std::make_shared<Rule1D>(polar_radial_rule(p, level));
    auto sph = std::make_shared<SphereRule>(sphere_rule(p.first_dim, angular_order(level), p.radial));
    auto hi = std::make_shared<std::vector<Rule1D>>(grid_rules(p.higher, level));
    plan.count = rad->x.size() * sph->w.size() * grid_count(*hi);
    const int N = p.first_dim;
    plan.run = [rad, sph, hi, N](Sweeper& s) {
        std::vector<double> x(N + hi->size());
        for (std::size_t a = 0; a < sph->w.size(); ++a) {
            const auto& dir = sph->dirs[a];
            for (std::size_t i = 0; i < rad->x.size(); ++i) {
                for (int k = 0; k < N; ++k) x[k] = rad->x[i] * dir[k];
                tensor_for_each(*hi, x, N, sph->w[a] * rad->w[i], [&](double w) { s.node(x, w); });
            }
        }
    };
    return plan;
}

}  // namespace

double sphere_area(int d) {
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

Measure Measure::semi_gaussian(double gamma, int first_dim) {
    if (!(gamma > 0.0)) throw DomainError("semi-Gaussian normalization must be positive");
    if (first_dim < 1) throw DomainError("semi-Gaussian measure needs a first stratum");
    return Measure{Tag::SemiGaussian, gamma, first_dim};
}

double Measure::density(std::span<const double> x) const {
    if (tag == Tag::Lebesgue) return 1.0;
    double r2 = 0.0;
    for (int k = 0; k < first_dim; ++k) r2 += x[k] * x[k];
    return gamma * std::exp(-0.5 * r2);
}

void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
    if (m < 1) throw DomainError("Gauss-Legendre order must be positive");
    if (m <= 64) {
        nodes = gl_table().nodes[m];
        weights = gl_table().weights[m];
        return;
    }
    compute_gl(m, nodes, weights);
}

MultiQuadResult integrate_multi(const MultiIntegrand& f, std::size_t ncomp, const Domain& domain,
                                const Measure& measure, const QuadOptions& opts) {
    if (!(opts.tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
    MultiQuadResult res;
    res.value.assign(ncomp, 0.0);
    res.err_est.assign(ncomp, 0.0);
    std::vector<double> prev;
    for (int level = 0; level <= kMaxLevel; ++level) {
        LevelPlan plan = plan_level(domain, level);
        if (level > 0 && res.nodes_used + plan.count > opts.max_nodes) break;
        Sweeper sw(f, ncomp, measure);
        plan.run(sw);
        std::vector<double> cur = sw.result();
        res.nodes_used += plan.count;
        res.level = level;
        if (!prev.empty()) {
            bool ok = true;
            for (std::size_t k = 0; k < ncomp; ++k) {
                res.err_est[k] = std::abs(cur[k] - prev[k]);
                if (res.err_est[k] > opts.tol * (1.0 + std::abs(cur[k]))) ok = false;
            }
            res.value = cur;
            if (ok && level >= 2) {
                res.converged = true;
                break;
            }
        } else {
            res.value = cur;
        }
        prev = std::move(cur);
    }
    // a single level carries no difference estimate
    if (res.level == 0)
        for (std::size_t k = 0; k < ncomp; ++k) res.err_est[k] = std::abs(res.value[k]);
    return res;
}

QuadResult integrate(const Integrand& f, const Domain& domain, const Measure& measure,
                     const QuadOptions& opts) {
    QuadResult out;
    std::vector<double> levels;
    MultiIntegrand mf = [&](std::span<const double> x, std::span<double> o) { o[0] = f(x); };
    // run level by level to expose the refinement history
    if (!(opts.tol > 0.0)) throw DomainError("quadrature tolerance must be positive");
    for (int level = 0; level <= kMaxLevel; ++level) {
        LevelPlan plan = plan_level(domain, level);
        if (level > 0 && out.nodes_used + plan.count > opts.max_nodes) break;
        Sweeper sw(mf, 1, measure);
        plan.run(sw);
        const double cur = sw.result()[0];
        out.nodes_used += plan.count;
        out.levels.push_back(cur);
        out.value = cur;
        if (level > 0) {
            out.err_est = std::abs(cur - out.levels[level - 1]);
            if (level >= 2 && out.err_est <= opts.tol * (1.0 + std::abs(cur))) {
                out.converged = true;
                break;
            }
        }
    }
    if (out.levels.size() == 1) out.err_est = std::abs(out.value);
    return out;
}

QuadResult integrate(const Integrand& f, const Box& box, const Measure& measure,
                     const QuadOptions& opts) {
    return integrate(f, Domain{grid_from_box(box)}, measure, opts);
}

QuadResult integrate_polar_first_stratum(const Integrand& f, const Group& g, double r_lo,
                                         double r_hi, const Box& higher, double alpha,
                                         const Measure& measure, const QuadOptions& opts) {
    const int N = g.horizontal_dim();
    if (higher.dim() != g.dim() - N) throw DomainError("higher box has wrong dimension");
    if (r_lo <= 0.0 && alpha >= N)
        throw SingularityError("|x'|^-alpha with alpha >= N is not integrable at the origin");
    PolarRegion p;
    p.first_dim = N;
    p.r_lo = r_lo;
    p.r_hi = r_hi;
    p.higher = grid_from_box(higher);
    p.singular_exponent = std::max(alpha, 0.0);
    Integrand h = [&](std::span<const double> x) {
        const double v = f(x);
        if (v == 0.0 || alpha == 0.0) return v;
        double r2 = 0.0;
        for (int k = 0; k < N; ++k) r2 += x[k] * x[k];
        return v * std::pow(r2, -0.5 * alpha);
    };
    return integrate(h, Domain{p}, measure, opts);
}

QuadResult integrate_halfspace(const Integrand& f, const HalfSpace& h, const Box& box,
                               const Measure& measure, const QuadOptions& opts) {
    if (static_cast<int>(h.v.size()) != box.dim()) throw DomainError("half-space and box dimensions differ");
    // Cut every axis at the plane when the normal is a coordinate axis so the
    // indicator is resolved exactly by the cell grid.
    CellGrid grid = grid_from_box(box);
    int axis = -1, nz = 0;
    for (int k = 0; k < box.dim(); ++k)
        if (h.v[k] != 0.0) {
            axis = k;
            ++nz;
        }
    if (nz == 1) {
        const double cut = h.d / h.v[axis];
        auto& br = grid.axes[axis].breaks;
        if (cut > br.front() && cut < br.back()) br = {br.front(), cut, br.back()};
    }
    Integrand g = [&](std::span<const double> x) {
        return dist_boundary(h, x) > 0.0 ? f(x) : 0.0;
    };
    return integrate(g, Domain{grid}, measure, opts);
}

}  // namespace carnot
