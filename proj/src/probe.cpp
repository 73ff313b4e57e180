#include "carnot/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "carnot/error.hpp"

namespace carnot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, const std::vector<double>& lo,
                             const std::vector<double>& hi, const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    if (lo.size() != n || hi.size() != n) throw DomainError("Nelder-Mead box has wrong dimension");
    for (std::size_t k = 0; k < n; ++k)
        if (!(lo[k] <= x0[k] && x0[k] <= hi[k])) throw DomainError("Nelder-Mead start outside the box");

    NelderMeadResult res;
    auto to_x = [&](const std::vector<double>& z) {
        std::vector<double> x(n);
        for (std::size_t k = 0; k < n; ++k) x[k] = lo[k] + std::clamp(z[k], 0.0, 1.0) * (hi[k] - lo[k]);
        return x;
    };
    auto eval = [&](std::vector<double>& z) {
        for (std::size_t k = 0; k < n; ++k) {
            z[k] = std::clamp(z[k], 0.0, 1.0);
            if (hi[k] == lo[k]) z[k] = 0.0;
        }
        ++res.evaluations;
        try {
            const double v = f(to_x(z));
            return std::isfinite(v) ? v : kInf;
        } catch (const DegenerateError&) {
            return kInf;
        }
    };

    std::vector<std::vector<double>> simplex(n + 1, std::vector<double>(n));
    for (std::size_t k = 0; k < n; ++k)
        simplex[0][k] = hi[k] > lo[k] ? (x0[k] - lo[k]) / (hi[k] - lo[k]) : 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        simplex[i] = simplex[0];
        const std::size_t k = i - 1;
        if (hi[k] == lo[k]) continue;
        simplex[i][k] += simplex[0][k] + opts.initial_step <= 1.0 ? opts.initial_step : -opts.initial_step;
    }
    std::vector<double> fv(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

    std::vector<std::size_t> order(n + 1);
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
        std::vector<std::vector<double>> s2;
        std::vector<double> f2;
        for (std::size_t i : order) {
            s2.push_back(simplex[i]);
            f2.push_back(fv[i]);
        }
        simplex = std::move(s2);
        fv = std::move(f2);
    };
    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t k = 0; k < n; ++k) d = std::max(d, std::abs(simplex[i][k] - simplex[0][k]));
        return d;
    };

    sort_simplex();
    if (std::all_of(fv.begin(), fv.end(), [](double v) { return v == kInf; }))
        throw DegenerateError("probe failure: every simplex evaluation is degenerate");

    for (int it = 0; it <= opts.max_iter; ++it) {
        const double spread = fv[n] - fv[0];
        if (diameter() < opts.xtol || (std::isfinite(spread) && spread < opts.ftol)) {
            res.converged = true;
            break;
        }
        if (it == opts.max_iter) break;
        ++res.iterations;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[i][k] / n;
        auto along = [&](double t) {
            std::vector<double> z(n);
            for (std::size_t k = 0; k < n; ++k) z[k] = centroid[k] + t * (simplex[n][k] - centroid[k]);
            return z;
        };
        std::vector<double> xr = along(-opts.alpha);
        const double fr = eval(xr);
        if (fr < fv[0]) {
            std::vector<double> xe = along(-opts.alpha * opts.gamma);
            const double fe = eval(xe);
            if (fe < fr) {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if (fr < fv[n - 1]) {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            const bool outside = fr < fv[n];
            std::vector<double> xc = along(outside ? -opts.alpha * opts.rho : opts.rho);
            const double fc = eval(xc);
            if (fc < (outside ? fr : fv[n])) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t k = 0; k < n; ++k)
                        simplex[i][k] = simplex[0][k] + opts.sigma * (simplex[i][k] - simplex[0][k]);
                    fv[i] = eval(simplex[i]);
                }
            }
        }
        sort_simplex();
        res.best_history.push_back(fv[0]);
    }
    res.x = to_x(simplex[0]);
    res.f = fv[0];
    return res;
}

ProbeFamily radial_power_probe(const Group& g) {
    const double a0 = -0.5 * (g.horizontal_dim() - 2);
    ProbeFamily f;
    f.name = "radial-power";
    f.params = {"a", "ell"};
    f.lo = {a0 - 0.6, std::log(800.0)};
    f.hi = {a0 + 0.6, 80.0};
    f.theta0 = {a0 + 0.3, std::log(800.0)};
    f.make = [g](std::span<const double> t) {
        return radial_power_family(g, t[0], std::exp(-0.5 * t[1]), std::exp(0.5 * t[1]));
    };
    return f;
}

ProbeFamily halfspace_power_probe(const Group& g, const HalfSpace& h) {
    ProbeFamily f;
    f.name = "halfspace-power";
    f.params = {"b", "ell", "L"};
    f.lo = {0.1, 3.0, 2.0};
    f.hi = {0.9, 40.0, 60.0};
    f.theta0 = {0.8, 5.0, 5.0};
    f.make = [g, h](std::span<const double> t) { return halfspace_power_profile(g, h, t[0], t[1], t[2]); };
    return f;
}

ProbeFamily halfspace_bump_probe(const Group& g, const HalfSpace& h) {
    ProbeFamily f;
    f.name = "halfspace-bump";
    f.params = {"t", "ratio"};
    f.lo = {1.0, 0.05};
    f.hi = {4.0, 0.98};
    f.theta0 = {2.0, 0.5};
    f.make = [g, h](std::span<const double> t) {
        std::vector<double> c(g.dim());
        for (int k = 0; k < g.dim(); ++k) c[k] = (h.d + t[0]) * h.v[k];
        return bump(c, t[0] * t[1]);
    };
    return f;
}

QuotientValue rayleigh_quotient(const Group& g, const Weight& w, const TestFunction& u,
                                const QuadOptions& opts) {
    const IneqReport r = hardy_pair(g, w, 1.0, u, opts);
    if (!(r.lhs > 0.0)) throw DegenerateError("Rayleigh quotient with zero denominator");
    QuotientValue q;
    q.value = r.rhs / r.lhs;
    q.err = r.quad_err / r.lhs * (1.0 + q.value);
    q.converged = r.converged;
    return q;
}

QuotientValue rayleigh_quotient(const Group& g, const Weight& w, const ProbeFamily& family,
                                std::span<const double> theta, const QuadOptions& opts) {
    return rayleigh_quotient(g, w, family.make(theta), opts);
}

ProbeResult minimize_quotient(const Group& g, const Weight& w, const ProbeFamily& family,
                              std::vector<double> theta0, const NelderMeadOptions& opts,
                              const QuadOptions& qopts) {
    ProbeResult out;
    out.family = family.name;
    out.reference_constant = w.hardy_constant(g);
    double min_seen = kInf;
    auto f = [&](std::span<const double> t) {
        const QuotientValue q = rayleigh_quotient(g, w, family, t, qopts);
        out.quad_converged = out.quad_converged && q.converged;
        min_seen = std::min(min_seen, q.value);
        return q.value;
    };
    const NelderMeadResult nm = nelder_mead(f, std::move(theta0), family.lo, family.hi, opts);
    out.theta_star = nm.x;
    out.quotient_min = nm.f;
    out.gap = nm.f - out.reference_constant;
    out.iterations = nm.iterations;
    out.evaluations = nm.evaluations;
    out.converged = nm.converged;
    out.min_evaluated = min_seen;
    out.best_history = nm.best_history;
    out.quad_err = rayleigh_quotient(g, w, family, nm.x, qopts).err;
    return out;
}

}  // namespace carnot
