#include "carnot/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "carnot/error.hpp"

namespace carnot {

Weight Weight::halfspace(HalfSpace h) {
    Weight w;
    w.tag = Tag::HalfSpaceDist;
    w.h = std::move(h);
    return w;
}

Weight Weight::horizontal() {
    Weight w;
    w.tag = Tag::HorizontalNorm;
    return w;
}

Weight Weight::shifted(double c) {
    if (!(c >= 1.0)) throw DomainError("shifted horizontal norm needs c >= 1");
    Weight w;
    w.tag = Tag::ShiftedHorizontalNorm;
    w.c = c;
    return w;
}

Weight Weight::one() { return Weight{}; }

double Weight::operator()(std::span<const double> x, int N) const {
    switch (tag) {
        case Tag::HalfSpaceDist:
            return dist_boundary(h, x);
        case Tag::HorizontalNorm:
        case Tag::ShiftedHorizontalNorm: {
            double r2 = 0.0;
            for (int k = 0; k < N; ++k) r2 += x[k] * x[k];
            return std::sqrt(r2) + c;
        }
        case Tag::One:
            return 1.0;
    }
    return 1.0;
}

double Weight::hardy_constant(const Group& g) const {
    switch (tag) {
        case Tag::HalfSpaceDist:
            return hardy_C(HardySetting::HalfSpace, g);
        case Tag::HorizontalNorm:
        case Tag::ShiftedHorizontalNorm:
            return hardy_C(HardySetting::Horizontal, g);
        case Tag::One:
            return 0.0;
    }
    return 0.0;
}

std::string Weight::name() const {
    switch (tag) {
        case Tag::HalfSpaceDist:
            return "halfspace";
        case Tag::HorizontalNorm:
            return "horizontal";
        case Tag::ShiftedHorizontalNorm:
            return "shifted";
        case Tag::One:
            return "one";
    }
    return {};
}

void IneqReport::set_sides(double l, double r) {
    lhs = l;
    slack = r - l;
    rhs = slack + l;
}

double IneqReport::get_aux(const std::string& key) const {
    for (const auto& [k, v] : aux)
        if (k == key) return v;
    throw Error("report has no auxiliary value " + key);
}

namespace {

struct Sample {
    std::span<const double> x;
    double u;
    double grad2;  // |grad_H u|^2
    double w;
};

using TermFn = std::function<void(const Sample&, std::span<double>)>;

struct Terms {
    std::vector<double> v, err;
    bool converged = true;
    std::size_t nodes = 0;
};

double min_horizontal_norm(const Domain& d, int N) {
    if (const auto* e = std::get_if<Ellipsoid>(&d)) {
        double c2 = 0.0, smax = 0.0;
        for (int k = 0; k < N; ++k) {
            c2 += e->center[k] * e->center[k];
            smax = std::max(smax, e->scale[k]);
        }
        return std::max(0.0, std::sqrt(c2) - e->radius * smax);
    }
    if (const auto* p = std::get_if<PolarRegion>(&d)) return p->r_lo;
    const Box b = bounding_box(d);
    double s = 0.0;
    for (int k = 0; k < N; ++k) {
        const double m = b.lo[k] > 0.0 ? b.lo[k] : (b.hi[k] < 0.0 ? -b.hi[k] : 0.0);
        s += m * m;
    }
    return std::sqrt(s);
}

double min_boundary_dist(const Domain& d, const HalfSpace& h) {
    if (const auto* e = std::get_if<Ellipsoid>(&d)) {
        double s = 0.0;
        for (std::size_t k = 0; k < h.v.size(); ++k) {
            const double t = e->scale[k] * h.v[k];
            s += t * t;
        }
        return dist_boundary(h, e->center) - e->radius * std::sqrt(s);
    }
    const Box b = bounding_box(d);
    double s = -h.d;
    for (std::size_t k = 0; k < h.v.size(); ++k) s += std::min(h.v[k] * b.lo[k], h.v[k] * b.hi[k]);
    return s;
}

Domain prepare_domain(const Group& g, const TestFunction& u, const Weight& w, double alpha) {
    Domain d = u.domain();
    if (auto* p = std::get_if<PolarRegion>(&d)) {
        p->radial = u.radial() && g.rotation_invariant() && w.radial();
        p->singular_exponent = w.tag == Weight::Tag::HorizontalNorm ? std::max(alpha, 0.0) : 0.0;
    }
    return d;
}

Terms integrate_terms(const Group& g, const TestFunction& u, const Weight& w, const Measure& m,
                      double alpha, std::size_t ncomp, const TermFn& fn, const QuadOptions& opts,
                      bool eval_zero = false, const Domain* domain = nullptr) {
    if (u.dim() != g.dim()) throw DomainError("test function and group dimensions differ");
    const Domain d = domain ? *domain : prepare_domain(g, u, w, alpha);
    const int n = g.dim(), N = g.horizontal_dim();
    MultiIntegrand f = [&](std::span<const double> x, std::span<double> out) {
        double gbuf[16], hbuf[16];
        const double v = u.value_and_grad(x, std::span<double>(gbuf, n));
        if (v == 0.0 && !eval_zero) {
            std::fill(out.begin(), out.end(), 0.0);
            return;
        }
        g.horizontal_gradient(x, std::span<const double>(gbuf, n), std::span<double>(hbuf, N));
        double g2 = 0.0;
        for (int k = 0; k < N; ++k) g2 += hbuf[k] * hbuf[k];
        fn(Sample{x, v, g2, w(x, N)}, out);
    };
    const MultiQuadResult r = integrate_multi(f, ncomp, d, m, opts);
    return Terms{r.value, r.err_est, r.converged, r.nodes_used};
}

// First-order propagation of per-integral errors into the slack.
double propagate(const Terms& t, const std::function<std::pair<double, double>(const std::vector<double>&)>& sides) {
    const auto [l0, r0] = sides(t.v);
    const double s0 = r0 - l0;
    double e = 0.0;
    for (std::size_t k = 0; k < t.v.size(); ++k) {
        if (t.err[k] == 0.0) continue;
        std::vector<double> v = t.v;
        v[k] += t.err[k];
        const auto [l1, r1] = sides(v);
        const double d = std::abs((r1 - l1) - s0);
        e += std::isfinite(d) ? d : 0.0;
    }
    return e;
}

double safe_log(double x) { return std::log(x); }

void require_beta(double beta, bool allow_two = false) {
    if (!(beta >= 0.0 && (allow_two ? beta <= 2.0 : beta < 2.0)))
        throw DomainError(allow_two ? "beta must lie in [0, 2]" : "beta must lie in [0, 2)");
}

IneqReport finish(std::string name, const Terms& t,
                  const std::function<std::pair<double, double>(const std::vector<double>&)>& sides) {
    IneqReport rep;
    rep.case_name = std::move(name);
    const auto [l, r] = sides(t.v);
    rep.set_sides(l, r);
    rep.quad_err = propagate(t, sides);
    rep.converged = t.converged;
    return rep;
}

}  // namespace

void check_admissible(const Group& g, const Weight& w, const TestFunction& u, double alpha) {
    if (w.tag == Weight::Tag::HalfSpaceDist) {
        if (static_cast<int>(w.h.v.size()) != g.dim()) throw DomainError("half-space normal has wrong dimension");
        if (!(min_boundary_dist(u.domain(), w.h) > 0.0))
            throw DomainError("support of " + u.id() + " is not strictly inside the half-space");
        return;
    }
    if (w.tag != Weight::Tag::HorizontalNorm || alpha <= 0.0) return;
    const int N = g.horizontal_dim();
    if (u.margin() > 0.0 || min_horizontal_norm(u.domain(), N) > 0.0) return;
    if (alpha < N && std::holds_alternative<PolarRegion>(u.domain())) return;
    throw SingularityError("|x'|^-" + std::to_string(alpha) + " is not integrable against " + u.id() +
                           " (no margin around x' = 0)");
}

NormResult weighted_norm(const Group& g, const TestFunction& u, const Weight& w, double beta,
                         const Measure& measure, const QuadOptions& opts) {
    require_beta(beta, true);
    const double alpha = 2.0 - beta;
    check_admissible(g, w, u, alpha);
    const Terms t = integrate_terms(
        g, u, w, measure, alpha, 1,
        [alpha](const Sample& s, std::span<double> o) { o[0] = s.u * s.u * std::pow(s.w, -alpha); },
        opts);
    NormResult r;
    r.value = std::sqrt(t.v[0]);
    r.err_est = r.value > 0.0 ? t.err[0] / (2.0 * r.value) : std::sqrt(t.err[0]);
    r.converged = t.converged;
    return r;
}

TestFunction normalize(const Group& g, const TestFunction& u, const Weight& w, double beta,
                       const Measure& measure, const QuadOptions& opts) {
    // The stopping rule is absolute for small integrals, so rescale once more
    // at unit size before the 1e-10 post-check.
    QuadOptions fine = opts;
    fine.tol = std::min(opts.tol, 1e-12);
    const NormResult n = weighted_norm(g, u, w, beta, measure, fine);
    if (!(n.value > 0.0)) throw DegenerateError("cannot normalize " + u.id() + ": weighted norm is zero");
    double scale = 1.0 / n.value;
    for (int pass = 0; pass < 3; ++pass) {
        const NormResult check = weighted_norm(g, scaled(u, scale), w, beta, measure, fine);
        if (std::abs(check.value - 1.0) <= 1e-10) return scaled(u, scale);
        scale /= check.value;
    }
    const NormResult check = weighted_norm(g, scaled(u, scale), w, beta, measure, fine);
    throw NormalizationError("normalization of " + u.id() + " failed: norm " + std::to_string(check.value));
}

IneqReport hardy_pair(const Group& g, const Weight& w, double C_H, const TestFunction& u,
                      const QuadOptions& opts) {
    check_admissible(g, w, u, 2.0);
    const Terms t = integrate_terms(g, u, w, Measure::lebesgue(), 2.0, 2,
                                    [](const Sample& s, std::span<double> o) {
                                        o[0] = s.grad2;
                                        o[1] = s.u * s.u / (s.w * s.w);
                                    },
                                    opts);
    IneqReport rep = finish("hardy", t, [C_H](const std::vector<double>& v) {
        return std::pair{C_H * v[1], v[0]};
    });
    rep.constants.C_H = C_H;
    rep.beta = 2.0;
    rep.function_id = u.id();
    return rep;
}

IneqReport hardy_sobolev_pair(const Group& g, const Weight& w, double A2, double C_H, double beta,
                              const TestFunction& u, const QuadOptions& opts) {
    require_beta(beta, true);
    const int Q = g.homogeneous_dim();
    if (Q < 3) throw DomainError("Hardy-Sobolev needs Q >= 3");
    if (beta > 0.0 && !(C_H > 0.0)) throw DegenerateError("Hardy-Sobolev with beta > 0 needs C_H > 0");
    check_admissible(g, w, u, beta);
    const double p = 2.0 * (Q - beta) / (Q - 2.0);
    const Terms t = integrate_terms(g, u, w, Measure::lebesgue(), beta, 2,
                                    [p, beta](const Sample& s, std::span<double> o) {
                                        o[0] = s.grad2;
                                        o[1] = std::pow(std::abs(s.u), p) * std::pow(s.w, -beta);
                                    },
                                    opts);
    const double front = std::pow(A2, Q * (2.0 - beta) / (Q - 2.0)) *
                         (beta == 0.0 ? 1.0 : std::pow(C_H, -0.5 * beta));
    const double expo = (Q - beta) / (Q - 2.0);
    IneqReport rep = finish("hardy-sobolev", t, [front, expo](const std::vector<double>& v) {
        return std::pair{v[1], front * std::pow(v[0], expo)};
    });
    rep.constants.A2 = A2;
    rep.constants.C_H = C_H;
    rep.constants.beta = beta;
    rep.beta = beta;
    rep.function_id = u.id();
    return rep;
}

IneqReport sobolev_pair(const Group& g, double A2, const TestFunction& u, const QuadOptions& opts) {
    const int Q = g.homogeneous_dim();
    if (Q < 3) throw DomainError("Sobolev needs Q >= 3");
    const double p = 2.0 * Q / (Q - 2.0);
    const Weight one = Weight::one();
    const Terms t = integrate_terms(g, u, one, Measure::lebesgue(), 0.0, 2,
                                    [p](const Sample& s, std::span<double> o) {
                                        o[0] = s.grad2;
                                        o[1] = std::pow(std::abs(s.u), p);
                                    },
                                    opts);
    const double front = std::pow(A2, 2.0 * Q / (Q - 2.0));
    const double expo = Q / (Q - 2.0);
    IneqReport rep = finish("sobolev", t, [front, expo](const std::vector<double>& v) {
        return std::pair{v[1], front * std::pow(v[0], expo)};
    });
    rep.constants.A2 = A2;
    rep.function_id = u.id();
    return rep;
}

IneqReport log_hardy_pair(const Group& g, const Weight& w, const ConstantBundle& bundle,
                          const TestFunction& u, const QuadOptions& opts) {
    const double beta = bundle.beta;
    require_beta(beta);
    if (!bundle.C_LH) throw DegenerateError("log-Hardy needs C_LH (degenerate for C_H = 0, beta > 0)");
    const int Q = g.homogeneous_dim();
    if (Q < 3) throw DomainError("log-Hardy needs Q >= 3");
    const double alpha = 2.0 - beta;
    check_admissible(g, w, u, alpha);
    const double k = 2.0 * Q - 4.0;
    const Terms t = integrate_terms(g, u, w, Measure::lebesgue(), alpha, 3,
                                    [alpha, k](const Sample& s, std::span<double> o) {
                                        const double rho = s.u * s.u * std::pow(s.w, -alpha);
                                        o[0] = s.grad2;
                                        o[1] = rho;
                                        o[2] = rho * (2.0 * std::log(std::abs(s.u)) + k * safe_log(s.w));
                                    },
                                    opts);
    if (!(t.v[1] > 0.0)) throw DegenerateError("log-Hardy: weighted norm of " + u.id() + " is zero");
    const double c = *bundle.C_LH;
    const double front = (Q - beta) / (2.0 - beta);
    IneqReport rep = finish("log-hardy", t, [c, front](const std::vector<double>& v) {
        return std::pair{v[2] / v[1] - std::log(v[1]), front * std::log(c * v[0] / v[1])};
    });
    rep.constants = bundle;
    rep.beta = beta;
    rep.function_id = u.id();
    rep.aux = {{"norm2", t.v[1]}, {"dirichlet", t.v[0]}};
    return rep;
}

JTerm j_term(const Group& g, const Weight& w, double beta, double q, const TestFunction& u,
             const Measure& measure, const QuadOptions& opts) {
    require_beta(beta);
    if (!(q >= 1.0)) throw DomainError("J needs q >= 1");
    const int Q = g.homogeneous_dim();
    const double alpha = 2.0 - beta;
    check_admissible(g, w, u, alpha);
    const double kJ = (beta - 2.0) - (2.0 * Q - 4.0);
    const Terms t = integrate_terms(g, u, w, measure, alpha, 3,
                                    [alpha](const Sample& s, std::span<double> o) {
                                        const double rho = s.u * s.u * std::pow(s.w, -alpha);
                                        o[0] = rho;
                                        o[1] = rho * 2.0 * std::log(std::abs(s.u));
                                        o[2] = rho * safe_log(s.w);
                                    },
                                    opts);
    if (!(t.v[0] > 0.0)) throw DegenerateError("J: weighted norm of " + u.id() + " is zero");
    JTerm j;
    const double ent = t.v[1] / t.v[0] - std::log(t.v[0]);
    const double wt = kJ * t.v[2] / t.v[0];
    j.entropy_part = (q - 1.0) * ent;
    j.weight_part = (q - 1.0) * wt;
    j.value = (q - 1.0) * (ent + wt);
    j.err = (q - 1.0) * (t.err[1] / t.v[0] + std::abs(kJ) * t.err[2] / t.v[0] +
                         t.err[0] / t.v[0] * (1.0 + std::abs(ent + wt)));
    j.converged = t.converged;
    return j;
}

IneqReport hardy_poincare_pair(const Group& g, const Weight& w, const ConstantBundle& bundle,
                               double q, const TestFunction& u, const QuadOptions& opts) {
    const double beta = bundle.beta;
    require_beta(beta);
    if (!(q > 1.0)) throw DomainError("Hardy-Poincare needs q > 1");
    if (!bundle.C_LH) throw DegenerateError("Hardy-Poincare needs C_LH (degenerate for C_H = 0, beta > 0)");
    const int Q = g.homogeneous_dim();
    const double alpha = 2.0 - beta;
    check_admissible(g, w, u, alpha);
    const double kJ = (beta - 2.0) - (2.0 * Q - 4.0);
    const Terms t = integrate_terms(g, u, w, Measure::lebesgue(), alpha, 4,
                                    [alpha, kJ, q](const Sample& s, std::span<double> o) {
                                        const double wa = std::pow(s.w, -alpha);
                                        const double rho = s.u * s.u * wa;
                                        o[0] = s.grad2;
                                        o[1] = rho;
                                        o[2] = rho * (2.0 * std::log(std::abs(s.u)) + kJ * safe_log(s.w));
                                        o[3] = std::pow(std::abs(s.u), 2.0 / q) * std::pow(wa, 1.0 / q);
                                    },
                                    opts);
    if (!(t.v[1] > 0.0)) throw DegenerateError("Hardy-Poincare: weighted norm of " + u.id() + " is zero");
    const double c = *bundle.C_LH;
    const double front = (q - 1.0) * (Q - beta) / (2.0 - beta);
    auto sides = [c, front, q](const std::vector<double>& v) {
        const double J = (q - 1.0) * (v[2] / v[1] - std::log(v[1]));
        const double lhs = v[1] / v[1] - std::pow(v[3], q) / v[1];
        return std::pair{lhs, front * std::log(c * v[0] / v[1]) + J};
    };
    IneqReport rep = finish("hardy-poincare", t, sides);
    rep.constants = bundle;
    rep.constants.q = q;
    rep.beta = beta;
    rep.q = q;
    rep.function_id = u.id();
    rep.aux = {{"j_term", (q - 1.0) * (t.v[2] / t.v[1] - std::log(t.v[1]))},
               {"norm2", t.v[1]}};
    return rep;
}

IneqReport gross_hardy_pair(const Group& g, double beta, double gamma, const TestFunction& gfun,
                            const QuadOptions& opts) {
    require_beta(beta);
    const int Q = g.homogeneous_dim(), N = g.horizontal_dim();
    const double alpha = 2.0 - beta;
    const Weight w = Weight::horizontal();
    check_admissible(g, w, gfun, alpha);
    const Measure mu = Measure::semi_gaussian(gamma, N);
    const Terms t = integrate_terms(g, gfun, w, mu, alpha, 3,
                                    [alpha, Q](const Sample& s, std::span<double> o) {
                                        const double rho = s.u * s.u * std::pow(s.w, -alpha);
                                        o[0] = s.grad2;
                                        o[1] = rho;
                                        o[2] = rho * ((Q - 2.0) * std::log(s.w) + std::log(std::abs(s.u)));
                                    },
                                    opts);
    if (std::abs(t.v[1] - 1.0) > 1e-8)
        throw NormalizationError("gross-hardy needs a normalized function; weighted norm^2 = " +
                                 std::to_string(t.v[1]));
    IneqReport rep = finish("gross-hardy", t, [](const std::vector<double>& v) {
        return std::pair{v[2], v[0]};
    });
    rep.constants.beta = beta;
    rep.constants.gamma = gamma;
    rep.beta = beta;
    rep.function_id = gfun.id();
    rep.aux = {{"norm2", t.v[1]}};
    return rep;
}

namespace {

struct SubstituteImpl final : TestFunction::Impl {
    std::shared_ptr<const TestFunction> g;
    int N;
    double sg;

    double eval(std::span<const double> x, std::span<double> grad) const override {
        const double v = g->value_and_grad(x, grad);
        double r2 = 0.0;
        for (int k = 0; k < N; ++k) r2 += x[k] * x[k];
        const double e = sg * std::exp(-0.25 * r2);
        for (std::size_t k = 0; k < grad.size(); ++k) {
            double gk = grad[k];
            if (static_cast<int>(k) < N) gk -= 0.5 * x[k] * v;
            grad[k] = e * gk;
        }
        return e * v;
    }
};

}  // namespace

TestFunction gaussian_substitute(const Group& g, double gamma, const TestFunction& gfun) {
    if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
    auto impl = std::make_shared<SubstituteImpl>();
    impl->g = std::make_shared<const TestFunction>(gfun);
    impl->N = g.horizontal_dim();
    impl->sg = std::sqrt(gamma);
    return TestFunction(impl, gfun.dim(), gfun.support_box(), gfun.domain(), gfun.margin(),
                        gfun.radial(), gfun.id());
}

SubstitutionCheck gross_substitution(const Group& g, double gamma, const TestFunction& gfun,
                                     const QuadOptions& opts) {
    const int N = g.horizontal_dim();
    const Weight one = Weight::one();
    const Terms a = integrate_terms(g, gfun, one, Measure::semi_gaussian(gamma, N), 0.0, 1,
                                    [](const Sample& s, std::span<double> o) { o[0] = s.grad2; },
                                    opts);
    const TestFunction u = gaussian_substitute(g, gamma, gfun);
    const Terms b = integrate_terms(g, u, one, Measure::lebesgue(), 0.0, 3,
                                    [N](const Sample& s, std::span<double> o) {
                                        double r2 = 0.0;
                                        for (int k = 0; k < N; ++k) r2 += s.x[k] * s.x[k];
                                        o[0] = s.grad2;
                                        o[1] = 0.25 * r2 * s.u * s.u;
                                        o[2] = s.u * s.u;
                                    },
                                    opts);
    SubstitutionCheck c;
    c.lhs = a.v[0];
    c.grad_u = b.v[0];
    c.potential = b.v[1];
    c.u_l2 = b.v[2];
    c.rhs_literal = c.grad_u + c.potential - 0.5 * N;
    c.rhs_general = c.grad_u + c.potential - 0.5 * N * c.u_l2;
    c.err = a.err[0] + b.err[0] + b.err[1] + 0.5 * N * b.err[2];
    c.converged = a.converged && b.converged;
    return c;
}

IneqReport gross_poincare_pair(const Group& g, double beta, double q, double c, double gamma,
                               const TestFunction& gfun, const QuadOptions& opts) {
    require_beta(beta);
    if (!(q > 1.0)) throw DomainError("Gross-Poincare needs q > 1");
    if (!(c == 0.0 || c >= 1.0)) throw DomainError("Gross-Poincare needs c = 0 or c >= 1");
    const int Q = g.homogeneous_dim(), N = g.horizontal_dim();
    const double alpha = 2.0 - beta;
    const Weight w = c == 0.0 ? Weight::horizontal() : Weight::shifted(c);
    check_admissible(g, w, gfun, alpha);
    const Measure mu = Measure::semi_gaussian(gamma, N);
    const double kg = 0.5 * (beta - 2.0) - (Q - 2.0);
    const bool with_j = c == 0.0;
    const Terms t = integrate_terms(g, gfun, w, mu, alpha, with_j ? 5 : 3,
                                    [alpha, q, kg, with_j, N](const Sample& s, std::span<double> o) {
                                        const double wa = std::pow(s.w, -alpha);
                                        o[0] = s.grad2;
                                        o[1] = s.u * s.u * wa;
                                        o[2] = std::pow(std::abs(s.u), 2.0 / q) * std::pow(wa, 1.0 / q);
                                        if (with_j) {
                                            // unshifted weight: w = |x'|
                                            const double rho = o[1];
                                            o[3] = rho;
                                            o[4] = rho * (std::log(std::abs(s.u)) + kg * std::log(s.w));
                                        }
                                        (void)N;
                                    },
                                    opts);
    auto sides = [q, with_j](const std::vector<double>& v) {
        double J = 0.0;
        if (with_j) J = 2.0 * (q - 1.0) * (v[4] - 0.5 * v[3] * std::log(v[3]));
        return std::pair{v[1] - std::pow(v[2], q), 2.0 * (q - 1.0) * v[0] + J};
    };
    IneqReport rep = finish("gross-poincare", t, sides);
    rep.constants.beta = beta;
    rep.constants.q = q;
    rep.constants.gamma = gamma;
    rep.beta = beta;
    rep.q = q;
    rep.function_id = gfun.id();
    rep.aux = {{"c", c}};
    if (with_j) rep.aux.emplace_back("j_term", 2.0 * (q - 1.0) * (t.v[4] - 0.5 * t.v[3] * std::log(t.v[3])));
    return rep;
}

IneqReport weighted_poincare_rn(int n, double beta, double c, const TestFunction& gfun,
                                const QuadOptions& opts) {
    if (n < 3) throw DomainError("weighted Poincare on R^n needs n >= 3");
    require_beta(beta);
    if (!(c >= 1.0)) throw DomainError("weighted Poincare needs c >= 1");
    const Group g = Group::euclidean(n);
    const double gamma = std::pow(2.0 * std::numbers::pi, -0.5 * n);
    const Measure mu = Measure::semi_gaussian(gamma, n);
    const Weight w = Weight::shifted(c);
    const double h = 0.5 * (2.0 - beta);
    const Terms t = integrate_terms(g, gfun, w, mu, 0.0, 3,
                                    [h](const Sample& s, std::span<double> o) {
                                        const double f = std::abs(s.u) * std::pow(s.w, -h);
                                        o[0] = s.grad2;
                                        o[1] = f * f;
                                        o[2] = f;
                                    },
                                    opts);
    const double mean = t.v[2];
    // Direct variance: (f - m)^2 on the function's domain, m^2 times the
    // Gaussian mass of the complement. Same nodes as the moments (the budget
    // stops refinement at their level), so the two variances differ by rounding.
    QuadOptions same = opts;
    same.tol = 1e-300;
    same.max_nodes = t.nodes;
    const Terms dv = integrate_terms(g, gfun, w, mu, 0.0, 2,
                                     [h, mean](const Sample& s, std::span<double> o) {
                                         const double f = std::abs(s.u) * std::pow(s.w, -h);
                                         o[0] = (f - mean) * (f - mean);
                                         o[1] = 1.0;
                                     },
                                     same, true);
    const double variance_direct = dv.v[0] + mean * mean * (1.0 - dv.v[1]);
    IneqReport rep = finish("weighted-poincare", t, [](const std::vector<double>& v) {
        return std::pair{v[1] - v[2] * v[2], 2.0 * v[0]};
    });
    rep.constants.beta = beta;
    rep.constants.gamma = gamma;
    rep.beta = beta;
    rep.function_id = gfun.id();
    rep.aux = {{"variance_direct", variance_direct}, {"mean", mean}, {"c", c}};
    return rep;
}

}  // namespace carnot
