#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "carnot/error.hpp"
#include "carnot/testfn.hpp"

using namespace carnot;

namespace {

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

struct Named {
    std::string label;
    Group g;
    TestFunction f;
};

std::vector<Named> families() {
    const Group e3 = Group::euclidean(3), e4 = Group::euclidean(4), h1 = Group::heisenberg(1);
    return {
        {"bump e3", e3, bump({1.0, -0.5, 0.25}, 1.3, 2.0)},
        {"bump h1", h1, bump({2.0, 0.0, 1.0}, 1.0)},
        {"radial e4", e4, radial_power_family(e4, -1.0, 0.2, 6.0)},
        {"radial h1", h1, radial_power_family(h1, 0.5, 0.3, 4.0)},
        {"gauss e3", e3, gaussian_cutoff(e3, 1.0, 8.0)},
        {"gauss h1 hole", h1, gaussian_cutoff(h1, 1.2, 6.0, 0.3)},
        {"halfspace e3", e3, halfspace_power_profile(e3, HalfSpace::make({1, 0, 0}, 0), 0.5, 3.0, 2.0)},
    };
}

}  // namespace

TEST(Bump, Values) {
    const TestFunction b = bump({0.0, 0.0, 0.0}, 1.0);
    const double o[3] = {0, 0, 0};
    EXPECT_NEAR(b(o), std::exp(-1.0), 1e-15);
    for (double r : {1.0, 1.5, 3.0}) {
        const double x[3] = {0.0, r, 0.0};
        EXPECT_EQ(b(x), 0.0);
    }
    const auto g = b.grad(std::vector<double>{0, 0, 0});
    EXPECT_EQ(norm(g), 0.0);
    EXPECT_THROW(bump({0.0}, 0.0), DomainError);
    EXPECT_THROW(bump({0.0}, -1.0), DomainError);
}

TEST(RadialPower, Values) {
    const Group e4 = Group::euclidean(4), h1 = Group::heisenberg(1);
    const TestFunction flat = radial_power_family(e4, 0.0, 0.1, 10.0);
    for (double r : {0.2, 1.0, 3.0, 5.0}) {
        const double x[4] = {r / std::sqrt(2.0), 0.0, r / std::sqrt(2.0), 0.0};
        EXPECT_NEAR(flat(x), 1.0, 1e-15) << r;
    }
    const TestFunction p = radial_power_family(e4, -1.0, 0.05, 40.0);
    const double one[4] = {0.0, 1.0, 0.0, 0.0};
    EXPECT_NEAR(p(one), 1.0, 1e-15);
    const double hole[4] = {0.025, 0.0, 0.0, 0.0};
    EXPECT_EQ(p(hole), 0.0);
    EXPECT_EQ(p.margin(), 0.05);
    EXPECT_THROW(radial_power_family(e4, -1.0, 2.0, 1.0), DomainError);
    EXPECT_THROW(radial_power_family(h1, -1.0, 1.0, 1.0), DomainError);
}

TEST(GaussianCutoff, Values) {
    const Group e3 = Group::euclidean(3);
    const TestFunction f = gaussian_cutoff(e3, 1.0, 8.0);
    const double o[3] = {0, 0, 0};
    EXPECT_EQ(f(o), 1.0);
    for (double r : {8.0, 8.5, 20.0}) {
        const double x[3] = {0.0, 0.0, r};
        EXPECT_EQ(f(x), 0.0);
    }
    const TestFunction wide = gaussian_cutoff(e3, 1e8, 8.0);
    for (double r : {0.5, 2.0, 4.0}) {
        const double x[3] = {r, 0.0, 0.0};
        EXPECT_NEAR(wide(x), 1.0, 1e-14);
    }
}

TEST(FdGradient, ExactOnAffineAndQuadratic) {
    const TestFunction lin = make_function(
        2,
        [](std::span<const double> x, std::span<double> g) {
            g[0] = 3.0;
            g[1] = -2.0;
            return 3.0 * x[0] - 2.0 * x[1] + 1.0;
        },
        Box{{-5, -5}, {5, 5}});
    for (double h : {1e-1, 1e-3}) {
        const auto g = fd_gradient(lin, std::vector<double>{0.3, 0.7}, h);
        EXPECT_NEAR(g[0], 3.0, 1e-10);
        EXPECT_NEAR(g[1], -2.0, 1e-10);
    }
    const TestFunction quad = make_function(
        2,
        [](std::span<const double> x, std::span<double> g) {
            g[0] = x[0];
            g[1] = x[1];
            return 0.5 * (x[0] * x[0] + x[1] * x[1]);
        },
        Box{{-5, -5}, {5, 5}});
    const auto g = fd_gradient(quad, std::vector<double>{1.0, 2.0}, 1e-4);
    EXPECT_NEAR(g[0], 1.0, 1e-8);
    EXPECT_NEAR(g[1], 2.0, 1e-8);
    const TestFunction b = bump({0.5, 0.5}, 1.0);
    const auto gb = fd_gradient(b, std::vector<double>{0.5, 0.5}, 1e-3);
    EXPECT_LT(norm(gb), 1e-12);
}

TEST(Families, GradientMatchesFiniteDifferences) {
    std::mt19937_64 rng(2024);
    for (const auto& [label, g, f] : families()) {
        const Box& b = f.support_box();
        int checked = 0;
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> x(f.dim());
            for (int k = 0; k < f.dim(); ++k)
                x[k] = b.lo[k] + (b.hi[k] - b.lo[k]) * std::uniform_real_distribution<double>(0, 1)(rng);
            const auto ga = f.grad(x);
            const auto gf = fd_gradient(f, x, 1e-5);
            std::vector<double> d(ga.size());
            for (std::size_t k = 0; k < d.size(); ++k) d[k] = ga[k] - gf[k];
            EXPECT_LE(norm(d), 1e-6 * (1 + norm(ga))) << label;
            if (f(x) != 0.0) ++checked;
        }
        EXPECT_GT(checked, 5) << label;
    }
}

TEST(Families, VanishOutsideSupportBox) {
    std::mt19937_64 rng(77);
    for (const auto& [label, g, f] : families()) {
        const Box& b = f.support_box();
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> x(f.dim());
            for (int k = 0; k < f.dim(); ++k) {
                const double w = b.hi[k] - b.lo[k];
                x[k] = b.lo[k] - w + 3 * w * std::uniform_real_distribution<double>(0, 1)(rng);
            }
            const int k = static_cast<int>(rng() % f.dim());
            x[k] = (rng() & 1) ? b.hi[k] + 0.01 + 0.5 * std::abs(x[k]) : b.lo[k] - 0.01 - 0.5 * std::abs(x[k]);
            EXPECT_EQ(f(x), 0.0) << label;
            EXPECT_EQ(norm(f.grad(x)), 0.0) << label;
        }
    }
}

TEST(Families, MarginHonesty) {
    std::mt19937_64 rng(5);
    const Group e4 = Group::euclidean(4), h1 = Group::heisenberg(1);
    for (const auto& [g, f] : {std::pair{e4, radial_power_family(e4, -1.0, 0.3, 9.0)},
                                std::pair{h1, radial_power_family(h1, 0.5, 0.3, 4.0)},
                                std::pair{h1, gaussian_cutoff(h1, 1.0, 6.0, 0.4)}}) {
        const int N = g.horizontal_dim();
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> x(g.dim());
            for (auto& v : x) v = std::uniform_real_distribution<double>(-1, 1)(rng);
            double r = 0.0;
            for (int k = 0; k < N; ++k) r += x[k] * x[k];
            r = std::sqrt(r);
            const double target = f.margin() * std::uniform_real_distribution<double>(0, 1)(rng);
            for (int k = 0; k < N; ++k) x[k] *= target / r;
            EXPECT_EQ(f(x), 0.0);
        }
    }
}

TEST(Families, ContinuousAcrossSupportBoundary) {
    const TestFunction b = bump({0.0, 0.0, 0.0}, 1.0);
    for (double eps : {1e-2, 1e-3}) {
        const double in[3] = {1.0 - eps, 0.0, 0.0};
        EXPECT_LT(b(in), std::exp(-1.0 / (2 * eps)) * 2);
        const auto g = fd_gradient(b, std::vector<double>{1.0, 0.0, 0.0}, eps);
        EXPECT_LT(norm(g), 1e-10);
    }
}

TEST(Wrappers, ScaledAndDilated) {
    const Group h1 = Group::heisenberg(1);
    const TestFunction f = bump({1.0, 0.5, 0.2}, 0.8);
    const TestFunction s = scaled(f, -3.0);
    const TestFunction d = dilated(f, h1, 2.0);
    const std::vector<double> x = {1.1, 0.4, 0.3};
    EXPECT_DOUBLE_EQ(s(x), -3.0 * f(x));
    const std::vector<double> y = {0.55, 0.2, 0.075};
    EXPECT_DOUBLE_EQ(d(y), f(dilate(h1, 2.0, y)));
    const auto gd = d.grad(y), gf = f.grad(dilate(h1, 2.0, y));
    EXPECT_NEAR(gd[0], 2.0 * gf[0], 1e-14);
    EXPECT_NEAR(gd[2], 4.0 * gf[2], 1e-14);
}

TEST(SmoothStep, Limits) {
    EXPECT_EQ(smooth_step(-0.5).value, 0.0);
    EXPECT_EQ(smooth_step(0.0).value, 0.0);
    EXPECT_EQ(smooth_step(1.0).value, 1.0);
    EXPECT_EQ(smooth_step(2.0).deriv, 0.0);
    EXPECT_NEAR(smooth_step(0.5).value, 0.5, 1e-15);
    for (double t = 0.05; t < 1.0; t += 0.05) {
        const double h = 1e-6;
        const double fd = (smooth_step(t + h).value - smooth_step(t - h).value) / (2 * h);
        EXPECT_NEAR(smooth_step(t).deriv, fd, 1e-7);
    }
}
