#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "carnot/error.hpp"
#include "carnot/quad.hpp"
#include "carnot/testfn.hpp"

using namespace carnot;

namespace {

constexpr double kPi = std::numbers::pi;

double one(std::span<const double>) { return 1.0; }

}  // namespace

TEST(GaussLegendre, ExactOnPolynomials) {
    for (int m : {4, 8, 16, 33, 64, 80}) {
        std::vector<double> x, w;
        gauss_legendre(m, x, w);
        ASSERT_EQ(x.size(), static_cast<std::size_t>(m));
        for (int p = 0; p < 2 * m && p <= 40; ++p) {
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += w[i] * std::pow(x[i], p);
            const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
            EXPECT_NEAR(s, exact, 1e-14) << m << " " << p;
        }
    }
}

TEST(Integrate, UnitBox) {
    const QuadResult r = integrate(one, Box{{0, 0}, {1, 1}}, Measure::lebesgue(), {});
    EXPECT_NEAR(r.value, 1.0, 1e-12);
    EXPECT_TRUE(r.converged);
}

TEST(Integrate, SemiGaussianMassAndMoment) {
    const Measure mu = Measure::semi_gaussian(1.0 / (2 * kPi), 2);
    const Box b{{-10, -10}, {10, 10}};
    EXPECT_NEAR(integrate(one, b, mu, {}).value, 1.0, 1e-8);
    const auto x2 = [](std::span<const double> x) { return x[0] * x[0]; };
    EXPECT_NEAR(integrate(x2, b, mu, {}).value, 1.0, 1e-8);
}

TEST(Integrate, SemiGaussianTotalMass) {
    // gamma (2 pi)^{N/2} times the x'' volume
    const double gamma = 0.37;
    const Measure m2 = Measure::semi_gaussian(gamma, 2);
    const QuadResult r2 = integrate(one, Box{{-12, -12, 0}, {12, 12, 2}}, m2, {});
    EXPECT_NEAR(r2.value, gamma * 2 * kPi * 2, 1e-8 * r2.value);
    const Measure m3 = Measure::semi_gaussian(gamma, 3);
    const QuadResult r3 = integrate(one, Box{{-12, -12, -12}, {12, 12, 12}}, m3, {});
    EXPECT_NEAR(r3.value, gamma * std::pow(2 * kPi, 1.5), 1e-8 * r3.value);
}

TEST(Integrate, NonFiniteSampleNamesThePoint) {
    const auto bad = [](std::span<const double> x) {
        return x[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
    };
    try {
        integrate(bad, Box{{0}, {1}}, Measure::lebesgue(), {});
        FAIL() << "expected an evaluation error";
    } catch (const EvaluationError& e) {
        EXPECT_NE(std::string(e.what()).find("("), std::string::npos);
    }
}

TEST(Polar, ClosedFormRadial) {
    const Group e3 = Group::euclidean(3);
    const QuadResult r = integrate_polar_first_stratum(one, e3, 0.0, 1.0, Box{}, 1.0, Measure::lebesgue(), {});
    EXPECT_NEAR(r.value, 2 * kPi, 1e-8);
    EXPECT_THROW(integrate_polar_first_stratum(one, e3, 0.0, 1.0, Box{}, 3.0, Measure::lebesgue(), {}),
                 SingularityError);
    // away from zero the same exponent is fine: 4 pi log 2
    const QuadResult s = integrate_polar_first_stratum(one, e3, 0.5, 1.0, Box{}, 3.0, Measure::lebesgue(), {});
    EXPECT_NEAR(s.value, 4 * kPi * std::log(2.0), 1e-8);
}

TEST(Polar, AgreesWithCartesianForBoundedIntegrand) {
    const Group e3 = Group::euclidean(3), h1 = Group::heisenberg(1);
    const TestFunction f = bump({0.4, -0.2, 0.1}, 0.9);
    const auto sq = [&](std::span<const double> x) { return f(x) * f(x); };
    const QuadResult p = integrate_polar_first_stratum(sq, e3, 0.0, 1.5, Box{}, 0.0, Measure::lebesgue(), {});
    const QuadResult c = integrate(sq, f.domain(), Measure::lebesgue(), {});
    EXPECT_NEAR(p.value, c.value, 2 * (p.err_est + c.err_est) + 1e-12);

    const TestFunction g = gaussian_cutoff(h1, 0.8, 4.0);
    const auto gg = [&](std::span<const double> x) { return g(x) * g(x); };
    const QuadResult ph = integrate_polar_first_stratum(gg, h1, 0.0, 4.0, Box{{-4}, {4}}, 0.0,
                                                        Measure::lebesgue(), {});
    const QuadResult ch = integrate(gg, g.domain(), Measure::lebesgue(), {});
    EXPECT_NEAR(ph.value, ch.value, 2 * (ph.err_est + ch.err_est) + 1e-12);
}

TEST(HalfSpace, IndicatorCases) {
    const HalfSpace h0 = HalfSpace::make({1, 0, 0}, 0.0);
    const HalfSpace h2 = HalfSpace::make({1, 0, 0}, 2.0);
    EXPECT_NEAR(integrate_halfspace(one, h0, Box{{0, 0, 0}, {1, 1, 1}}, Measure::lebesgue(), {}).value, 1.0, 1e-12);
    EXPECT_EQ(integrate_halfspace(one, h2, Box{{0, 0, 0}, {1, 1, 1}}, Measure::lebesgue(), {}).value, 0.0);
    EXPECT_NEAR(integrate_halfspace(one, h0, Box{{-1, 0, 0}, {1, 1, 1}}, Measure::lebesgue(), {}).value, 1.0,
                1e-10);
}

TEST(Refinement, ErrorDecreasesForSmoothFamilies) {
    const Group e3 = Group::euclidean(3), h1 = Group::heisenberg(1);
    const TestFunction fams[] = {bump({1.0, 0.5, 0.0}, 1.2), gaussian_cutoff(e3, 1.0, 8.0),
                                 radial_power_family(h1, 0.5, 0.3, 3.0)};
    for (const TestFunction& f : fams) {
        const auto sq = [&](std::span<const double> x) { return f(x) * f(x); };
        QuadOptions o;
        o.tol = 1e-13;
        const QuadResult r = integrate(sq, f.domain(), Measure::lebesgue(), o);
        ASSERT_GE(r.levels.size(), 3u) << f.id();
        for (std::size_t k = 2; k < r.levels.size(); ++k) {
            const double prev = std::abs(r.levels[k - 1] - r.levels[k - 2]);
            const double cur = std::abs(r.levels[k] - r.levels[k - 1]);
            // roundoff floor
            EXPECT_LE(cur, prev + 1e-14 * std::abs(r.value)) << f.id() << " level " << k;
        }
        EXPECT_EQ(r.err_est, std::abs(r.levels.back() - r.levels[r.levels.size() - 2]));
    }
}

TEST(Refinement, BudgetExhaustionIsFlagged) {
    const TestFunction f = bump({0.0, 0.0, 0.0}, 1.0);
    const auto sq = [&](std::span<const double> x) { return f(x) * f(x); };
    QuadOptions o;
    o.tol = 1e-15;
    o.max_nodes = 5000;
    const QuadResult r = integrate(sq, f.domain(), Measure::lebesgue(), o);
    EXPECT_FALSE(r.converged);
    EXPECT_LE(r.nodes_used, o.max_nodes);
    if (r.levels.size() == 1) EXPECT_EQ(r.err_est, std::abs(r.value));
    EXPECT_GT(r.err_est, 0.0);
}

TEST(Refinement, Deterministic) {
    const TestFunction f = bump({0.3, 0.1, -0.2}, 0.7);
    const auto sq = [&](std::span<const double> x) { return f(x) * f(x); };
    const QuadResult a = integrate(sq, f.domain(), Measure::lebesgue(), {});
    const QuadResult b = integrate(sq, f.domain(), Measure::lebesgue(), {});
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.nodes_used, b.nodes_used);
}

TEST(Sphere, Area) {
    EXPECT_NEAR(sphere_area(2), 2 * kPi, 1e-14);
    EXPECT_NEAR(sphere_area(3), 4 * kPi, 1e-14);
    EXPECT_NEAR(sphere_area(4), 2 * kPi * kPi, 1e-13);
}

TEST(Ball, VolumeOfEllipsoid) {
    for (int n : {2, 3, 4}) {
        Ellipsoid e{std::vector<double>(n, 0.5), 1.5, std::vector<double>(n, 1.0)};
        const QuadResult r = integrate(one, Domain{e}, Measure::lebesgue(), {});
        EXPECT_NEAR(r.value, sphere_area(n) / n * std::pow(1.5, n), 1e-10) << n;
    }
}
