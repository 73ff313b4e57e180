#include "carnot/suite.hpp"

#include <cmath>

#include "carnot/error.hpp"

namespace carnot {

namespace {

constexpr int kMaxTries = 100000;

void check_range(const Range& r, const std::string& what, bool positive) {
    if (!(r.lo <= r.hi)) throw ConfigError(what + ": empty range");
    if (positive && !(r.lo > 0.0)) throw ConfigError(what + " must be positive");
}

TestFunction draw_bump(const Group& g, const FamilySpec& f, Rng& rng) {
    const int n = g.dim(), N = g.horizontal_dim();
    if (static_cast<int>(f.center.size()) != n)
        throw ConfigError("bump center needs " + std::to_string(n) + " coordinates");
    if (f.halfspace && static_cast<int>(f.halfspace->v.size()) != n)
        throw ConfigError("bump halfspace normal has wrong dimension");
    for (int tries = 0; tries < kMaxTries; ++tries) {
        std::vector<double> c(n);
        for (int k = 0; k < n; ++k) c[k] = f.center[k].sample(rng);
        const double r = f.radius.sample(rng);
        const double amp = f.amplitude.sample(rng);
        double h2 = 0.0;
        for (int k = 0; k < N; ++k) h2 += c[k] * c[k];
        if (f.min_horizontal_norm > 0.0 && std::sqrt(h2) - r < f.min_horizontal_norm) continue;
        if (f.halfspace && dist_boundary(*f.halfspace, c) - r < f.halfspace_margin) continue;
        return bump(std::move(c), r, amp);
    }
    throw ConfigError("bump constraints rejected " + std::to_string(kMaxTries) + " draws");
}

}  // namespace

std::vector<TestFunction> build_suite(const Group& g, const std::vector<FamilySpec>& families,
                                      std::uint64_t seed) {
    Rng rng(seed);
    std::vector<TestFunction> out;
    for (const FamilySpec& f : families) {
        if (f.count < 0) throw ConfigError("family count must be nonnegative");
        for (int i = 0; i < f.count; ++i) {
            const std::string id = f.family + "#" + std::to_string(out.size());
            if (f.family == "bump") {
                check_range(f.radius, "bump radius", true);
                out.push_back(draw_bump(g, f, rng).with_id(id));
            } else if (f.family == "gaussian_cutoff") {
                check_range(f.sigma, "sigma", true);
                check_range(f.R, "R", true);
                check_range(f.hole, "hole", false);
                const double s = f.sigma.sample(rng);
                const double R = f.R.sample(rng);
                const double h = f.hole.sample(rng);
                out.push_back(gaussian_cutoff(g, s, R, h).with_id(id));
            } else if (f.family == "radial_power") {
                check_range(f.r_in, "r_in", true);
                check_range(f.r_out, "r_out", true);
                const double a = f.a.sample(rng);
                const double ri = f.r_in.sample(rng);
                const double ro = f.r_out.sample(rng);
                out.push_back(radial_power_family(g, a, ri, ro).with_id(id));
            } else {
                throw ConfigError("unknown family '" + f.family + "'");
            }
        }
    }
    return out;
}

}  // namespace carnot
