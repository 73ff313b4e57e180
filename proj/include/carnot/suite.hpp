#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "carnot/group.hpp"
#include "carnot/testfn.hpp"

namespace carnot {

// mt19937_64 with a fixed 53-bit mapping to [0, 1), identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::mt19937_64 eng_;
};

// [lo, hi]; lo == hi is a fixed value.
struct Range {
    double lo = 0.0;
    double hi = 0.0;

    static Range fixed(double v) { return {v, v}; }
    double sample(Rng& rng) const { return lo == hi ? lo : rng.uniform(lo, hi); }
};

struct FamilySpec {
    std::string family;  // bump | gaussian_cutoff | radial_power
    int count = 1;

    // bump
    std::vector<Range> center;
    Range radius = Range::fixed(1.0);
    Range amplitude = Range::fixed(1.0);
    // reject bumps whose ball comes closer than this to x' = 0
    double min_horizontal_norm = 0.0;
    // reject bumps closer than this to the half-space boundary
    std::optional<HalfSpace> halfspace;
    double halfspace_margin = 0.0;

    // gaussian_cutoff
    Range sigma = Range::fixed(1.0);
    Range R = Range::fixed(8.0);
    Range hole = Range::fixed(0.0);

    // radial_power
    Range a = Range::fixed(0.0);
    Range r_in = Range::fixed(0.5);
    Range r_out = Range::fixed(8.0);
};

// Draws every family in order from one generator; ids are "<family>#<index>"
// with a running index over the whole suite.
std::vector<TestFunction> build_suite(const Group& g, const std::vector<FamilySpec>& families,
                                      std::uint64_t seed);

}  // namespace carnot
