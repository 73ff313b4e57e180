#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "carnot/constants.hpp"
#include "carnot/group.hpp"
#include "carnot/quad.hpp"
#include "carnot/testfn.hpp"

namespace carnot {

struct Weight {
    enum class Tag { HalfSpaceDist, HorizontalNorm, ShiftedHorizontalNorm, One };

    Tag tag = Tag::One;
    HalfSpace h;
    double c = 0.0;

    static Weight halfspace(HalfSpace h);
    static Weight horizontal();
    static Weight shifted(double c);  // c >= 1
    static Weight one();

    double operator()(std::span<const double> x, int N) const;
    // Invariant under rotations of x'.
    bool radial() const { return tag != Tag::HalfSpaceDist; }
    // Hardy constant paired with this weight on g.
    double hardy_constant(const Group& g) const;
    HardySetting setting() const {
        return tag == Tag::HalfSpaceDist ? HardySetting::HalfSpace : HardySetting::Horizontal;
    }
    std::string name() const;
};

// One (lhs, rhs) evaluation. slack = rhs - lhs, stored so that slack + lhs == rhs.
struct IneqReport {
    std::string case_name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    double quad_err = 0.0;
    bool converged = true;
    ConstantBundle constants;
    double beta = 0.0;
    std::optional<double> q;
    std::uint64_t seed = 0;
    std::string function_id;
    std::vector<std::pair<std::string, double>> aux;

    void set_sides(double l, double r);
    double get_aux(const std::string& key) const;
};

struct NormResult {
    double value = 0.0;
    double err_est = 0.0;
    bool converged = true;
};

// Rejects pairings whose |x'|^-alpha or boundary singularity is not integrable
// for this function.
void check_admissible(const Group& g, const Weight& w, const TestFunction& u, double alpha);

NormResult weighted_norm(const Group& g, const TestFunction& u, const Weight& w, double beta,
                         const Measure& measure, const QuadOptions& opts = {});

TestFunction normalize(const Group& g, const TestFunction& u, const Weight& w, double beta,
                       const Measure& measure, const QuadOptions& opts = {});

IneqReport hardy_pair(const Group& g, const Weight& w, double C_H, const TestFunction& u,
                      const QuadOptions& opts = {});

IneqReport hardy_sobolev_pair(const Group& g, const Weight& w, double A2, double C_H, double beta,
                              const TestFunction& u, const QuadOptions& opts = {});

IneqReport sobolev_pair(const Group& g, double A2, const TestFunction& u,
                        const QuadOptions& opts = {});

IneqReport log_hardy_pair(const Group& g, const Weight& w, const ConstantBundle& bundle,
                          const TestFunction& u, const QuadOptions& opts = {});

struct JTerm {
    double value = 0.0;
    double entropy_part = 0.0;  // (q-1)/n^2 int rho log(u^2/n^2)
    double weight_part = 0.0;   // (q-1)/n^2 int rho ((beta-2)-(2Q-4)) log w
    double err = 0.0;
    bool converged = true;
};

JTerm j_term(const Group& g, const Weight& w, double beta, double q, const TestFunction& u,
             const Measure& measure = Measure::lebesgue(), const QuadOptions& opts = {});

IneqReport hardy_poincare_pair(const Group& g, const Weight& w, const ConstantBundle& bundle,
                               double q, const TestFunction& u, const QuadOptions& opts = {});

IneqReport gross_hardy_pair(const Group& g, double beta, double gamma, const TestFunction& gfun,
                            const QuadOptions& opts = {});

// int |grad_H g|^2 dmu versus the same quantity expressed through
// u = gamma^{1/2} e^{-|x'|^2/4} g under Lebesgue measure.
struct SubstitutionCheck {
    double lhs = 0.0;          // int |grad_H g|^2 dmu
    double grad_u = 0.0;       // int |grad_H u|^2 dx
    double potential = 0.0;    // int |x'|^2/4 u^2 dx
    double u_l2 = 0.0;         // int u^2 dx
    double rhs_literal = 0.0;  // grad_u + potential - N/2
    double rhs_general = 0.0;  // grad_u + potential - (N/2) u_l2
    double err = 0.0;
    bool converged = true;
};

TestFunction gaussian_substitute(const Group& g, double gamma, const TestFunction& gfun);

SubstitutionCheck gross_substitution(const Group& g, double gamma, const TestFunction& gfun,
                                     const QuadOptions& opts = {});

IneqReport gross_poincare_pair(const Group& g, double beta, double q, double c, double gamma,
                               const TestFunction& gfun, const QuadOptions& opts = {});

IneqReport weighted_poincare_rn(int n, double beta, double c, const TestFunction& gfun,
                                const QuadOptions& opts = {});

}  // namespace carnot
