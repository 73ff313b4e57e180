#include "carnot/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <thread>
#include <variant>

#include "carnot/error.hpp"

namespace carnot {

namespace {

struct KindInfo {
    CaseKind kind;
    const char* name;
    bool beta, q, c;
};

constexpr KindInfo kKinds[] = {
    {CaseKind::Hardy, "hardy", false, false, false},
    {CaseKind::HardySobolev, "hardy-sobolev", true, false, false},
    {CaseKind::Sobolev, "sobolev", false, false, false},
    {CaseKind::LogHardy, "log-hardy", true, false, false},
    {CaseKind::HardyPoincare, "hardy-poincare", true, true, false},
    {CaseKind::GrossHardy, "gross-hardy", true, false, false},
    {CaseKind::GrossPoincare, "gross-poincare", true, true, true},
    {CaseKind::WeightedPoincare, "weighted-poincare", true, false, true},
};

const KindInfo& info(CaseKind k) {
    for (const auto& i : kKinds)
        if (i.kind == k) return i;
    throw ConfigError("unknown case kind");
}

struct Combo {
    std::size_t case_index;
    double beta;
    std::optional<double> q;
    std::optional<double> c;
    std::size_t fn;
};

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<Combo> enumerate(const std::vector<CaseSpec>& cases, std::size_t nfn) {
    std::vector<Combo> out;
    for (std::size_t ci = 0; ci < cases.size(); ++ci) {
        const CaseSpec& cs = cases[ci];
        const KindInfo& k = info(cs.kind);
        std::vector<double> betas = {cs.kind == CaseKind::Hardy ? 2.0 : 0.0};
        std::vector<std::optional<double>> qs = {std::nullopt}, cvals = {std::nullopt};
        if (k.beta) {
            if (cs.betas.empty()) throw ConfigError("case '" + cs.name + "' needs betas");
            betas = sorted(cs.betas);
        }
        if (k.q) {
            if (cs.qs.empty()) throw ConfigError("case '" + cs.name + "' needs qs");
            qs.clear();
            for (double q : sorted(cs.qs)) qs.emplace_back(q);
        }
        if (k.c) {
            std::vector<double> c = cs.cs;
            if (c.empty()) c = {cs.kind == CaseKind::GrossPoincare ? 0.0 : 1.0};
            cvals.clear();
            for (double v : sorted(c)) cvals.emplace_back(v);
        }
        for (double b : betas)
            for (const auto& q : qs)
                for (const auto& c : cvals)
                    for (std::size_t f = 0; f < nfn; ++f) out.push_back({ci, b, q, c, f});
    }
    return out;
}

ConstantBundle bundle_for(const Group& g, const CaseSpec& cs, double beta, std::optional<double> q,
                          bool with_gamma) {
    const HardySetting s = with_gamma ? HardySetting::Horizontal : cs.weight.setting();
    return make_bundle(g, s, beta, cs.A2, q, with_gamma);
}

double sobolev_constant(const Group& g, const CaseSpec& cs) {
    if (cs.A2) return *cs.A2;
    const auto a = sobolev_A2(g);
    if (!a) throw ConfigError("no closed-form A2 for " + g.name() + "; set A2 in the case or config");
    return *a;
}

double require_gamma(const ConstantBundle& b) {
    if (!b.gamma) throw DegenerateError("gamma undefined: C_LH degenerate (C_H = 0 with beta > 0)");
    return *b.gamma;
}

// Throws when the combination is inadmissible; cheap, no quadrature.
void precheck(const Group& g, const CaseSpec& cs, const Combo& c, const TestFunction& u) {
    const double beta = c.beta;
    if (info(cs.kind).beta && !(beta >= 0.0 && beta < 2.0) &&
        !(cs.kind == CaseKind::HardySobolev && beta == 2.0))
        throw DomainError("beta " + std::to_string(beta) + " outside the admissible range");
    if (c.q && !(*c.q > 1.0)) throw DomainError("q must exceed 1");
    if (u.dim() != g.dim()) throw DomainError("function dimension does not match the group");
    switch (cs.kind) {
    case CaseKind::Hardy:
        check_admissible(g, cs.weight, u, 2.0);
        if (!(cs.weight.hardy_constant(g) > 0.0)) throw DegenerateError("Hardy constant is zero");
        break;
    case CaseKind::HardySobolev: {
        if (g.homogeneous_dim() < 3) throw DomainError("Hardy-Sobolev needs Q >= 3");
        sobolev_constant(g, cs);
        if (beta > 0.0 && !(cs.weight.hardy_constant(g) > 0.0))
            throw DegenerateError("Hardy-Sobolev with beta > 0 needs C_H > 0");
        check_admissible(g, cs.weight, u, beta);
        break;
    }
    case CaseKind::Sobolev:
        if (g.homogeneous_dim() < 3) throw DomainError("Sobolev needs Q >= 3");
        sobolev_constant(g, cs);
        break;
    case CaseKind::LogHardy:
    case CaseKind::HardyPoincare: {
        const ConstantBundle b = bundle_for(g, cs, beta, c.q, false);
        if (!b.C_LH) throw DegenerateError("C_LH degenerate (C_H = 0 with beta > 0)");
        check_admissible(g, cs.weight, u, 2.0 - beta);
        break;
    }
    case CaseKind::GrossHardy:
    case CaseKind::GrossPoincare: {
        require_gamma(bundle_for(g, cs, beta, c.q, true));
        if (c.c && !(*c.c == 0.0 || *c.c >= 1.0)) throw DomainError("c must be 0 or >= 1");
        // normalization always uses |x'|^(2-beta)
        check_admissible(g, Weight::horizontal(), u, 2.0 - beta);
        break;
    }
    case CaseKind::WeightedPoincare:
        if (g.kind() != GroupKind::Euclidean || g.dim() < 3)
            throw DomainError("weighted Poincare needs Euclidean(n), n >= 3");
        if (!(*c.c >= 1.0)) throw DomainError("weighted Poincare needs c >= 1");
        break;
    }
}

IneqReport evaluate(const Group& g, const CaseSpec& cs, const Combo& c, const TestFunction& u,
                    const QuadOptions& opts) {
    const double beta = c.beta;
    switch (cs.kind) {
    case CaseKind::Hardy:
        return hardy_pair(g, cs.weight, cs.weight.hardy_constant(g), u, opts);
    case CaseKind::HardySobolev:
        return hardy_sobolev_pair(g, cs.weight, sobolev_constant(g, cs), cs.weight.hardy_constant(g),
                                  beta, u, opts);
    case CaseKind::Sobolev:
        return sobolev_pair(g, sobolev_constant(g, cs), u, opts);
    case CaseKind::LogHardy:
        return log_hardy_pair(g, cs.weight, bundle_for(g, cs, beta, std::nullopt, false), u, opts);
    case CaseKind::HardyPoincare:
        return hardy_poincare_pair(g, cs.weight, bundle_for(g, cs, beta, c.q, false), *c.q, u, opts);
    case CaseKind::GrossHardy:
    case CaseKind::GrossPoincare: {
        const ConstantBundle b = bundle_for(g, cs, beta, c.q, true);
        const double gamma = require_gamma(b);
        const TestFunction gn = normalize(g, u, Weight::horizontal(), beta,
                                          Measure::semi_gaussian(gamma, g.horizontal_dim()), opts);
        IneqReport r = cs.kind == CaseKind::GrossHardy
                           ? gross_hardy_pair(g, beta, gamma, gn, opts)
                           : gross_poincare_pair(g, beta, *c.q, *c.c, gamma, gn, opts);
        r.constants = b;
        return r;
    }
    case CaseKind::WeightedPoincare:
        return weighted_poincare_rn(g.dim(), beta, *c.c, u, opts);
    }
    throw ConfigError("unknown case kind");
}

Skipped skip(const CaseSpec& cs, const Combo& c, const TestFunction& u, std::string reason) {
    return Skipped{cs.name, c.beta, c.q, c.c, u.id(), std::move(reason)};
}

}  // namespace

std::string case_kind_name(CaseKind k) { return info(k).name; }

CaseKind case_kind_from_name(const std::string& s) {
    for (const auto& i : kKinds)
        if (s == i.name) return i.kind;
    throw ConfigError("unknown case '" + s + "'");
}

bool uses_beta(CaseKind k) { return info(k).beta; }
bool uses_q(CaseKind k) { return info(k).q; }
bool uses_c(CaseKind k) { return info(k).c; }

int thread_cap() {
    if (const char* env = std::getenv("CARNOT_INEQ_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1)
            throw ConfigError(std::string("CARNOT_INEQ_THREADS must be a positive integer, got '") + env + "'");
        return static_cast<int>(std::min(v, 1024L));
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<Skipped> validate_scan(const Group& g, const std::vector<CaseSpec>& cases,
                                   const std::vector<TestFunction>& suite) {
    std::vector<Skipped> out;
    for (const Combo& c : enumerate(cases, suite.size())) {
        const CaseSpec& cs = cases[c.case_index];
        try {
            precheck(g, cs, c, suite[c.fn]);
        } catch (const Error& e) {
            out.push_back(skip(cs, c, suite[c.fn], e.what()));
        }
    }
    return out;
}

ScanResult slack_scan(const Group& g, const std::vector<CaseSpec>& cases,
                      const std::vector<TestFunction>& suite, std::uint64_t seed,
                      const QuadOptions& opts, int threads) {
    const std::vector<Combo> combos = enumerate(cases, suite.size());
    struct Slot {
        std::optional<IneqReport> report;
        std::optional<Skipped> skipped;
    };
    std::vector<Slot> slots(combos.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto work = [&] {
        for (std::size_t i = next++; i < combos.size() && !failed; i = next++) {
            const Combo& c = combos[i];
            const CaseSpec& cs = cases[c.case_index];
            const TestFunction& u = suite[c.fn];
            try {
                precheck(g, cs, c, u);
                IneqReport r = evaluate(g, cs, c, u, opts);
                r.case_name = cs.name;
                r.beta = c.beta;
                r.q = c.q;
                r.seed = seed;
                r.function_id = u.id();
                const bool has_c = std::any_of(r.aux.begin(), r.aux.end(),
                                               [](const auto& kv) { return kv.first == "c"; });
                if (c.c && !has_c) r.aux.emplace_back("c", *c.c);
                slots[i].report = std::move(r);
            } catch (const Error& e) {
                slots[i].skipped = skip(cs, c, u, e.what());
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };

    int nt = threads > 0 ? threads : thread_cap();
    nt = static_cast<int>(std::min<std::size_t>(nt, std::max<std::size_t>(combos.size(), 1)));
    if (nt <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    ScanResult out;
    for (Slot& s : slots) {
        if (s.report) out.reports.push_back(std::move(*s.report));
        if (s.skipped) out.skipped.push_back(std::move(*s.skipped));
    }
    return out;
}

}  // namespace carnot
