#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "carnot/functionals.hpp"

namespace carnot {

enum class CaseKind {
    Hardy,
    HardySobolev,
    Sobolev,
    LogHardy,
    HardyPoincare,
    GrossHardy,
    GrossPoincare,
    WeightedPoincare,
};

std::string case_kind_name(CaseKind k);
// Throws ConfigError for unknown names.
CaseKind case_kind_from_name(const std::string& s);
bool uses_beta(CaseKind k);
bool uses_q(CaseKind k);
bool uses_c(CaseKind k);

struct CaseSpec {
    std::string name;  // label in reports, defaults to the kind name
    CaseKind kind = CaseKind::Hardy;
    Weight weight = Weight::horizontal();
    std::vector<double> betas;
    std::vector<double> qs;
    std::vector<double> cs;  // gross-poincare shift (0 or >= 1), weighted-poincare c
    std::optional<double> A2;
};

struct Skipped {
    std::string case_name;
    double beta = 0.0;
    std::optional<double> q;
    std::optional<double> c;
    std::string function_id;
    std::string reason;
};

struct ScanResult {
    std::vector<IneqReport> reports;
    std::vector<Skipped> skipped;
};

// Worker count: CARNOT_INEQ_THREADS if set (ConfigError when not a positive
// integer), else the hardware concurrency.
int thread_cap();

// Lists inadmissible combinations without integrating anything.
std::vector<Skipped> validate_scan(const Group& g, const std::vector<CaseSpec>& cases,
                                   const std::vector<TestFunction>& suite);

// Every (case, beta, q, c, function) combination, sorted in that order with
// betas, qs and cs ascending and functions in suite order. Combinations that
// fail validation or throw during evaluation are listed in skipped.
ScanResult slack_scan(const Group& g, const std::vector<CaseSpec>& cases,
                      const std::vector<TestFunction>& suite, std::uint64_t seed,
                      const QuadOptions& opts = {}, int threads = 0);

}  // namespace carnot
