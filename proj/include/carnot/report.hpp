#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "carnot/probe.hpp"
#include "carnot/scan.hpp"

namespace carnot {

inline constexpr const char* kToolName = "carnot-ineq";
inline constexpr const char* kToolVersion = "1.0.0";

// 64-bit FNV-1a
std::uint64_t fnv1a(std::string_view s);
std::string hex64(std::uint64_t v);

// slack >= -tol (1 + |rhs|) with converged quadrature
bool passes(const IneqReport& r, double tol);

nlohmann::json to_json(const ConstantBundle& b);
nlohmann::json to_json(const ProbeResult& p);
nlohmann::json to_json(const IneqReport& r);
IneqReport report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Skipped& s);
Skipped skipped_from_json(const nlohmann::json& j);

struct ReportDocument {
    std::string tool = kToolName;
    std::string version = kToolVersion;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string group;
    double slack_tol = 1e-6;
    std::vector<IneqReport> reports;
    std::vector<Skipped> skipped;
};

nlohmann::json to_json(const ReportDocument& d);
// Throws ConfigError on a malformed document.
ReportDocument document_from_json(const nlohmann::json& j);

// Header case,beta,q,seed,function_id,lhs,rhs,slack,quad_err,converged,A2,C_H,C_LH,gamma;
// reals as %.17g, missing optionals empty, LF line endings.
std::string to_csv(const std::vector<IneqReport>& reports);
std::vector<IneqReport> parse_csv(const std::string& text);

// Min slack per case x beta x q, then (beta, slack) columns per case.
std::string to_markdown(const ReportDocument& d);

std::string read_file(const std::filesystem::path& p);
// Writes to a temporary sibling and renames it over p; IoError on failure.
void write_atomic(const std::filesystem::path& p, const std::string& content);

}  // namespace carnot
