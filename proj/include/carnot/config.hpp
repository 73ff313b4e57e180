#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "carnot/scan.hpp"
#include "carnot/suite.hpp"

namespace carnot {

struct RunConfig {
    Group group = Group::euclidean(3);
    std::optional<HalfSpace> halfspace;
    std::optional<double> A2;
    std::vector<CaseSpec> cases;
    std::vector<FamilySpec> families;
    std::uint64_t seed = 0;
    QuadOptions quad;
    double slack_tol = 1e-6;
    std::string json_out = "report.json";
    std::string csv_out = "report.csv";
    // effective document without the output block; hashed into reports
    nlohmann::json canonical;
};

// "euclidean:3", "heisenberg:1"
Group parse_group_spec(const std::string& s);
// Object {"kind", "n"} / {"kind": "custom", "strata", "coeffs"} or a spec string.
Group parse_group(const nlohmann::json& j);

Weight parse_weight(const nlohmann::json& j, const std::optional<HalfSpace>& halfspace);

// ConfigError on any schema violation, including unknown keys.
RunConfig parse_config(const nlohmann::json& j);
// IoError when unreadable, ConfigError when not valid JSON or not a valid config.
nlohmann::json load_json(const std::filesystem::path& p);

std::string config_hash(const RunConfig& c);

}  // namespace carnot
