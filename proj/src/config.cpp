#include "carnot/config.hpp"

#include <cmath>
#include <set>

#include "carnot/error.hpp"
#include "carnot/report.hpp"

namespace carnot {

using nlohmann::json;

namespace {

bool nonneg_int(const json& v) {
    return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + " must be an object");
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError("unknown key '" + k + "' in " + where);
}

double num(const json& j, const std::string& what) {
    if (!j.is_number()) throw ConfigError(what + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(what + " must be finite");
    return v;
}

int integer(const json& j, const std::string& what) {
    if (!j.is_number_integer()) throw ConfigError(what + " must be an integer");
    return j.get<int>();
}

std::vector<double> num_list(const json& j, const std::string& what) {
    if (j.is_number()) return {num(j, what)};
    if (!j.is_array()) throw ConfigError(what + " must be a number or an array of numbers");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(num(x, what));
    return out;
}

Range range(const json& j, const std::string& what) {
    if (j.is_number()) return Range::fixed(num(j, what));
    if (j.is_array() && j.size() == 2) {
        Range r{num(j[0], what), num(j[1], what)};
        if (!(r.lo <= r.hi)) throw ConfigError(what + ": lower bound exceeds upper bound");
        return r;
    }
    throw ConfigError(what + " must be a number or [lo, hi]");
}

HalfSpace parse_halfspace(const json& j) {
    only_keys(j, {"v", "d"}, "halfspace");
    if (!j.contains("v")) throw ConfigError("halfspace needs v");
    try {
        return HalfSpace::make(num_list(j.at("v"), "halfspace v"), j.contains("d") ? num(j.at("d"), "halfspace d") : 0.0);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("halfspace: ") + e.what());
    }
}

FamilySpec parse_family(const json& j, const std::optional<HalfSpace>& hs) {
    if (!j.is_object() || !j.contains("family")) throw ConfigError("suite family needs a 'family' key");
    FamilySpec f;
    f.family = j.at("family").is_string() ? j.at("family").get<std::string>() : "";
    if (f.family == "bump") {
        only_keys(j, {"family", "count", "center", "radius", "amplitude", "min_horizontal_norm",
                      "halfspace_margin"},
                  "bump family");
        if (!j.contains("center") || !j.at("center").is_array()) throw ConfigError("bump needs a center array");
        for (const auto& c : j.at("center")) f.center.push_back(range(c, "bump center"));
        if (j.contains("radius")) f.radius = range(j.at("radius"), "bump radius");
        if (j.contains("amplitude")) f.amplitude = range(j.at("amplitude"), "bump amplitude");
        if (j.contains("min_horizontal_norm"))
            f.min_horizontal_norm = num(j.at("min_horizontal_norm"), "min_horizontal_norm");
        if (j.contains("halfspace_margin")) {
            if (!hs) throw ConfigError("halfspace_margin needs a top-level halfspace");
            f.halfspace = hs;
            f.halfspace_margin = num(j.at("halfspace_margin"), "halfspace_margin");
        }
    } else if (f.family == "gaussian_cutoff") {
        only_keys(j, {"family", "count", "sigma", "R", "hole"}, "gaussian_cutoff family");
        if (j.contains("sigma")) f.sigma = range(j.at("sigma"), "sigma");
        if (j.contains("R")) f.R = range(j.at("R"), "R");
        if (j.contains("hole")) f.hole = range(j.at("hole"), "hole");
    } else if (f.family == "radial_power") {
        only_keys(j, {"family", "count", "a", "r_in", "r_out"}, "radial_power family");
        if (j.contains("a")) f.a = range(j.at("a"), "a");
        if (j.contains("r_in")) f.r_in = range(j.at("r_in"), "r_in");
        if (j.contains("r_out")) f.r_out = range(j.at("r_out"), "r_out");
    } else {
        throw ConfigError("unknown family '" + j.at("family").dump() + "'");
    }
    if (j.contains("count")) f.count = integer(j.at("count"), "family count");
    if (f.count < 0) throw ConfigError("family count must be nonnegative");
    return f;
}

CaseSpec parse_case(const json& j, const std::optional<HalfSpace>& hs, std::optional<double> A2) {
    only_keys(j, {"case", "name", "weight", "betas", "qs", "cs", "c", "measure", "A2"}, "case");
    if (!j.contains("case") || !j.at("case").is_string()) throw ConfigError("case needs a 'case' name");
    CaseSpec c;
    c.kind = case_kind_from_name(j.at("case").get<std::string>());
    c.name = j.contains("name") ? j.at("name").get<std::string>() : case_kind_name(c.kind);
    if (j.contains("weight")) c.weight = parse_weight(j.at("weight"), hs);
    if (j.contains("betas")) c.betas = num_list(j.at("betas"), "betas");
    if (j.contains("qs")) c.qs = num_list(j.at("qs"), "qs");
    if (j.contains("cs")) c.cs = num_list(j.at("cs"), "cs");
    if (j.contains("c")) c.cs = num_list(j.at("c"), "c");
    c.A2 = j.contains("A2") ? std::optional<double>(num(j.at("A2"), "A2")) : A2;
    const bool gaussian = c.kind == CaseKind::GrossHardy || c.kind == CaseKind::GrossPoincare ||
                          c.kind == CaseKind::WeightedPoincare;
    if (j.contains("measure")) {
        const std::string m = j.at("measure").is_string() ? j.at("measure").get<std::string>() : "";
        if (m != "lebesgue" && m != "semi_gaussian") throw ConfigError("measure must be lebesgue or semi_gaussian");
        if ((m == "semi_gaussian") != gaussian)
            throw ConfigError("case '" + c.name + "' is evaluated under the " +
                              (gaussian ? "semi_gaussian" : "lebesgue") + " measure");
    }
    if ((c.kind == CaseKind::GrossHardy || c.kind == CaseKind::GrossPoincare) && j.contains("weight") &&
        c.weight.tag != Weight::Tag::HorizontalNorm)
        throw ConfigError("gross cases use the horizontal weight (shifts go in cs)");
    if (uses_beta(c.kind) && c.betas.empty()) throw ConfigError("case '" + c.name + "' needs betas");
    if (uses_q(c.kind) && c.qs.empty()) throw ConfigError("case '" + c.name + "' needs qs");
    return c;
}

}  // namespace

Group parse_group_spec(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ConfigError("group spec must look like kind:n, got '" + s + "'");
    const std::string kind = s.substr(0, colon), arg = s.substr(colon + 1);
    try {
        if (kind == "custom") throw ConfigError("custom groups need a JSON object with strata and coeffs");
        std::size_t used = 0;
        const int n = std::stoi(arg, &used);
        if (used != arg.size()) throw ConfigError("bad dimension in '" + s + "'");
        if (kind == "euclidean") return Group::euclidean(n);
        if (kind == "heisenberg") return Group::heisenberg(n);
    } catch (const std::invalid_argument&) {
        throw ConfigError("bad group spec '" + s + "'");
    } catch (const std::out_of_range&) {
        throw ConfigError("bad group spec '" + s + "'");
    } catch (const DomainError& e) {
        throw ConfigError("group " + s + ": " + e.what());
    }
    throw ConfigError("unknown group kind '" + kind + "'");
}

Group parse_group(const json& j) {
    if (j.is_string()) return parse_group_spec(j.get<std::string>());
    only_keys(j, {"kind", "n", "strata", "coeffs"}, "group");
    if (!j.contains("kind") || !j.at("kind").is_string()) throw ConfigError("group needs a kind");
    const std::string kind = j.at("kind").get<std::string>();
    try {
        if (kind == "euclidean" || kind == "heisenberg") {
            if (!j.contains("n")) throw ConfigError("group needs n");
            const int n = integer(j.at("n"), "group n");
            return kind == "euclidean" ? Group::euclidean(n) : Group::heisenberg(n);
        }
        if (kind == "custom") {
            if (!j.contains("strata")) throw ConfigError("custom group needs strata");
            const auto strata = j.at("strata").get<std::vector<int>>();
            std::vector<std::vector<std::vector<double>>> coeffs;
            if (j.contains("coeffs")) coeffs = j.at("coeffs").get<std::vector<std::vector<std::vector<double>>>>();
            return Group::custom(strata, coeffs);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("group: ") + e.what());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("group: ") + e.what());
    }
    throw ConfigError("unknown group kind '" + kind + "'");
}

Weight parse_weight(const json& j, const std::optional<HalfSpace>& halfspace) {
    std::string kind;
    json body = json::object();
    if (j.is_string()) {
        kind = j.get<std::string>();
    } else if (j.is_object() && j.contains("kind") && j.at("kind").is_string()) {
        only_keys(j, {"kind", "c", "v", "d"}, "weight");
        kind = j.at("kind").get<std::string>();
        body = j;
    } else {
        throw ConfigError("weight must be a name or an object with a kind");
    }
    if (kind == "horizontal") return Weight::horizontal();
    if (kind == "one") return Weight::one();
    if (kind == "shifted") {
        const double c = body.contains("c") ? num(body.at("c"), "weight c") : 1.0;
        if (!(c >= 1.0)) throw ConfigError("shifted weight needs c >= 1");
        return Weight::shifted(c);
    }
    if (kind == "halfspace") {
        if (body.contains("v")) {
            json h = {{"v", body.at("v")}, {"d", body.value("d", json(0.0))}};
            return Weight::halfspace(parse_halfspace(h));
        }
        if (!halfspace) throw ConfigError("halfspace weight needs v or a top-level halfspace");
        return Weight::halfspace(*halfspace);
    }
    throw ConfigError("unknown weight '" + kind + "'");
}

RunConfig parse_config(const json& j) {
    only_keys(j, {"group", "halfspace", "A2", "cases", "suite", "seed", "tol", "max_nodes", "slack_tol", "output"},
              "config");
    RunConfig c;
    if (!j.contains("group")) throw ConfigError("config needs a group");
    c.group = parse_group(j.at("group"));
    if (j.contains("halfspace")) {
        c.halfspace = parse_halfspace(j.at("halfspace"));
        if (static_cast<int>(c.halfspace->v.size()) != c.group.dim())
            throw ConfigError("halfspace normal has wrong dimension for " + c.group.name());
    }
    if (j.contains("A2")) c.A2 = num(j.at("A2"), "A2");
    if (j.contains("cases")) {
        if (!j.at("cases").is_array()) throw ConfigError("cases must be an array");
        for (const auto& cj : j.at("cases")) c.cases.push_back(parse_case(cj, c.halfspace, c.A2));
    }
    for (const auto& cs : c.cases)
        if (cs.weight.tag == Weight::Tag::HalfSpaceDist && static_cast<int>(cs.weight.h.v.size()) != c.group.dim())
            throw ConfigError("case '" + cs.name + "': halfspace normal has wrong dimension");
    std::optional<std::uint64_t> suite_seed;
    if (j.contains("suite")) {
        const json& s = j.at("suite");
        only_keys(s, {"seed", "families"}, "suite");
        if (s.contains("seed")) {
            if (!nonneg_int(s.at("seed"))) throw ConfigError("suite seed must be a nonnegative integer");
            suite_seed = s.at("seed").get<std::uint64_t>();
        }
        if (s.contains("families")) {
            if (!s.at("families").is_array()) throw ConfigError("suite families must be an array");
            for (const auto& f : s.at("families")) c.families.push_back(parse_family(f, c.halfspace));
        }
    }
    if (j.contains("seed")) {
        if (!nonneg_int(j.at("seed"))) throw ConfigError("seed must be a nonnegative integer");
        c.seed = j.at("seed").get<std::uint64_t>();
        if (suite_seed && *suite_seed != c.seed) throw ConfigError("seed and suite.seed disagree");
    } else if (suite_seed) {
        c.seed = *suite_seed;
    }
    if (j.contains("tol")) c.quad.tol = num(j.at("tol"), "tol");
    if (!(c.quad.tol > 0.0)) throw ConfigError("tol must be positive");
    if (j.contains("max_nodes")) {
        if (!nonneg_int(j.at("max_nodes"))) throw ConfigError("max_nodes must be a positive integer");
        c.quad.max_nodes = j.at("max_nodes").get<std::uint64_t>();
    }
    if (c.quad.max_nodes == 0) throw ConfigError("max_nodes must be positive");
    if (j.contains("slack_tol")) c.slack_tol = num(j.at("slack_tol"), "slack_tol");
    if (!(c.slack_tol >= 0.0)) throw ConfigError("slack_tol must be nonnegative");
    if (j.contains("output")) {
        const json& o = j.at("output");
        only_keys(o, {"json", "csv"}, "output");
        if (o.contains("json")) c.json_out = o.at("json").get<std::string>();
        if (o.contains("csv")) c.csv_out = o.at("csv").get<std::string>();
    }
    c.canonical = j;
    c.canonical.erase("output");
    c.canonical["seed"] = c.seed;
    return c;
}

json load_json(const std::filesystem::path& p) {
    const std::string text = read_file(p);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(p.string() + ": " + e.what());
    }
}

std::string config_hash(const RunConfig& c) { return hex64(fnv1a(c.canonical.dump())); }

}  // namespace carnot
