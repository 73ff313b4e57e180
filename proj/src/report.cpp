#include "carnot/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>
#include <unistd.h>

#include "carnot/error.hpp"

namespace carnot {

using nlohmann::json;

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(std::move(cur));
    return out;
}

double parse_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ConfigError("bad number '" + s + "' in CSV");
    }
    if (pos != s.size()) throw ConfigError("bad number '" + s + "' in CSV");
    return v;
}

std::optional<double> parse_opt(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
}

constexpr const char* kCsvHeader =
    "case,beta,q,seed,function_id,lhs,rhs,slack,quad_err,converged,A2,C_H,C_LH,gamma";

}  // namespace

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

bool passes(const IneqReport& r, double tol) {
    return r.converged && std::isfinite(r.slack) && r.slack >= -tol * (1.0 + std::abs(r.rhs));
}

json to_json(const ConstantBundle& b) {
    return {{"A2", b.A2},         {"C_H", b.C_H},           {"beta", b.beta},
            {"q", opt(b.q)}, {"C_LH", opt(b.C_LH)}, {"gamma", opt(b.gamma)}};
}

json to_json(const ProbeResult& p) {
    return {{"family", p.family},
            {"theta_star", p.theta_star},
            {"quotient_min", p.quotient_min},
            {"reference_constant", p.reference_constant},
            {"gap", p.gap},
            {"iterations", p.iterations},
            {"evaluations", p.evaluations},
            {"converged", p.converged},
            {"quad_converged", p.quad_converged},
            {"quad_err", p.quad_err},
            {"min_evaluated", p.min_evaluated},
            {"best_history", p.best_history}};
}

json to_json(const IneqReport& r) {
    const json c = to_json(r.constants);
    json aux = json::object();
    for (const auto& [k, v] : r.aux) aux[k] = v;
    return {{"case", r.case_name},   {"lhs", r.lhs},
            {"rhs", r.rhs},          {"slack", r.slack},
            {"quad_err", r.quad_err}, {"converged", r.converged},
            {"constants", c},        {"beta", r.beta},
            {"q", opt(r.q)},         {"seed", r.seed},
            {"function_id", r.function_id}, {"aux", aux}};
}

IneqReport report_from_json(const json& j) {
    try {
        IneqReport r;
        r.case_name = j.at("case").get<std::string>();
        r.lhs = j.at("lhs").get<double>();
        r.rhs = j.at("rhs").get<double>();
        r.slack = j.at("slack").get<double>();
        r.quad_err = j.at("quad_err").get<double>();
        r.converged = j.at("converged").get<bool>();
        const json& c = j.at("constants");
        r.constants.A2 = c.at("A2").get<double>();
        r.constants.C_H = c.at("C_H").get<double>();
        r.constants.beta = c.at("beta").get<double>();
        r.constants.q = opt_from(c, "q");
        r.constants.C_LH = opt_from(c, "C_LH");
        r.constants.gamma = opt_from(c, "gamma");
        r.beta = j.at("beta").get<double>();
        r.q = opt_from(j, "q");
        r.seed = j.at("seed").get<std::uint64_t>();
        r.function_id = j.at("function_id").get<std::string>();
        if (j.contains("aux"))
            for (const auto& [k, v] : j.at("aux").items()) r.aux.emplace_back(k, v.get<double>());
        return r;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed report entry: ") + e.what());
    }
}

json to_json(const Skipped& s) {
    return {{"case", s.case_name}, {"beta", s.beta},           {"q", opt(s.q)},
            {"c", opt(s.c)},       {"function_id", s.function_id}, {"reason", s.reason}};
}

Skipped skipped_from_json(const json& j) {
    try {
        return Skipped{j.at("case").get<std::string>(), j.at("beta").get<double>(), opt_from(j, "q"),
                       opt_from(j, "c"), j.at("function_id").get<std::string>(),
                       j.at("reason").get<std::string>()};
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed skipped entry: ") + e.what());
    }
}

json to_json(const ReportDocument& d) {
    json reps = json::array(), sk = json::array();
    std::size_t violations = 0, nonconv = 0;
    for (const auto& r : d.reports) {
        reps.push_back(to_json(r));
        if (!r.converged) ++nonconv;
        if (!passes(r, d.slack_tol)) ++violations;
    }
    for (const auto& s : d.skipped) sk.push_back(to_json(s));
    return {{"tool", d.tool},
            {"version", d.version},
            {"seed", d.seed},
            {"config_hash", d.config_hash},
            {"group", d.group},
            {"slack_tol", d.slack_tol},
            {"summary",
             {{"reports", d.reports.size()},
              {"skipped", d.skipped.size()},
              {"failing", violations},
              {"nonconverged", nonconv}}},
            {"reports", reps},
            {"skipped", sk}};
}

ReportDocument document_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("report document must be a JSON object");
    ReportDocument d;
    try {
        d.tool = j.value("tool", std::string(kToolName));
        d.version = j.value("version", std::string(kToolVersion));
        d.seed = j.value("seed", std::uint64_t{0});
        d.config_hash = j.value("config_hash", std::string());
        d.group = j.value("group", std::string());
        d.slack_tol = j.value("slack_tol", 1e-6);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed report header: ") + e.what());
    }
    if (j.contains("reports")) {
        if (!j.at("reports").is_array()) throw ConfigError("'reports' must be an array");
        for (const auto& r : j.at("reports")) d.reports.push_back(report_from_json(r));
    }
    if (j.contains("skipped")) {
        if (!j.at("skipped").is_array()) throw ConfigError("'skipped' must be an array");
        for (const auto& s : j.at("skipped")) d.skipped.push_back(skipped_from_json(s));
    }
    return d;
}

std::string to_csv(const std::vector<IneqReport>& reports) {
    std::string out = std::string(kCsvHeader) + "\n";
    auto o = [](const std::optional<double>& v) { return v ? g17(*v) : std::string(); };
    for (const auto& r : reports) {
        out += csv_field(r.case_name) + "," + g17(r.beta) + "," + o(r.q) + "," + std::to_string(r.seed) +
               "," + csv_field(r.function_id) + "," + g17(r.lhs) + "," + g17(r.rhs) + "," + g17(r.slack) +
               "," + g17(r.quad_err) + "," + (r.converged ? "true" : "false") + "," +
               g17(r.constants.A2) + "," + g17(r.constants.C_H) + "," + o(r.constants.C_LH) + "," +
               o(r.constants.gamma) + "\n";
    }
    return out;
}

std::vector<IneqReport> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) return {};
    if (!std::getline(in, line) || line != kCsvHeader) throw ConfigError("CSV header mismatch");
    std::vector<IneqReport> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 14) throw ConfigError("CSV row has " + std::to_string(f.size()) + " fields");
        IneqReport r;
        r.case_name = f[0];
        r.beta = parse_double(f[1]);
        r.q = parse_opt(f[2]);
        r.seed = std::stoull(f[3]);
        r.function_id = f[4];
        r.lhs = parse_double(f[5]);
        r.rhs = parse_double(f[6]);
        r.slack = parse_double(f[7]);
        r.quad_err = parse_double(f[8]);
        if (f[9] != "true" && f[9] != "false") throw ConfigError("bad converged flag '" + f[9] + "'");
        r.converged = f[9] == "true";
        r.constants.A2 = parse_double(f[10]);
        r.constants.C_H = parse_double(f[11]);
        r.constants.C_LH = parse_opt(f[12]);
        r.constants.gamma = parse_opt(f[13]);
        r.constants.beta = r.beta;
        r.constants.q = r.q;
        out.push_back(std::move(r));
    }
    return out;
}

std::string to_markdown(const ReportDocument& d) {
    struct Agg {
        std::size_t n = 0, failing = 0;
        double min_slack = INFINITY;
        double max_err = 0.0;
    };
    // cases in first-appearance order; q = -1 marks q-free cases
    std::vector<std::string> order;
    std::map<std::string, std::map<std::tuple<double, double>, Agg>> table;
    for (const auto& r : d.reports) {
        if (!table.count(r.case_name)) order.push_back(r.case_name);
        Agg& a = table[r.case_name][{r.beta, r.q.value_or(-1.0)}];
        ++a.n;
        a.min_slack = std::min(a.min_slack, r.slack);
        a.max_err = std::max(a.max_err, r.quad_err);
        if (!passes(r, d.slack_tol)) ++a.failing;
    }
    auto q_str = [](double q) { return q < 0.0 ? std::string("-") : g17(q); };
    std::ostringstream md;
    md << "# " << d.tool << " report\n\n";
    md << "seed " << d.seed << ", config " << (d.config_hash.empty() ? "-" : d.config_hash) << ", "
       << d.reports.size() << " reports, " << d.skipped.size() << " skipped\n\n";
    md << "| case | beta | q | n | min slack | max quad_err | failing |\n";
    md << "|---|---|---|---|---|---|---|\n";
    for (const auto& name : order)
        for (const auto& [key, a] : table[name]) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.6g | %.2e", a.min_slack, a.max_err);
            md << "| " << name << " | " << g17(std::get<0>(key)) << " | " << q_str(std::get<1>(key)) << " | "
               << a.n << " | " << buf << " | " << a.failing << " |\n";
        }
    for (const auto& name : order) {
        md << "\n## " << name << " (beta, slack)\n\n```csv\nbeta,slack\n";
        for (const auto& r : d.reports)
            if (r.case_name == name) md << g17(r.beta) << "," << g17(r.slack) << "\n";
        md << "```\n";
    }
    if (!d.skipped.empty()) {
        md << "\n## skipped\n\n| case | beta | q | function | reason |\n|---|---|---|---|---|\n";
        for (const auto& s : d.skipped)
            md << "| " << s.case_name << " | " << g17(s.beta) << " | " << (s.q ? g17(*s.q) : "-") << " | "
               << s.function_id << " | " << s.reason << " |\n";
    }
    return md.str();
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading " + p.string());
    return ss.str();
}

void write_atomic(const std::filesystem::path& p, const std::string& content) {
    std::filesystem::path tmp = p;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw IoError("error writing " + tmp.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, p, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename onto " + p.string());
    }
}

}  // namespace carnot
