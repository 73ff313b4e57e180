#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "carnot/config.hpp"
#include "carnot/constants.hpp"
#include "carnot/error.hpp"
#include "carnot/probe.hpp"
#include "carnot/report.hpp"
#include "carnot/scan.hpp"
#include "carnot/suite.hpp"

using namespace carnot;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kIo = 3 };

struct Globals {
    std::optional<double> tol;
    std::optional<std::size_t> max_nodes;
    std::optional<std::uint64_t> seed;
    std::string out;
};

QuadOptions quad_options(const Globals& gl) {
    QuadOptions q;
    if (gl.tol) q.tol = *gl.tol;
    if (gl.max_nodes) q.max_nodes = *gl.max_nodes;
    if (!(q.tol > 0.0)) throw ConfigError("--tol must be positive");
    if (q.max_nodes == 0) throw ConfigError("--max-nodes must be positive");
    return q;
}

// stdout when --out is empty
void emit(const Globals& gl, const std::string& text) {
    if (gl.out.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoError("cannot write to stdout");
    } else {
        write_atomic(gl.out, text);
    }
}

std::string csv_path_for(const std::string& json_path) {
    std::filesystem::path p(json_path);
    p.replace_extension(".csv");
    return p.string();
}

int cmd_verify(const Globals& gl, const std::string& config_path) {
    json doc = load_json(config_path);
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    if (gl.tol) doc["tol"] = *gl.tol;
    if (gl.max_nodes) doc["max_nodes"] = *gl.max_nodes;
    if (gl.seed) {
        doc["seed"] = *gl.seed;
        if (doc.contains("suite") && doc["suite"].is_object()) doc["suite"].erase("seed");
    }
    const RunConfig cfg = parse_config(doc);
    const std::vector<TestFunction> suite = build_suite(cfg.group, cfg.families, cfg.seed);

    const std::vector<Skipped> invalid = validate_scan(cfg.group, cfg.cases, suite);
    for (const auto& s : invalid) {
        std::cerr << "skip " << s.case_name << " beta=" << s.beta;
        if (s.q) std::cerr << " q=" << *s.q;
        if (s.c) std::cerr << " c=" << *s.c;
        std::cerr << " " << s.function_id << ": " << s.reason << "\n";
    }

    const ScanResult res = slack_scan(cfg.group, cfg.cases, suite, cfg.seed, cfg.quad);

    ReportDocument d;
    d.seed = cfg.seed;
    d.config_hash = config_hash(cfg);
    d.group = cfg.group.name();
    d.slack_tol = cfg.slack_tol;
    d.reports = res.reports;
    d.skipped = res.skipped;
    const std::string json_path = gl.out.empty() ? cfg.json_out : gl.out;
    const std::string csv_path = gl.out.empty() ? cfg.csv_out : csv_path_for(gl.out);
    write_atomic(json_path, to_json(d).dump(2) + "\n");
    write_atomic(csv_path, to_csv(d.reports));

    std::size_t failing = 0, nonconv = 0;
    for (const auto& r : d.reports) {
        if (!r.converged) ++nonconv;
        if (!passes(r, cfg.slack_tol)) {
            ++failing;
            std::cerr << "FAIL " << r.case_name << " beta=" << r.beta;
            if (r.q) std::cerr << " q=" << *r.q;
            std::cerr << " " << r.function_id << " slack=" << r.slack << (r.converged ? "" : " (not converged)")
                      << "\n";
        }
    }
    std::printf("%zu reports, %zu skipped, %zu failing (%zu not converged) -> %s, %s\n", d.reports.size(),
                d.skipped.size(), failing, nonconv, json_path.c_str(), csv_path.c_str());
    return failing == 0 ? kPass : kFail;
}

struct ConstantsArgs {
    std::string group;
    double beta = 0.0;
    std::string setting = "horizontal";
    std::optional<double> A2;
    std::optional<double> q;
};

int cmd_constants(const Globals& gl, const ConstantsArgs& a) {
    const Group g = parse_group_spec(a.group);
    const HardySetting s = a.setting == "halfspace" ? HardySetting::HalfSpace : HardySetting::Horizontal;
    if (!(a.beta >= 0.0 && a.beta < 2.0)) throw ConfigError("--beta must lie in [0, 2)");
    std::optional<double> A2 = a.A2;
    if (!A2) {
        try {
            A2 = sobolev_A2(g);
        } catch (const DomainError& e) {
            throw ConfigError(std::string("A2 unavailable: ") + e.what() + "; pass --A2");
        }
        if (!A2) throw ConfigError("no closed-form A2 for " + g.name() + "; pass --A2");
    }
    if (g.homogeneous_dim() < 3) throw ConfigError("constants need homogeneous dimension Q >= 3");
    ConstantBundle b = make_bundle(g, s, a.beta, A2, a.q, false);
    try {
        b.gamma = make_bundle(g, s, a.beta, A2, a.q, true).gamma;
    } catch (const DegenerateError&) {
    }
    const int Q = g.homogeneous_dim();
    json j = {{"group", g.name()},
              {"setting", setting_name(s)},
              {"Q", Q},
              {"N", g.horizontal_dim()},
              {"constants", to_json(b)}};
    try {
        const Rational rb = Rational::from_double(a.beta);
        j["C_LH_exponents"] = {{"A2", c_lh_a2_exponent(Q, rb).str()}, {"C_H", c_lh_ch_exponent(Q, rb).str()}};
    } catch (const Error&) {
    }

    auto row = [](const char* k, const std::optional<double>& v) {
        char buf[96];
        if (v)
            std::snprintf(buf, sizeof buf, "%-6s %.17g\n", k, *v);
        else
            std::snprintf(buf, sizeof buf, "%-6s -\n", k);
        return std::string(buf);
    };
    std::string text = g.name() + " (" + setting_name(s) + ", Q=" + std::to_string(Q) +
                       ", N=" + std::to_string(g.horizontal_dim()) + ")\n";
    text += row("beta", b.beta) + row("A2", b.A2) + row("C_H", b.C_H) + row("C_LH", b.C_LH) +
            row("gamma", b.gamma) + row("q", b.q);
    if (!gl.out.empty()) {
        std::cout << text;
        emit(gl, j.dump(2) + "\n");
    } else {
        emit(gl, text + j.dump(2) + "\n");
    }
    return kPass;
}

struct ProbeArgs {
    std::string case_name;
    std::string group;
    std::string family = "power";
    std::vector<double> normal;
    double d = 0.0;
    std::vector<double> theta0;
    int max_iter = 200;
    double xtol = 1e-4;
    double ftol = 1e-6;
};

int cmd_probe(const Globals& gl, const ProbeArgs& a) {
    const Group g = parse_group_spec(a.group);
    Weight w = Weight::horizontal();
    std::optional<ProbeFamily> fam;
    if (a.case_name == "horizontal-hardy") {
        if (a.family != "power") throw ConfigError("horizontal-hardy supports --family power");
        if (g.homogeneous_dim() < 3) throw ConfigError("horizontal-hardy needs Q >= 3");
        fam = radial_power_probe(g);
    } else {
        std::vector<double> v = a.normal;
        if (v.empty()) {
            v.assign(g.dim(), 0.0);
            v[0] = 1.0;
        }
        if (static_cast<int>(v.size()) != g.dim()) throw ConfigError("--normal has wrong dimension");
        HalfSpace h;
        try {
            h = HalfSpace::make(v, a.d);
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
        w = Weight::halfspace(h);
        if (a.family == "power")
            fam = halfspace_power_probe(g, h);
        else if (a.family == "bump")
            fam = halfspace_bump_probe(g, h);
        else
            throw ConfigError("halfspace-hardy supports --family power or bump");
    }
    std::vector<double> theta0 = a.theta0.empty() ? fam->theta0 : a.theta0;
    if (theta0.size() != fam->params.size())
        throw ConfigError("--theta0 needs " + std::to_string(fam->params.size()) + " values");
    for (std::size_t i = 0; i < theta0.size(); ++i)
        if (!(theta0[i] >= fam->lo[i] && theta0[i] <= fam->hi[i]))
            throw ConfigError("--theta0 outside the family box for " + fam->params[i]);
    if (a.max_iter < 0) throw ConfigError("--max-iter must be nonnegative");

    NelderMeadOptions nm;
    nm.max_iter = a.max_iter;
    nm.xtol = a.xtol;
    nm.ftol = a.ftol;
    const ProbeResult r = minimize_quotient(g, w, *fam, theta0, nm, quad_options(gl));
    json j = to_json(r);
    j["case"] = a.case_name;
    j["group"] = g.name();
    j["params"] = fam->params;
    emit(gl, j.dump(2) + "\n");
    if (!r.quad_converged)
        std::cerr << "warning: quadrature did not reach --tol for every quotient (quad_err " << r.quad_err << ")\n";
    return r.converged && r.quad_converged ? kPass : kFail;
}

int cmd_report(const Globals& gl, const std::string& input, const std::string& format) {
    const std::string text = read_file(input);
    ReportDocument d;
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError(input + ": " + e.what());
        }
        d = document_from_json(j);
    }
    emit(gl, format == "csv" ? to_csv(d.reports) : to_markdown(d));
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks of Hardy, Sobolev and logarithmic inequalities on stratified groups",
                 "carnot-ineq"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals gl;
    double tol = 0.0;
    std::size_t max_nodes = 0;
    std::uint64_t seed = 0;
    auto* o_tol = app.add_option("--tol", tol, "Relative quadrature tolerance");
    auto* o_nodes = app.add_option("--max-nodes", max_nodes, "Quadrature node budget per integral");
    auto* o_seed = app.add_option("--seed", seed, "Seed for random suites (overrides the config)");
    app.add_option("--out", gl.out, "Output file (verify: JSON report, CSV written beside it)");

    auto* verify = app.add_subcommand("verify", "Run the slack scan described by a JSON config");
    std::string config_path;
    verify->add_option("config,--config", config_path, "Config file")->required();

    auto* constants = app.add_subcommand("constants", "Print the constant bundle of a group");
    ConstantsArgs ca;
    constants->add_option("--group", ca.group, "Group spec, e.g. heisenberg:1")->required();
    constants->add_option("--beta", ca.beta, "beta in [0, 2)");
    constants->add_option("--setting", ca.setting, "horizontal or halfspace")
        ->check(CLI::IsMember({"horizontal", "halfspace"}));
    auto* o_a2 = constants->add_option("--A2", "Sobolev constant override");
    auto* o_q = constants->add_option("--q", "Poincare exponent to record");

    auto* probe = app.add_subcommand("probe", "Minimize a Rayleigh quotient over a test-function family");
    ProbeArgs pa;
    probe->add_option("--case", pa.case_name, "horizontal-hardy or halfspace-hardy")
        ->required()
        ->check(CLI::IsMember({"horizontal-hardy", "halfspace-hardy"}));
    probe->add_option("--group", pa.group, "Group spec, e.g. euclidean:4")->required();
    probe->add_option("--family", pa.family, "power (default) or bump (halfspace only)");
    probe->add_option("--normal", pa.normal, "Half-space normal (default e_1)");
    probe->add_option("--offset", pa.d, "Half-space offset d");
    probe->add_option("--theta0", pa.theta0, "Starting parameters");
    probe->add_option("--max-iter", pa.max_iter, "Nelder-Mead iteration cap");
    probe->add_option("--xtol", pa.xtol, "Simplex diameter tolerance");
    probe->add_option("--ftol", pa.ftol, "Simplex value spread tolerance");

    auto* report = app.add_subcommand("report", "Convert a JSON report to CSV or Markdown");
    std::string input, format = "csv";
    report->add_option("input,--input", input, "JSON report")->required();
    report->add_option("--format", format, "csv or md")->check(CLI::IsMember({"csv", "md"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }
    if (*o_tol) gl.tol = tol;
    if (*o_nodes) gl.max_nodes = max_nodes;
    if (*o_seed) gl.seed = seed;
    if (*o_a2) ca.A2 = o_a2->as<double>();
    if (*o_q) ca.q = o_q->as<double>();

    try {
        if (*verify) return cmd_verify(gl, config_path);
        if (*constants) return cmd_constants(gl, ca);
        if (*probe) return cmd_probe(gl, pa);
        if (*report) return cmd_report(gl, input, format);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFail;
    }
    return kConfig;
}
