#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "carnot/config.hpp"
#include "carnot/error.hpp"
#include "carnot/report.hpp"
#include "carnot/scan.hpp"
#include "carnot/suite.hpp"

using namespace carnot;
using nlohmann::json;

namespace {

FamilySpec bumps(int count) {
    FamilySpec f;
    f.family = "bump";
    f.count = count;
    f.center = {{1.5, 3.0}, {-1.0, 1.0}, {-1.0, 1.0}};
    f.radius = {0.5, 1.0};
    f.min_horizontal_norm = 0.25;
    return f;
}

CaseSpec make_case(CaseKind k, std::vector<double> betas = {}, std::vector<double> qs = {}) {
    CaseSpec c;
    c.kind = k;
    c.name = case_kind_name(k);
    c.betas = std::move(betas);
    c.qs = std::move(qs);
    return c;
}

void expect_same(const IneqReport& a, const IneqReport& b) {
    EXPECT_EQ(a.case_name, b.case_name);
    EXPECT_EQ(a.function_id, b.function_id);
    EXPECT_EQ(a.seed, b.seed);
    EXPECT_EQ(a.beta, b.beta);
    EXPECT_EQ(a.q, b.q);
    EXPECT_EQ(a.lhs, b.lhs);
    EXPECT_EQ(a.rhs, b.rhs);
    EXPECT_EQ(a.slack, b.slack);
    EXPECT_EQ(a.quad_err, b.quad_err);
    EXPECT_EQ(a.converged, b.converged);
    EXPECT_EQ(a.constants.A2, b.constants.A2);
    EXPECT_EQ(a.constants.C_H, b.constants.C_H);
    EXPECT_EQ(a.constants.C_LH, b.constants.C_LH);
    EXPECT_EQ(a.constants.gamma, b.constants.gamma);
}

}  // namespace

TEST(Suite, SeedDeterminism) {
    const Group g = Group::euclidean(3);
    FamilySpec gc;
    gc.family = "gaussian_cutoff";
    gc.count = 2;
    gc.sigma = {0.5, 1.5};
    const auto a = build_suite(g, {bumps(4), gc}, 7);
    const auto b = build_suite(g, {bumps(4), gc}, 7);
    const auto c = build_suite(g, {bumps(4), gc}, 8);
    ASSERT_EQ(a.size(), 6u);
    EXPECT_EQ(a[0].id(), "bump#0");
    EXPECT_EQ(a[5].id(), "gaussian_cutoff#5");
    const std::vector<double> x{2.0, 0.1, -0.1};
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i](x), b[i](x));
        differs = differs || a[i](x) != c[i](x);
    }
    EXPECT_TRUE(differs);
    // min_horizontal_norm: nothing within |x'| < 0.25
    Rng probe(1);
    for (int i = 0; i < 4; ++i) {
        const Box& box = a[i].support_box();
        for (int k = 0; k < 2000; ++k) {
            std::vector<double> p{probe.uniform(-0.25, 0.25), probe.uniform(-0.25, 0.25),
                                  probe.uniform(box.lo[2], box.hi[2])};
            if (std::hypot(p[0], p[1]) < 0.25) {
                EXPECT_EQ(a[i](p), 0.0);
            }
        }
    }
}

TEST(Suite, RngIsFixed) {
    Rng r(42);
    const double first = r.uniform();
    EXPECT_GE(first, 0.0);
    EXPECT_LT(first, 1.0);
    // mt19937_64 default-seeded first output is 14514284786278117030
    Rng d(5489);
    EXPECT_EQ(d.uniform(), static_cast<double>(14514284786278117030ull >> 11) * 0x1.0p-53);
}

TEST(Scan, EmptySuite) {
    const auto r = slack_scan(Group::euclidean(3), {make_case(CaseKind::Hardy)}, {}, 1);
    EXPECT_TRUE(r.reports.empty());
    EXPECT_TRUE(r.skipped.empty());
}

TEST(Scan, SingleReport) {
    const Group g = Group::euclidean(3);
    const auto suite = build_suite(g, {bumps(1)}, 3);
    const auto r = slack_scan(g, {make_case(CaseKind::Hardy)}, suite, 3);
    ASSERT_EQ(r.reports.size(), 1u);
    EXPECT_EQ(r.reports[0].case_name, "hardy");
    EXPECT_EQ(r.reports[0].function_id, "bump#0");
    EXPECT_EQ(r.reports[0].seed, 3u);
    EXPECT_EQ(r.reports[0].beta, 2.0);
    EXPECT_GE(r.reports[0].slack, 0.0);
}

TEST(Scan, CartesianCountAndOrder) {
    const Group g = Group::euclidean(3);
    const auto suite = build_suite(g, {bumps(5)}, 11);
    const std::vector<CaseSpec> cases{make_case(CaseKind::HardySobolev, {1, 0}, {2, 3}),
                                      make_case(CaseKind::LogHardy, {0, 1}, {2, 3})};
    const auto r = slack_scan(g, cases, suite, 11, {}, 2);
    ASSERT_EQ(r.reports.size(), 20u);
    EXPECT_TRUE(r.skipped.empty());
    for (std::size_t i = 0; i < 20; ++i) {
        const auto& rep = r.reports[i];
        EXPECT_EQ(rep.case_name, i < 10 ? "hardy-sobolev" : "log-hardy");
        EXPECT_EQ(rep.beta, (i % 10) < 5 ? 0.0 : 1.0);
        EXPECT_EQ(rep.function_id, "bump#" + std::to_string(i % 5));
        EXPECT_FALSE(rep.q.has_value());
        EXPECT_TRUE(passes(rep, 1e-6)) << rep.case_name << " " << rep.function_id;
    }
}

TEST(Scan, QAndCAxes) {
    const Group g = Group::euclidean(3);
    const auto suite = build_suite(g, {bumps(2)}, 5);
    CaseSpec hp = make_case(CaseKind::HardyPoincare, {0}, {3, 1.5});
    hp.weight = Weight::shifted(1.0);
    const auto r = slack_scan(g, {hp}, suite, 5);
    ASSERT_EQ(r.reports.size(), 4u);
    EXPECT_EQ(*r.reports[0].q, 1.5);
    EXPECT_EQ(*r.reports[3].q, 3.0);
}

TEST(Scan, SkippedWithReason) {
    const Group g = Group::euclidean(3);
    const auto h = HalfSpace::make({1, 0, 0}, 0);
    FamilySpec near = bumps(1);
    near.center = {Range::fixed(0.5), Range::fixed(0), Range::fixed(0)};
    near.radius = Range::fixed(1.0);
    near.min_horizontal_norm = 0.0;
    const auto suite = build_suite(g, {near}, 1);
    CaseSpec hs = make_case(CaseKind::Hardy);
    hs.name = "hardy-halfspace";
    hs.weight = Weight::halfspace(h);
    const auto v = validate_scan(g, {hs}, suite);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_FALSE(v[0].reason.empty());
    const auto r = slack_scan(g, {hs}, suite, 1);
    EXPECT_TRUE(r.reports.empty());
    ASSERT_EQ(r.skipped.size(), 1u);
    EXPECT_EQ(r.skipped[0].case_name, "hardy-halfspace");
    EXPECT_EQ(r.skipped[0].function_id, "bump#0");
    EXPECT_FALSE(r.skipped[0].reason.empty());
}

TEST(Scan, DegenerateHeisenbergGrossSkipped) {
    const Group g = Group::heisenberg(1);
    FamilySpec gc;
    gc.family = "gaussian_cutoff";
    gc.hole = Range::fixed(0.3);
    const auto suite = build_suite(g, {gc}, 1);
    const auto r = slack_scan(g, {make_case(CaseKind::GrossHardy, {0, 1})}, suite, 1);
    ASSERT_EQ(r.reports.size(), 1u);
    EXPECT_EQ(r.reports[0].beta, 0.0);
    ASSERT_EQ(r.skipped.size(), 1u);
    EXPECT_EQ(r.skipped[0].beta, 1.0);
}

TEST(Scan, ThreadCountDoesNotChangeOutput) {
    const Group g = Group::heisenberg(1);
    const auto suite = build_suite(g, {bumps(3)}, 9);
    const std::vector<CaseSpec> cases{make_case(CaseKind::Hardy), make_case(CaseKind::Sobolev)};
    const auto a = slack_scan(g, cases, suite, 9, {}, 1);
    const auto b = slack_scan(g, cases, suite, 9, {}, 3);
    ASSERT_EQ(a.reports.size(), b.reports.size());
    for (std::size_t i = 0; i < a.reports.size(); ++i) expect_same(a.reports[i], b.reports[i]);
}

TEST(Scan, ThreadCapEnv) {
    ::setenv("CARNOT_INEQ_THREADS", "3", 1);
    EXPECT_EQ(thread_cap(), 3);
    ::setenv("CARNOT_INEQ_THREADS", "0", 1);
    EXPECT_THROW(thread_cap(), ConfigError);
    ::setenv("CARNOT_INEQ_THREADS", "two", 1);
    EXPECT_THROW(thread_cap(), ConfigError);
    ::unsetenv("CARNOT_INEQ_THREADS");
    EXPECT_GE(thread_cap(), 1);
}

TEST(CaseKinds, Names) {
    for (auto k : {CaseKind::Hardy, CaseKind::HardySobolev, CaseKind::Sobolev, CaseKind::LogHardy,
                   CaseKind::HardyPoincare, CaseKind::GrossHardy, CaseKind::GrossPoincare,
                   CaseKind::WeightedPoincare})
        EXPECT_EQ(case_kind_from_name(case_kind_name(k)), k);
    EXPECT_THROW(case_kind_from_name("poincare"), ConfigError);
    EXPECT_FALSE(uses_beta(CaseKind::Hardy));
    EXPECT_TRUE(uses_q(CaseKind::GrossPoincare));
    EXPECT_TRUE(uses_c(CaseKind::WeightedPoincare));
}

namespace {

json small_config() {
    return json::parse(R"({
      "group": "euclidean:3",
      "cases": [{"case": "hardy"}, {"case": "gross-poincare", "betas": [1], "qs": [2], "cs": [1]}],
      "suite": {"seed": 4, "families": [{"family": "bump", "count": 2,
                "center": [[1.5, 3], 0, [-1, 1]], "radius": 0.7, "min_horizontal_norm": 0.25}]},
      "tol": 1e-8,
      "output": {"json": "a.json", "csv": "a.csv"}
    })");
}

}  // namespace

TEST(Config, ParsesAndHashes) {
    const auto c = parse_config(small_config());
    EXPECT_EQ(c.group.name(), "euclidean:3");
    ASSERT_EQ(c.cases.size(), 2u);
    EXPECT_EQ(c.cases[1].kind, CaseKind::GrossPoincare);
    EXPECT_EQ(c.seed, 4u);
    EXPECT_EQ(c.json_out, "a.json");
    EXPECT_EQ(c.families[0].center[1].lo, 0.0);
    EXPECT_EQ(c.families[0].center[1].hi, 0.0);

    auto moved = small_config();
    moved["output"]["json"] = "elsewhere.json";
    EXPECT_EQ(config_hash(parse_config(moved)), config_hash(c));
    auto reseeded = small_config();
    reseeded["suite"]["seed"] = 5;
    EXPECT_NE(config_hash(parse_config(reseeded)), config_hash(c));
    EXPECT_EQ(config_hash(c).size(), 16u);
}

TEST(Config, Rejections) {
    auto bad = [](auto edit) {
        json j = small_config();
        edit(j);
        return j;
    };
    EXPECT_THROW(parse_config(bad([](json& j) { j["colour"] = 1; })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["cases"][0]["case"] = "poincare"; })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["cases"][0]["betaz"] = {0}; })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["cases"][1]["measure"] = "lebesgue"; })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["group"] = "custom:2"; })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["group"] = "euclidean:x"; })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["suite"]["families"][0]["family"] = "spline"; })),
                 ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["cases"][0]["weight"] = "halfspace"; })), ConfigError);
    EXPECT_THROW(parse_config(bad([](json& j) { j["tol"] = "small"; })), ConfigError);
    EXPECT_THROW(parse_config(json::array()), ConfigError);
}

TEST(Config, GroupSpecs) {
    EXPECT_EQ(parse_group_spec("heisenberg:2").dim(), 5);
    EXPECT_EQ(parse_group(json::parse(R"({"kind": "euclidean", "n": 4})")).dim(), 4);
    EXPECT_THROW(parse_group_spec("heisenberg"), ConfigError);
    EXPECT_THROW(parse_group_spec("euclidean:99999999999999999999"), ConfigError);
}

TEST(Config, LoadJson) {
    const auto dir = std::filesystem::temp_directory_path() / "carnot_scan_test";
    std::filesystem::create_directories(dir);
    write_atomic(dir / "bad.json", "{\"group\": ");
    EXPECT_THROW(load_json(dir / "bad.json"), ConfigError);
    EXPECT_THROW(load_json(dir / "missing.json"), IoError);
    write_atomic(dir / "ok.json", small_config().dump());
    EXPECT_EQ(load_json(dir / "ok.json"), small_config());
    EXPECT_EQ(read_file(dir / "ok.json"), small_config().dump());
    std::filesystem::remove_all(dir);
}

TEST(Report, Fnv1aVectors) {
    EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ull);
    EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cull);
    EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ull);
    EXPECT_EQ(hex64(0xabcull), "0000000000000abc");
}

TEST(Report, Passes) {
    IneqReport r;
    r.set_sides(1.0, 1.0 - 1e-7);
    EXPECT_TRUE(passes(r, 1e-6));
    r.set_sides(1.0, 0.9);
    EXPECT_FALSE(passes(r, 1e-6));
    r.set_sides(0.0, 1.0);
    r.converged = false;
    EXPECT_FALSE(passes(r, 1e-6));
    r.converged = true;
    r.set_sides(0.0, std::nan(""));
    EXPECT_FALSE(passes(r, 1e-6));
}

TEST(Report, RoundTrips) {
    const auto cfg = parse_config(small_config());
    const auto suite = build_suite(cfg.group, cfg.families, cfg.seed);
    const auto res = slack_scan(cfg.group, cfg.cases, suite, cfg.seed, cfg.quad, 1);
    ASSERT_EQ(res.reports.size(), 4u);

    const auto back = parse_csv(to_csv(res.reports));
    ASSERT_EQ(back.size(), res.reports.size());
    for (std::size_t i = 0; i < back.size(); ++i) expect_same(back[i], res.reports[i]);
    EXPECT_EQ(to_csv(back), to_csv(res.reports));

    ReportDocument d;
    d.seed = cfg.seed;
    d.config_hash = config_hash(cfg);
    d.group = cfg.group.name();
    d.reports = res.reports;
    d.skipped.push_back({"hardy", 2.0, std::nullopt, 1.0, "bump#9", "not admissible"});
    const json j = to_json(d);
    EXPECT_EQ(j["summary"]["reports"], 4);
    EXPECT_EQ(j["summary"]["skipped"], 1);
    const auto d2 = document_from_json(json::parse(j.dump()));
    EXPECT_EQ(to_json(d2).dump(), j.dump());
    EXPECT_EQ(d2.skipped[0].c, 1.0);
    EXPECT_THROW(document_from_json(json::parse(R"({"reports": 3})")), ConfigError);
}

TEST(Report, CsvShape) {
    EXPECT_EQ(to_csv({}), "case,beta,q,seed,function_id,lhs,rhs,slack,quad_err,converged,A2,C_H,C_LH,gamma\n");
    EXPECT_TRUE(parse_csv("").empty());
    IneqReport r;
    r.case_name = "a,b";
    r.function_id = "f\"1";
    r.set_sides(0.1, 0.30000000000000004);
    const auto csv = to_csv({r});
    EXPECT_NE(csv.find("\"a,b\""), std::string::npos);
    EXPECT_NE(csv.find("0.30000000000000004"), std::string::npos);
    EXPECT_EQ(csv.find('\r'), std::string::npos);
    const auto back = parse_csv(csv);
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].case_name, "a,b");
    EXPECT_EQ(back[0].function_id, "f\"1");
    EXPECT_EQ(back[0].rhs, 0.30000000000000004);
    EXPECT_THROW(parse_csv("not,a,header\n1,2,3\n"), ConfigError);
}

TEST(Report, Markdown) {
    ReportDocument d;
    IneqReport a;
    a.case_name = "log-hardy";
    a.beta = 0.5;
    a.set_sides(1.0, 3.0);
    IneqReport b = a;
    b.beta = 1.0;
    b.set_sides(1.0, 0.5);
    d.reports = {a, b};
    const auto md = to_markdown(d);
    EXPECT_NE(md.find("| case"), std::string::npos);
    EXPECT_NE(md.find("log-hardy"), std::string::npos);
    EXPECT_NE(md.find("0.5,2"), std::string::npos);
    EXPECT_NE(md.find("1,-0.5"), std::string::npos);
    EXPECT_FALSE(to_markdown(ReportDocument{}).empty());
}
