#include <doctest.h>

#include "suites.hpp"

using namespace znt;

namespace {

json base_config() {
    return json{{"curve", json{{"N", 3}, {"m", 1}, {"branch_points", {0.0, 0.5, 1.0}}}},
                {"suites", {"hutchinson"}},
                {"seed", 7}};
}

}  // namespace

TEST_CASE("registry is fixed and sorted") {
    const auto& reg = suite_registry();
    CHECK(reg.size() == 7);
    CHECK(std::is_sorted(reg.begin(), reg.end()));
    CHECK(std::find(reg.begin(), reg.end(), "thomae") != reg.end());
}

TEST_CASE("config parsing") {
    RunConfig cfg = parse_config(base_config());
    CHECK(cfg.N == 3);
    CHECK(cfg.m == 1);
    CHECK(cfg.suites == std::vector<std::string>{"hutchinson"});
    CHECK(cfg.seed == 7);

    // branch points as decimal strings
    json js = base_config();
    js["curve"]["branch_points"] = {"0.0", "0.5", "1.0"};
    CHECK(parse_config(js).branch_points[1] == 0.5);

    // omitted suites means the whole registry
    json jall = base_config();
    jall.erase("suites");
    CHECK(parse_config(jall).suites == suite_registry());

    json jbad = base_config();
    jbad["suites"] = {"nonsense"};
    CHECK_THROWS_AS(parse_config(jbad), ConfigInvalid);

    json jorder = base_config();
    jorder["curve"]["branch_points"] = {0.0, 1.0, 0.5};
    CHECK_THROWS_WITH_AS(parse_config(jorder),
                         doctest::Contains("not strictly increasing"), ConfigInvalid);

    CHECK_THROWS_AS(parse_config(json::array()), ConfigInvalid);
    CHECK_THROWS_AS(parse_config(json{{"curve", json{{"N", 3}}}}), ConfigInvalid);
}

TEST_CASE("tolerance overrides and scaling reach the checks") {
    RunConfig cfg = parse_config(base_config());
    cfg.tolerances["pi_vs_closed_form"] = 1e-30;  // impossible bar
    SuiteResult sr = run_suite("hutchinson", cfg);
    bool found = false;
    for (const auto& c : sr.checks)
        if (c.name == "pi_vs_closed_form") {
            found = true;
            CHECK(c.tol == 1e-30);
            CHECK_FALSE(c.pass);
        }
    CHECK(found);
    CHECK_FALSE(sr.pass);

    cfg.tolerances.clear();
    cfg.tol_scale = 1000.0;
    SuiteResult sr2 = run_suite("hutchinson", cfg);
    for (const auto& c : sr2.checks)
        if (c.name == "pi_vs_closed_form") CHECK(c.tol == 1e-3);
}

TEST_CASE("seeded draws are deterministic and suite independent") {
    CHECK(suite_seed(1, "szego") == suite_seed(1, "szego"));
    CHECK(suite_seed(1, "szego") != suite_seed(1, "thomae"));
    CurveSpec spec(3, 1, {0.0, 0.5, 1.0});
    std::mt19937_64 r1(42), r2(42);
    CHECK(draw_sample_point(r1, spec) == draw_sample_point(r2, spec));
    auto [a, b] = draw_clear_pair(r1, spec);
    CHECK(a.imag() > 0.0);
    CHECK(b.imag() > 0.0);
    CHECK(std::abs(a - b) > 0.01);
}

TEST_CASE("report serialization is deterministic") {
    RunConfig cfg = parse_config(base_config());
    json r1 = run_report(cfg);
    json r2 = run_report(cfg);
    // timings differ between runs; everything else must serialize to the
    // same bytes
    for (json* r : {&r1, &r2})
        for (auto& s : (*r)["suites"]) s.erase("seconds");
    CHECK(emit_json(r1) == emit_json(r2));
    CHECK(report_passed(r1));
    CHECK(r1["version"] == kVersion);
    CHECK(r1["config"]["seed"] == 7);

    std::string text = report_text(r1);
    CHECK(text.find("hutchinson") != std::string::npos);
    CHECK(text.find("ALL PASS") != std::string::npos);
}

TEST_CASE("floats serialize with 17 significant digits") {
    json j{{"x", 0.1}, {"z", complex_to_json(cplx(1.0 / 3.0, -2.0))}};
    std::string s = emit_json(j);
    CHECK(s.find("0.10000000000000001") != std::string::npos);
    CHECK(s.find("0.33333333333333331") != std::string::npos);
    // keys come out sorted
    CHECK(s.find("\"x\"") < s.find("\"z\""));
    CHECK(s.find("\"im\"") < s.find("\"re\""));
}

TEST_CASE("run_report flags suite errors without aborting the batch") {
    // hutchinson on a curve that is not (0, t, 1) is a config error and must
    // abort; a numerically failing suite inside a batch must not
    json j = base_config();
    j["curve"]["branch_points"] = {0.0, 0.5, 2.0};
    RunConfig cfg = parse_config(j);
    CHECK_THROWS_AS(run_report(cfg), ConfigInvalid);
}
