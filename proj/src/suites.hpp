#pragma once
// Verification suite registry and batch driver. Each suite runs against the
// configured curve, returns named residual checks against (possibly
// overridden) tolerances, and logs any seeded sample draws so a report can
// be replayed.

#include <znt/curve.hpp>
#include <znt/report.hpp>

#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <string>
#include <vector>

namespace znt {

inline constexpr const char* kVersion = "0.1.0";

struct RunConfig {
    int N = 0;
    int m = 0;
    std::vector<double> branch_points;
    std::vector<std::string> suites;  // already resolved: empty means "run none"
    std::map<std::string, double> tolerances;
    std::string output;
    std::uint64_t seed = 1;
    double tol_scale = 1.0;
    int workers = 0;  // 0 = one per suite up to hardware
};

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

struct SuiteResult {
    std::string name;
    bool pass = true;
    double max_residual = 0.0;
    double seconds = 0.0;
    std::vector<CheckResult> checks;
    json details = json::object();
};

const std::vector<std::string>& suite_registry();

// seeded sample draws shared by the suites and the acceptance harness:
// points live in the upper half plane over the branch-point span; a pair is
// accepted only when the connecting segment stays clear of every branch
// point (the algebraic kernel forms are principal-branch evaluations)
cplx draw_sample_point(std::mt19937_64& rng, const CurveSpec& spec);
std::pair<cplx, cplx> draw_clear_pair(std::mt19937_64& rng, const CurveSpec& spec);
std::uint64_t suite_seed(std::uint64_t seed, const std::string& suite);

// config parsing; throws ConfigInvalid on schema violations. Branch points
// may be numbers or decimal strings.
RunConfig parse_config(const json& j);

SuiteResult run_suite(const std::string& name, const RunConfig& cfg);

// full report: config echo, per-suite results sorted by name, version and
// environment fingerprint
json run_report(const RunConfig& cfg);

bool report_passed(const json& report);

// one line per suite: name, status, max residual
std::string report_text(const json& report);

}  // namespace znt
