// zn-thomae: batch verification driver. `run` executes suites from a config
// file; `example hutchinson` prints the closed-form period matrix comparison
// for the genus-2 curve mu^3 = l(l-t)(l-1)^2.

#include "suites.hpp"

#include <znt/periods.hpp>
#include <znt/thomae.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

int cmd_run(const std::string& config_path, const std::vector<std::string>& suite_override,
            const std::string& out_path, const std::string& format, long long seed_override,
            double tol_scale_override) {
    znt::json raw;
    {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "cannot open config: " << config_path << "\n";
            return 2;
        }
        try {
            in >> raw;
        } catch (const std::exception& e) {
            std::cerr << "config parse error: " << e.what() << "\n";
            return 2;
        }
    }
    znt::RunConfig cfg;
    try {
        cfg = znt::parse_config(raw);
    } catch (const znt::ConfigInvalid& e) {
        std::cerr << "config invalid: " << e.what() << "\n";
        return 2;
    }
    if (!suite_override.empty()) cfg.suites = suite_override;
    if (seed_override >= 0) cfg.seed = (std::uint64_t)seed_override;
    if (tol_scale_override > 0.0) cfg.tol_scale = tol_scale_override;
    if (!out_path.empty()) cfg.output = out_path;

    znt::json report;
    try {
        report = znt::run_report(cfg);
    } catch (const znt::ConfigInvalid& e) {
        std::cerr << "config invalid: " << e.what() << "\n";
        return 2;
    } catch (const znt::CurveError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    }

    std::string payload =
        format == "text" ? znt::report_text(report) : znt::emit_json(report);
    if (!cfg.output.empty()) {
        std::ofstream out(cfg.output);
        if (!out) {
            std::cerr << "cannot write " << cfg.output << "\n";
            return 2;
        }
        out << payload;
    } else {
        std::cout << payload;
    }
    return znt::report_passed(report) ? 0 : 1;
}

int cmd_example_hutchinson(double t) {
    try {
        auto ref = znt::hutchinson_reference(t);
        znt::CurveSpec spec(3, 1, {0.0, t, 1.0});
        auto pd = znt::period_matrix(spec);
        double rel = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                rel = std::max(rel, std::abs(pd.pi_matrix(i, j) - ref.Pi_closed(i, j)) /
                                        std::abs(ref.Pi_closed(i, j)));
        std::printf("t = %.17g\n", t);
        std::printf("T (closed form)   = %.17g + %.17gi\n", ref.T.real(), ref.T.imag());
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                std::printf("Pi[%d][%d] computed = %.17g + %.17gi   closed = %.17g + %.17gi\n",
                            i, j, pd.pi_matrix(i, j).real(), pd.pi_matrix(i, j).imag(),
                            ref.Pi_closed(i, j).real(), ref.Pi_closed(i, j).imag());
        std::printf("max relative error = %.3e\n", rel);
        return rel <= 1e-6 ? 0 : 1;
    } catch (const znt::ConfigInvalid& e) {
        std::cerr << "config invalid: " << e.what() << "\n";
        return 2;
    } catch (const znt::CurveError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numeric verification of theta-constant and kernel identities on "
                 "cyclic covers mu^N = p q^{N-1}"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "json";
    std::vector<std::string> suite_override;
    long long seed_override = -1;
    double tol_scale_override = 0.0;
    auto* run = app.add_subcommand("run", "run verification suites from a config file");
    run->add_option("config", config_path, "config file (JSON)")->required();
    run->add_option("--suite", suite_override, "suite name (repeatable; overrides config)");
    run->add_option("--out", out_path, "write the report here instead of stdout");
    run->add_option("--format", format, "json or text")
        ->check(CLI::IsMember({"json", "text"}));
    run->add_option("--seed", seed_override, "override the sample seed");
    run->add_option("--tol-scale", tol_scale_override, "scale all tolerances");

    double t = 0.3;
    auto* example = app.add_subcommand("example", "built-in worked examples");
    std::string which;
    example->add_option("name", which, "example name (hutchinson)")->required();
    example->add_option("--t", t, "middle branch point, 0 < t < 1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (run->parsed()) {
        for (const auto& s : suite_override) {
            const auto& reg = znt::suite_registry();
            if (std::find(reg.begin(), reg.end(), s) == reg.end()) {
                std::cerr << "unknown suite '" << s << "'\n";
                return 2;
            }
        }
        return cmd_run(config_path, suite_override, out_path, format, seed_override,
                       tol_scale_override);
    }
    if (example->parsed()) {
        if (which != "hutchinson") {
            std::cerr << "unknown example '" << which << "'\n";
            return 2;
        }
        return cmd_example_hutchinson(t);
    }
    return 2;
}
