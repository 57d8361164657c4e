// Acceptance gate: eleven numbered criteria, one printed pass/fail line each.
// Run all (no arguments) or a single one with --criterion N. Exit code is the
// number of failed criteria. Criterion 7 exercises the explicit second
// log-derivative identity exactly as printed, which genuinely fails; it is
// expected to stay red and is left that way on purpose.

#include "suites.hpp"

#include <znt/characteristics.hpp>
#include <znt/curve.hpp>
#include <znt/kernels.hpp>
#include <znt/periods.hpp>
#include <znt/szego_alg.hpp>
#include <znt/theta.hpp>
#include <znt/thomae.hpp>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>

using namespace znt;

namespace {

struct Outcome {
    bool pass = true;
    double worst = 0.0;
    std::string note;
    void take(double residual, double tol) {
        worst = std::max(worst, residual);
        if (residual > tol) pass = false;
    }
};

double now_seconds() {
    using clk = std::chrono::steady_clock;
    static const clk::time_point t0 = clk::now();
    return std::chrono::duration<double>(clk::now() - t0).count();
}

Partition zero_partition(int m) {
    Partition p;
    for (int i = 1; i <= 2 * m + 1; i += 2) p.I1.push_back(i);
    return p;
}

// 1: genus-2 closed-form period matrix across the modulus range, each curve
// within budget
Outcome criterion1() {
    Outcome out;
    for (double t : {0.2, 0.3, 0.5, 0.7}) {
        double start = now_seconds();
        CurveSpec spec(3, 1, {0.0, t, 1.0});
        PeriodData pd = period_matrix(spec);
        Mat ref = hutchinson_reference(t).Pi_closed;
        double rel = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                rel = std::max(rel, std::abs(pd.pi_matrix(i, j) - ref(i, j)) / std::abs(ref(i, j)));
        out.take(rel, 1e-6);
        double secs = now_seconds() - start;
        if (secs > 30.0) {
            out.pass = false;
            out.note = "t=" + std::to_string(t) + " took too long";
        }
    }
    return out;
}

// 2: classical hyperelliptic Thomae on seeded random curves
Outcome criterion2() {
    Outcome out;
    std::mt19937_64 rng(suite_seed(2025, "acceptance-classical"));
    std::uniform_real_distribution<double> gap(0.5, 2.0);
    for (int m : {1, 2}) {
        std::vector<double> lam{0.0};
        for (int i = 0; i < 2 * m; ++i) lam.push_back(lam.back() + gap(rng));
        CurveSpec spec(2, m, lam);
        PeriodData pd = period_matrix(spec);
        for (const auto& p : enumerate_partitions(spec, Family::M)) {
            cplx th = theta(Vec::Zero(spec.genus()), pd.pi_matrix,
                            em_characteristic(spec, p))
                          .value;
            cplx lhs = detail::ipow(th, 8);
            cplx rhs = thomae_classical_rhs(spec, pd.blocks, p);
            out.take(std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)), 1e-6);
        }
    }
    return out;
}

// 3: singular Thomae, N=3 full family M and the N=4 zero characteristic
Outcome criterion3() {
    Outcome out;
    {
        CurveSpec spec(3, 1, {0.0, 0.3, 1.0});
        PeriodData pd = period_matrix(spec);
        for (const auto& p : enumerate_partitions(spec, Family::M))
            out.take(verify_thomae(spec, pd, p).rel_error, 1e-6);
    }
    {
        CurveSpec spec(4, 1, {0.0, 0.4, 1.0});
        PeriodData pd = period_matrix(spec);
        out.take(verify_thomae(spec, pd, zero_partition(1)).rel_error, 1e-5);
    }
    return out;
}

// 4: the two genus-2 theta^12 displays and the sixth-power quotient
Outcome criterion4() {
    Outcome out;
    RunConfig cfg;
    cfg.N = 3;
    cfg.m = 1;
    cfg.branch_points = {0.0, 0.3, 1.0};
    SuiteResult sr = run_suite("hutchinson", cfg);
    for (const auto& c : sr.checks)
        if (c.name.rfind("theta12", 0) == 0 || c.name == "theta_ratio_sixth_power")
            out.take(c.residual, 1e-6);
    return out;
}

// 5: theta gradients vanish at 0 for every family characteristic
Outcome criterion5() {
    Outcome out;
    auto run_curve = [&](int N, int m, std::vector<double> lam) {
        CurveSpec spec(N, m, std::move(lam));
        PeriodData pd = period_matrix(spec);
        auto measure = [&](const RationalCharacteristic& ch) {
            auto tv = theta(Vec::Zero(spec.genus()), pd.pi_matrix, ch);
            out.take(tv.gradient.norm() / std::max(1.0, std::abs(tv.value)), 1e-8);
        };
        for (const auto& p : enumerate_partitions(spec, Family::M))
            measure(em_characteristic(spec, p));
        if (N >= 3)
            for (const auto& p : enumerate_partitions(spec, Family::M_PLUS_1))
                measure(em1_characteristic(spec, p));
    };
    run_curve(2, 1, {0.0, 0.3, 1.0});
    run_curve(3, 1, {0.0, 0.3, 1.0});
    run_curve(2, 2, {0.0, 1.1, 2.3, 3.2, 4.7});
    return out;
}

// 6: variational derivative of the period matrix against finite differences
Outcome criterion6() {
    Outcome out;
    for (int N : {2, 3}) {
        CurveSpec spec(N, 1, {0.0, 0.3, 1.0});
        PeriodData pd = period_matrix(spec);
        for (int k = 1; k <= 3; ++k) {
            Mat r = rauch_derivative(pd, k);
            Mat fd = pi_branch_derivative_fd(spec, k, 1e-5);
            out.take((r - fd).cwiseAbs().maxCoeff() / fd.cwiseAbs().maxCoeff(), 1e-4);
        }
    }
    return out;
}

// 7: the explicit second log-derivative identity, exactly as printed.
// Expected to fail: the printed right-hand side is missing a lambda
// dependent term, and the residual sits at order one.
Outcome criterion7() {
    Outcome out;
    std::mt19937_64 rng(suite_seed(2025, "acceptance-second"));
    for (int N : {2, 3}) {
        CurveSpec spec(N, 1, {0.0, 0.3, 1.0});
        PeriodData pd = period_matrix(spec);
        Partition nontrivial;
        nontrivial.I1 = {1};
        nontrivial.J1 = {2};
        for (const Partition& p : {zero_partition(1), nontrivial}) {
            RationalCharacteristic ch = em_characteristic(spec, p);
            PartitionSets ps = partition_sets(spec, p);
            for (int trial = 0; trial < 5; ++trial) {
                cplx l = draw_sample_point(rng, spec);
                auto res = second_identity(pd, pd.pi_matrix, ch, ps, l);
                out.take(std::abs(res.residual()) / std::abs(res.rhs), 1e-5);
            }
        }
    }
    return out;
}

// 8: Fay-type identity for the hyperelliptic case
Outcome criterion8() {
    Outcome out;
    CurveSpec spec(2, 1, {0.0, 0.3, 1.0});
    PeriodData pd = period_matrix(spec);
    RationalCharacteristic gamma = find_odd_nonsingular_half_characteristic(pd.pi_matrix);
    Partition p;
    p.I1 = {1};
    p.J1 = {2};
    RationalCharacteristic ch = em_characteristic(spec, p);
    PartitionSets ps = partition_sets(spec, p);
    std::mt19937_64 rng(suite_seed(2025, "acceptance-fay"));
    for (int trial = 0; trial < 5; ++trial) {
        auto [lP, lQ] = draw_clear_pair(rng, spec);
        SurfacePoint P{lP, spec.mu_principal(lP)};
        SurfacePoint Q{lQ, spec.mu_principal(lQ)};
        auto fr = fay_identity(pd, pd.pi_matrix, ch, gamma, ps, P, Q);
        out.take(std::abs(fr.lhs_theta - fr.rhs) / std::abs(fr.rhs), 1e-4);
    }
    return out;
}

// 9: theta-form kernel magnitude against the algebraic closed form
Outcome criterion9() {
    Outcome out;
    CurveSpec spec(3, 1, {0.0, 0.3, 1.0});
    PeriodData pd = period_matrix(spec);
    RationalCharacteristic gamma = find_odd_nonsingular_half_characteristic(pd.pi_matrix);
    auto parts = enumerate_partitions(spec, Family::M);
    std::mt19937_64 rng(suite_seed(2025, "acceptance-szego"));
    for (int trial = 0; trial < 10; ++trial) {
        auto [lP, lQ] = draw_clear_pair(rng, spec);
        SurfacePoint P{lP, spec.mu_principal(lP)};
        for (const auto& p : parts) {
            RationalCharacteristic ch = em_characteristic(spec, p);
            PartitionSets ps = partition_sets(spec, p);
            try {
                cplx st = szego_theta_reduced(pd, pd.pi_matrix, ch, gamma, P, lQ);
                cplx sa = szego_algebraic_em(spec, ps, lP, lQ);
                out.take(std::abs(std::abs(st) - std::abs(sa)) / std::abs(sa), 1e-5);
            } catch (const BranchCut&) {
            } catch (const SingularCharacteristic&) {
            }
        }
    }
    return out;
}

// 10: structural invariants plus a full-registry run inside the time budget
Outcome criterion10() {
    Outcome out;
    double start = now_seconds();
    std::mt19937_64 rng(suite_seed(2025, "acceptance-structural"));
    std::uniform_real_distribution<double> uz(-0.3, 0.3);
    for (int N : {2, 3}) {
        CurveSpec spec(N, 1, {0.0, 0.3, 1.0});
        PeriodData pd = period_matrix(spec);
        const Mat& Pi = pd.pi_matrix;
        int g = spec.genus();
        out.take(pd.asymmetry / Pi.cwiseAbs().maxCoeff(), 1e-8);
        if (im_pi_min_eig(Pi) <= 0.0) out.pass = false;

        auto parts = enumerate_partitions(spec, Family::M);
        RationalCharacteristic ch = em_characteristic(spec, parts.front());
        Vec z(g);
        for (int i = 0; i < g; ++i) z(i) = cplx(uz(rng), uz(rng));
        for (int k = 0; k < g; ++k)
            for (int l = k; l < g; ++l)
                out.take(std::abs(heat_residual(z, Pi, ch, k, l)), 1e-6);

        std::vector<int> mm(g, 0), mp(g, 0);
        mm[0] = 1;
        mp[g - 1] = 1;
        cplx t0 = theta(z, Pi, ch).value;
        out.take(std::abs(periodicity_residual(z, Pi, ch, mm, mp)) / (1.0 + std::abs(t0)),
                 1e-8);

        RationalCharacteristic gamma = find_odd_nonsingular_half_characteristic(Pi);
        double lq = spec.lambda(3) + 3.0;
        for (int s = 0; s < N - 1; ++s)
            out.take(std::abs(omega_contour_period(pd, Pi, gamma, alpha_contour(spec, 1), lq,
                                                   48, s)),
                     1e-5);
        if (N == 2) {
            cplx pb = omega_contour_period(pd, Pi, gamma, beta_contour(spec, 1), lq);
            Vec dv = normalized_differentials(pd, lq, spec.mu_principal(lq));
            cplx expect = 2.0 * pi * I * dv(0);
            out.take(std::min(std::abs(pb - expect), std::abs(pb + expect)) / std::abs(expect),
                     1e-4);
        }
    }
    // full registry on a curve every suite accepts; only the time budget and
    // the structural residuals above gate here (the szego suite carries the
    // known-defective printed identity)
    RunConfig cfg;
    cfg.N = 3;
    cfg.m = 1;
    cfg.branch_points = {0.0, 0.5, 1.0};
    cfg.suites = suite_registry();
    run_report(cfg);
    double elapsed = now_seconds() - start;
    if (elapsed > 300.0) {
        out.pass = false;
        out.note = "exceeded the five minute budget";
    }
    std::ostringstream os;
    os << "elapsed " << (int)elapsed << "s";
    if (!out.note.empty()) os << ", " << out.note;
    out.note = os.str();
    return out;
}

// 11: pinching limit of the block determinants
Outcome criterion11() {
    Outcome out;
    double eps = 1e-4;
    auto res = pinching_check(3, {0.5}, 2.0, eps);
    for (double e : res.rel_errors) out.take(e, 10.0 * eps);
    for (int k : res.root_index)
        if (k != 0) out.pass = false;
    out.take(std::abs(res.theta0 - 1.0), 100.0 * eps);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) only = std::atoi(argv[i + 1]);

    std::function<Outcome()> crits[] = {criterion1, criterion2, criterion3, criterion4,
                                        criterion5, criterion6, criterion7, criterion8,
                                        criterion9, criterion10, criterion11};
    const char* labels[] = {
        "genus-2 period matrix vs closed form",
        "classical hyperelliptic Thomae, random curves",
        "singular Thomae, N=3 family M and N=4 zero characteristic",
        "genus-2 theta^12 displays and sixth-power quotient",
        "theta gradients vanish at the family characteristics",
        "variational period derivative vs finite differences",
        "second log-derivative identity as printed (known defect, expected FAIL)",
        "Fay-type identity, hyperelliptic case",
        "Szego kernel magnitudes, theta vs algebraic",
        "structural invariants and runtime budget",
        "pinching limit of the block determinants"};

    int failures = 0;
    for (int k = 1; k <= 11; ++k) {
        if (only && k != only) continue;
        Outcome o;
        try {
            o = crits[k - 1]();
        } catch (const CurveError& e) {
            o.pass = false;
            o.note = e.what();
        }
        std::printf("criterion %2d: %s  %s (max residual %.3e%s%s)\n", k,
                    o.pass ? "pass" : "FAIL", labels[k - 1], o.worst,
                    o.note.empty() ? "" : ", ", o.note.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    return failures;
}
