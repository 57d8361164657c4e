#include <doctest.h>

#include <znt/curve.hpp>

using namespace znt;

TEST_CASE("curve validation rejects bad input") {
    CHECK_THROWS_AS(CurveSpec(1, 1, {0.0, 0.3, 1.0}), ConfigInvalid);
    CHECK_THROWS_AS(CurveSpec(3, 0, {0.0}), ConfigInvalid);
    CHECK_THROWS_AS(CurveSpec(3, 1, {0.0, 1.0}), ConfigInvalid);
    CHECK_THROWS_AS(CurveSpec(3, 1, {0.0, 1.0, 0.5}), ConfigInvalid);
    CHECK_THROWS_AS(CurveSpec(3, 1, {0.0, 0.0, 1.0}), ConfigInvalid);
}

TEST_CASE("mu roots solve the curve equation on every sheet") {
    CurveSpec spec(3, 2, {0.0, 0.4, 1.0, 1.7, 2.5});
    cplx l(0.77, 0.31);
    auto roots = spec.mu_roots(l);
    REQUIRE(roots.size() == 3);
    cplx rhs = spec.rhs(l);
    for (cplx mu : roots) {
        cplx v = mu * mu * mu;
        CHECK(std::abs(v - rhs) <= 1e-12 * std::abs(rhs));
    }
    // roots are distinct copies rotated by cube roots of unity
    CHECK(std::abs(roots[1] / roots[0] - std::exp(2.0 * pi * I / 3.0)) < 1e-12);
}

TEST_CASE("monodromy around branch points") {
    CurveSpec spec(3, 1, {0.0, 0.3, 1.0});
    cplx rho = std::exp(2.0 * pi * I / 3.0);
    auto loop = [&](cplx c, double r) {
        std::vector<cplx> pts;
        for (int k = 0; k <= 24; ++k)
            pts.push_back(c + r * std::exp(2.0 * pi * I * double(k) / 24.0));
        return pts;
    };
    cplx start = 0.1;  // on the loop around lambda_1 = 0
    cplx mu0 = spec.mu_principal(start);

    // a loop around the odd point multiplies mu by a primitive cube root
    cplx mu1 = spec.track_poly(loop(0.0, 0.1), mu0);
    cplx ratio = mu1 / mu0;
    CHECK(std::abs(ratio - 1.0) > 0.5);
    CHECK(std::abs(ratio * ratio * ratio - 1.0) < 1e-10);

    // around the even point: the inverse power, still nontrivial
    cplx s2 = 0.3 + 0.1;
    cplx mu2 = spec.track_poly(loop(0.3, 0.1), spec.mu_principal(s2));
    cplx ratio2 = mu2 / spec.mu_principal(s2);
    CHECK(std::abs(ratio2 - 1.0) > 0.5);
    CHECK(std::abs(ratio2 * ratio2 * ratio2 - 1.0) < 1e-10);

    // odd and even exponents are complementary: a loop enclosing both
    // lambda_1 and lambda_2 is trivial
    std::vector<cplx> big = {cplx(0.45, 0.12), cplx(-0.15, 0.12), cplx(-0.15, -0.12),
                             cplx(0.45, -0.12), cplx(0.45, 0.12)};
    cplx mu3 = spec.track_poly(big, spec.mu_principal(big[0]));
    CHECK(std::abs(mu3 / spec.mu_principal(big[0]) - 1.0) < 1e-10);
    (void)rho;
}

TEST_CASE("third kind differential has unit residues") {
    CurveSpec spec(3, 1, {0.0, 0.3, 1.0});
    cplx lQ(0.6, 0.4), lR(-0.5, 0.0);
    SurfacePoint Q{lQ, spec.mu_principal(lQ)};
    SurfacePoint R{lR, spec.mu_principal(lR)};
    auto residue_at = [&](const SurfacePoint& C) {
        int n = 128;
        double r = 0.05;
        cplx acc = 0.0;
        cplx mu = C.mu;
        cplx prev = C.lambda + r;
        // start on the target sheet and track mu around the circle
        {
            auto roots = spec.mu_roots(prev);
            cplx best = roots[0];
            for (cplx rr : roots)
                if (std::abs(rr - C.mu) < std::abs(best - C.mu)) best = rr;
            mu = best;
        }
        // spectral rule: dlambda = i (l - center) dtheta on the circle
        for (int k = 1; k <= n; ++k) {
            cplx l = C.lambda + r * std::exp(2.0 * pi * I * double(k) / double(n));
            mu = spec.track(prev, l, mu);
            cplx f = third_kind_differential(spec, SurfacePoint{l, mu}, Q, R);
            acc += f * I * (l - C.lambda) * (2.0 * pi / double(n));
            prev = l;
        }
        return acc / (2.0 * pi * I);
    };
    CHECK(std::abs(residue_at(Q) - 1.0) < 1e-6);
    CHECK(std::abs(residue_at(R) + 1.0) < 1e-6);
}
