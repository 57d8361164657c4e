#pragma once
// Contour quadrature with sheet tracking. Integrands are functions of a
// surface point (lambda, mu); mu is carried along each edge by analytic
// continuation so the integrand always sees the right sheet.

#include <znt/curve.hpp>

#include <boost/math/quadrature/gauss.hpp>
#include <functional>
#include <vector>

namespace znt {

struct QuadratureNoConvergence : NumericError {
    using NumericError::NumericError;
};

using Integrand = std::function<void(cplx l, cplx mu, std::vector<cplx>& out)>;

namespace detail {

template <unsigned Points>
struct GLRule {
    // full (symmetric) node/weight tables on [-1,1], ascending
    static const std::vector<double>& nodes() {
        static const std::vector<double> v = [] {
            auto half = boost::math::quadrature::gauss<double, Points>::abscissa();
            std::vector<double> out;
            for (auto it = half.rbegin(); it != half.rend(); ++it)
                if (*it > 0.0) out.push_back(-*it);
            for (double x : half) out.push_back(x);
            return out;
        }();
        return v;
    }
    static const std::vector<double>& weights() {
        static const std::vector<double> v = [] {
            auto half = boost::math::quadrature::gauss<double, Points>::weights();
            auto habs = boost::math::quadrature::gauss<double, Points>::abscissa();
            std::vector<double> out;
            for (size_t i = habs.size(); i-- > 0;)
                if (habs[i] > 0.0) out.push_back(half[i]);
            for (size_t i = 0; i < habs.size(); ++i) out.push_back(half[i]);
            return out;
        }();
        return v;
    }
};

// one Gauss-Legendre pass over [a,b], tracking mu through the nodes in order;
// returns the integral estimate and the continued mu at b
template <unsigned Points>
inline cplx gl_edge(const CurveSpec& spec, cplx a, cplx b, cplx mu, const Integrand& f,
                    std::vector<cplx>& acc, size_t n_out) {
    const auto& xs = GLRule<Points>::nodes();
    const auto& ws = GLRule<Points>::weights();
    cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
    std::vector<cplx> val(n_out);
    cplx prev = a;
    for (size_t i = 0; i < xs.size(); ++i) {
        cplx l = mid + half * xs[i];
        mu = spec.track(prev, l, mu);
        prev = l;
        f(l, mu, val);
        for (size_t j = 0; j < n_out; ++j) acc[j] += ws[i] * half * val[j];
    }
    return spec.track(prev, b, mu);
}

inline double vec_dist(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

}  // namespace detail

// adaptive integration over the edge [a,b]: GL16 vs GL32, bisect on
// disagreement. Appends into `out`; returns mu continued to b.
inline cplx integrate_edge(const CurveSpec& spec, cplx a, cplx b, cplx mu, const Integrand& f,
                           std::vector<cplx>& out, double tol, int depth = 0) {
    size_t n = out.size();
    std::vector<cplx> c16(n, 0.0), c32(n, 0.0);
    detail::gl_edge<16>(spec, a, b, mu, f, c16, n);
    cplx mu_end = detail::gl_edge<32>(spec, a, b, mu, f, c32, n);
    double err = detail::vec_dist(c16, c32);
    if (err < tol || depth > 24) {
        if (depth > 24 && err > 100 * tol)
            throw QuadratureNoConvergence("edge quadrature stalled, err=" + std::to_string(err));
        for (size_t j = 0; j < n; ++j) out[j] += c32[j];
        return mu_end;
    }
    cplx mid = 0.5 * (a + b);
    cplx mu_mid = integrate_edge(spec, a, mid, mu, f, out, 0.5 * tol, depth + 1);
    return integrate_edge(spec, mid, b, mu_mid, f, out, 0.5 * tol, depth + 1);
}

// plain adaptive GL over [a,b] for integrands that carry their own sheet
// logic (no mu tracking; the second Integrand argument is passed as 0)
inline void integrate_edge_plain(cplx a, cplx b, const Integrand& f, std::vector<cplx>& out,
                                 double tol, int depth = 0) {
    size_t n = out.size();
    auto panel = [&](const std::vector<double>& xs, const std::vector<double>& ws,
                     std::vector<cplx>& acc) {
        cplx mid = 0.5 * (a + b), half = 0.5 * (b - a);
        std::vector<cplx> val(n);
        for (size_t i = 0; i < xs.size(); ++i) {
            f(mid + half * xs[i], 0.0, val);
            for (size_t j = 0; j < n; ++j) acc[j] += ws[i] * half * val[j];
        }
    };
    std::vector<cplx> c16(n, 0.0), c32(n, 0.0);
    panel(detail::GLRule<16>::nodes(), detail::GLRule<16>::weights(), c16);
    panel(detail::GLRule<32>::nodes(), detail::GLRule<32>::weights(), c32);
    double err = detail::vec_dist(c16, c32);
    if (err < tol || depth > 24) {
        if (depth > 24 && err > 100 * tol)
            throw QuadratureNoConvergence("plain quadrature stalled, err=" + std::to_string(err));
        for (size_t j = 0; j < n; ++j) out[j] += c32[j];
        return;
    }
    cplx mid = 0.5 * (a + b);
    integrate_edge_plain(a, mid, f, out, 0.5 * tol, depth + 1);
    integrate_edge_plain(mid, b, f, out, 0.5 * tol, depth + 1);
}

// polyline contour; seeds continuation at pts[0] with start_mu
struct ContourResult {
    std::vector<cplx> value;
    cplx mu_end;
};

inline ContourResult integrate_contour(const CurveSpec& spec, const std::vector<cplx>& pts,
                                       cplx start_mu, size_t n_out, const Integrand& f,
                                       double tol) {
    ContourResult r{std::vector<cplx>(n_out, 0.0), start_mu};
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        r.mu_end = integrate_edge(spec, pts[i], pts[i + 1], r.mu_end, f, r.value, tol);
    return r;
}

// Edge running into a branch point lam_b: substitute lambda = lam_b + zeta^N,
// which removes the mu^{-(s+1)} endpoint singularity of the holomorphic
// differentials. In the zeta chart mu = zeta^w * r(zeta) with w = 1 at odd
// branch points, w = N-1 at even ones, and r an N-th root of the reduced
// polynomial; r is analytic and nonvanishing along the edge, so everything
// is regular and plain adaptive GL applies. `mu` fixes the sheet at `a`.
inline void integrate_to_branch_point(const CurveSpec& spec, cplx a, double lam_b, cplx mu,
                                      const Integrand& f, std::vector<cplx>& out, double tol) {
    int N = spec.N();
    int idx = 0;
    const auto& lam = spec.branch_points();
    for (size_t i = 0; i < lam.size(); ++i)
        if (std::abs(lam[i] - lam_b) < spec.eps_sep()) idx = int(i) + 1;
    if (idx == 0) throw ConfigInvalid("integrate_to_branch_point: not a branch point");
    int w = (idx % 2 == 0) ? N - 1 : 1;

    // reduced product with the vanishing factor stripped
    auto reduced = [&](cplx l) {
        cplx r = 1.0;
        for (int k = 1; k <= 2 * spec.m() + 1; ++k) {
            if (k == idx) continue;
            cplx f1 = l - spec.lambda(k);
            r *= (k % 2 == 1) ? f1 : std::pow(f1, N - 1);
        }
        return r;
    };
    cplx za = std::exp(std::log(a - cplx(lam_b)) / double(N));
    // choose the zeta branch and the root branch so that zeta^w r = mu at a
    cplx r_ref = 0.0;
    {
        cplx za0 = za;
        cplx r0 = std::exp(std::log(reduced(a)) / double(N));
        double best = 1e300;
        for (int kz = 0; kz < N; ++kz) {
            cplx zc = za0 * std::exp(2.0 * pi * I * double(kz) / double(N));
            for (int kr = 0; kr < N; ++kr) {
                cplx rc = r0 * std::exp(2.0 * pi * I * double(kr) / double(N));
                double d = std::abs(std::pow(zc, w) * rc - mu);
                if (d < best) {
                    best = d;
                    za = zc;
                    r_ref = rc;
                }
            }
        }
        if (best > 1e-6 * (1.0 + std::abs(mu)))
            throw NumericError("branch-endpoint substitution could not match the sheet");
    }
    size_t n = out.size();
    // adaptive GL in zeta on [za, 0]; r(zeta) continued by nearest-root choice
    std::function<void(cplx, cplx, cplx, double, int)> go = [&](cplx z0, cplx z1, cplx rprev,
                                                                double tol_here, int depth) {
        auto eval_panel = [&](const std::vector<double>& xs, const std::vector<double>& ws,
                              cplx rseed, std::vector<cplx>& acc, cplx& rlast) {
            cplx mid = 0.5 * (z0 + z1), half = 0.5 * (z1 - z0);
            std::vector<cplx> val(n);
            cplx rcur = rseed;
            for (size_t i = 0; i < xs.size(); ++i) {
                cplx z = mid + half * xs[i];
                cplx l = cplx(lam_b) + std::pow(z, N);
                cplx red = reduced(l);
                cplx r0 = std::exp(std::log(red) / double(N));
                double best = 1e300;
                cplx rpick = r0;
                for (int kr = 0; kr < N; ++kr) {
                    cplx rc = r0 * std::exp(2.0 * pi * I * double(kr) / double(N));
                    if (std::abs(rc - rcur) < best) {
                        best = std::abs(rc - rcur);
                        rpick = rc;
                    }
                }
                rcur = rpick;
                cplx mu_here = std::pow(z, w) * rcur;
                f(l, mu_here, val);
                cplx jac = double(N) * std::pow(z, N - 1);
                for (size_t j = 0; j < n; ++j) acc[j] += ws[i] * half * val[j] * jac;
            }
            rlast = rcur;
        };
        std::vector<cplx> c16(n, 0.0), c32(n, 0.0);
        cplx rend16, rend32;
        eval_panel(detail::GLRule<16>::nodes(), detail::GLRule<16>::weights(), rprev, c16, rend16);
        eval_panel(detail::GLRule<32>::nodes(), detail::GLRule<32>::weights(), rprev, c32, rend32);
        if (detail::vec_dist(c16, c32) < tol_here || depth > 20) {
            for (size_t j = 0; j < n; ++j) out[j] += c32[j];
            return;
        }
        cplx zm = 0.5 * (z0 + z1);
        // continue r to the midpoint for the second half's seed
        go(z0, zm, rprev, 0.5 * tol_here, depth + 1);
        cplx red = reduced(cplx(lam_b) + std::pow(zm, N));
        cplx r0 = std::exp(std::log(red) / double(N));
        double best = 1e300;
        cplx rm = r0;
        for (int kr = 0; kr < N; ++kr) {
            cplx rc = r0 * std::exp(2.0 * pi * I * double(kr) / double(N));
            if (std::abs(rc - rprev) < best) {
                best = std::abs(rc - rprev);
                rm = rc;
            }
        }
        go(zm, z1, rm, 0.5 * tol_here, depth + 1);
    };
    go(za, cplx(0.0), r_ref, tol, 0);
}

}  // namespace znt
