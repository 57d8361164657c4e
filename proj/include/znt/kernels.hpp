#pragma once
// Abel integrals, prime form, theta-form Szego kernel, and the canonical
// bidifferential omega as a mixed finite difference of log E.
//
// Chart handling: every kernel here is returned "reduced", i.e. with the
// sqrt(dlambda) half-differential factors split off, so magnitudes compare
// directly against the algebraic forms which are reduced the same way.

#include <znt/characteristics.hpp>
#include <znt/curve.hpp>
#include <znt/periods.hpp>
#include <znt/quadrature.hpp>
#include <znt/theta.hpp>

#include <vector>

namespace znt {

struct DenominatorVanishes : NumericError {
    using NumericError::NumericError;
};
struct SingularCharacteristic : NumericError {
    using NumericError::NumericError;
};

// straight-line lambda path from lP to lQ with semicircle detours (radius
// 0.1 * local gap) above any branch point closer than 0.2 * local gap
inline std::vector<cplx> abel_path(const CurveSpec& spec, cplx lP, cplx lQ) {
    cplx seg = lQ - lP;
    double L = std::abs(seg);
    std::vector<std::pair<double, double>> events;  // (t along segment, branch point)
    for (double lb : spec.branch_points()) {
        double tproj = ((lb - lP) * std::conj(seg)).real() / (L * L);
        if (tproj <= 0.0 || tproj >= 1.0) continue;
        double dist = std::abs(lP + tproj * seg - lb);
        double gap = 1e300;
        for (double x : spec.branch_points())
            if (x != lb) gap = std::min(gap, std::abs(lb - x));
        if (dist < 0.2 * gap) events.push_back({tproj, lb});
    }
    std::sort(events.begin(), events.end());
    std::vector<cplx> pts{lP};
    cplx dir = seg / L;
    for (auto [tproj, lb] : events) {
        double gap = 1e300;
        for (double x : spec.branch_points())
            if (x != lb) gap = std::min(gap, std::abs(lb - x));
        double r = 0.25 * gap;
        pts.push_back(lb - r * dir);
        // half-circle detour; which side is immaterial for the magnitude
        // comparisons (a side swap shifts the Abel integral by a period)
        for (int a = 1; a < 7; ++a)
            pts.push_back(cplx(lb) + r * dir * std::exp(I * pi * (1.0 - a / 7.0)));
        pts.push_back(lb + r * dir);
    }
    pts.push_back(lQ);
    return pts;
}

struct AbelResult {
    Vec u;        // integral of dv from P to Q along the path
    cplx mu_end;  // sheet the path arrives on at lambda(Q)
};

inline AbelResult abel_map(const PeriodData& pd, const SurfacePoint& P, cplx lQ,
                           double tol = 1e-11) {
    const CurveSpec& spec = pd.spec;
    int g = spec.genus();
    auto pts = abel_path(spec, P.lambda, lQ);
    Integrand f = [&](cplx l, cplx mu, std::vector<cplx>& out) { du_all(spec, l, mu, out); };
    auto res = integrate_contour(spec, pts, P.mu, g, f, tol);
    Vec u(g);
    for (int i = 0; i < g; ++i) u(i) = res.value[i];
    return {pd.a_inverse * u, res.mu_end};
}

// E(P,Q) * sqrt(dx(P)) * sqrt(dx(Q)): theta[gamma](u) over the geometric
// means of the gamma-differential at the endpoints. The sheet at lambda(Q)
// is the one the Abel path arrives on (keeps the four-point stencils of the
// omega finite difference mutually consistent).
inline cplx prime_form_reduced(const PeriodData& pd, const Mat& Pi,
                               const RationalCharacteristic& gamma, const SurfacePoint& P,
                               cplx lQ, cplx* mu_arrival = nullptr) {
    auto ab = abel_map(pd, P, lQ);
    auto tv = theta(ab.u, Pi, gamma);
    auto t0 = theta(Vec::Zero(pd.spec.genus()), Pi, gamma);
    cplx gP = t0.gradient.transpose() * normalized_differentials(pd, P.lambda, P.mu);
    cplx gQ = t0.gradient.transpose() * normalized_differentials(pd, lQ, ab.mu_end);
    if (std::abs(gP) < 1e-12 || std::abs(gQ) < 1e-12)
        throw DenominatorVanishes("gamma-differential vanishes at an endpoint");
    if (mu_arrival) *mu_arrival = ab.mu_end;
    return tv.value / (std::sqrt(gP) * std::sqrt(gQ));
}

// S[char](P,Q) * sqrt(dx dx): theta[char](u) sqrt(gP gQ) / (theta[char](0) theta[gamma](u))
inline cplx szego_theta_reduced(const PeriodData& pd, const Mat& Pi,
                                const RationalCharacteristic& ch,
                                const RationalCharacteristic& gamma, const SurfacePoint& P,
                                cplx lQ) {
    auto ab = abel_map(pd, P, lQ);
    int g = pd.spec.genus();
    cplx tE = theta(ab.u, Pi, gamma).value;
    cplx tz = theta(ab.u, Pi, ch).value;
    cplx t0 = theta(Vec::Zero(g), Pi, ch).value;
    if (std::abs(t0) < 1e-10) throw SingularCharacteristic("theta[char](0) vanishes");
    auto tg0 = theta(Vec::Zero(g), Pi, gamma);
    cplx gP = tg0.gradient.transpose() * normalized_differentials(pd, P.lambda, P.mu);
    cplx gQ = tg0.gradient.transpose() * normalized_differentials(pd, lQ, ab.mu_end);
    return tz * std::sqrt(gP) * std::sqrt(gQ) / (t0 * tE);
}

// omega(P,Q) / (dlambda(P) dlambda(Q)): mixed second central difference of
// log E in the two lambda charts, Richardson-extrapolated once
inline cplx omega_bidifferential(const PeriodData& pd, const Mat& Pi,
                                 const RationalCharacteristic& gamma, const SurfacePoint& P,
                                 const SurfacePoint& Q, double h = 1e-4) {
    const CurveSpec& spec = pd.spec;
    auto mu_near = [&](cplx l, cplx ref) {
        auto roots = spec.mu_roots(l);
        cplx best = roots[0];
        for (auto r : roots)
            if (std::abs(r - ref) < std::abs(best - ref)) best = r;
        return best;
    };
    // the cross-ratio of the four corner values is 1 + O(h^2), so a single
    // principal log of it never straddles a branch cut (the four separate
    // logs would)
    auto mixed = [&](double hp, double hq) {
        cplx num = 1.0, den = 1.0;
        for (int sp : {+1, -1})
            for (int sq : {+1, -1}) {
                cplx lP = P.lambda + double(sp) * hp, lQ = Q.lambda + double(sq) * hq;
                SurfacePoint Pp{lP, mu_near(lP, P.mu)};
                cplx E = prime_form_reduced(pd, Pi, gamma, Pp, lQ);
                (sp * sq > 0 ? num : den) *= E;
            }
        return std::log(num / den) / (4.0 * hp * hq);
    };
    cplx v1 = mixed(h, h), v2 = mixed(0.5 * h, 0.5 * h);
    return (4.0 * v2 - v1) / 3.0;
}

// omega(P,Q) in closed form: minus the Hessian of log theta[gamma] at
// u = w(Q) - w(P), contracted with dv(P) and dv(Q). Contains the double pole
// exactly; insensitive to lattice shifts of u (the quasi-periodicity exponent
// is affine in z, so the log-Hessian is strictly periodic).
inline cplx omega_hessian_reduced(const PeriodData& pd, const Mat& Pi,
                                  const RationalCharacteristic& gamma, const SurfacePoint& P,
                                  cplx lQ) {
    auto ab = abel_map(pd, P, lQ);
    auto tv = theta(ab.u, Pi, gamma);
    Mat H = tv.hessian / tv.value -
            (tv.gradient * tv.gradient.transpose()) / (tv.value * tv.value);
    Vec dvP = normalized_differentials(pd, P.lambda, P.mu);
    Vec dvQ = normalized_differentials(pd, lQ, ab.mu_end);
    return -(dvP.transpose() * H * dvQ)(0, 0);
}

// period of omega(., Q) along a closed polyline in the P variable. The Abel
// map is accumulated continuously along the contour (recomputing it per node
// would let the arrival sheet at Q jump between nodes and wreck the period),
// so only the starting value needs a fresh path. The alpha periods vanish and
// the beta_k period equals 2 pi i dv_k(Q).
inline cplx omega_contour_period(const PeriodData& pd, const Mat& Pi,
                                 const RationalCharacteristic& gamma,
                                 const std::vector<cplx>& verts, cplx lQ, int pieces_total = 48,
                                 int sheet = 0) {
    const CurveSpec& spec = pd.spec;
    int g = spec.genus();
    cplx mu0 = spec.mu_principal(verts[0]) *
               std::exp(2.0 * pi * I * double(sheet) / double(spec.N()));
    auto ab0 = abel_map(pd, SurfacePoint{verts[0], mu0}, lQ);
    Vec u0 = ab0.u;
    Vec dvQ = normalized_differentials(pd, lQ, ab0.mu_end);
    const auto& xg = detail::GLRule<8>::nodes();
    const auto& wgt = detail::GLRule<8>::weights();
    double total_len = 0.0;
    for (size_t e = 0; e + 1 < verts.size(); ++e) total_len += std::abs(verts[e + 1] - verts[e]);
    cplx mu = mu0;
    Vec ucum = Vec::Zero(g);
    cplx total = 0.0;
    std::vector<cplx> du_buf((size_t)g);
    auto dv_at = [&](cplx l, cplx muv) {
        du_all(spec, l, muv, du_buf);
        Vec du(g);
        for (int i = 0; i < g; ++i) du(i) = du_buf[(size_t)i];
        return Vec(pd.a_inverse * du);
    };
    for (size_t e = 0; e + 1 < verts.size(); ++e) {
        cplx a = verts[e], b = verts[e + 1];
        double L = std::abs(b - a);
        int np = std::max(1, (int)std::ceil(pieces_total * L / total_len));
        for (int ip = 0; ip < np; ++ip) {
            cplx pa = a + (b - a) * (double(ip) / np);
            cplx pb = a + (b - a) * (double(ip + 1) / np);
            cplx h2 = 0.5 * (pb - pa), c0 = 0.5 * (pb + pa);
            for (size_t qi = 0; qi < xg.size(); ++qi) {
                cplx li = c0 + h2 * xg[qi];
                // Abel increment pa -> li by a fine sub-rule, mu tracked from pa
                cplx hs = 0.5 * (li - pa), cs = 0.5 * (li + pa);
                cplx mun = mu, lprev = pa;
                Vec acc = Vec::Zero(g);
                for (size_t sj = 0; sj < xg.size(); ++sj) {
                    cplx lj = cs + hs * xg[sj];
                    mun = spec.track(lprev, lj, mun);
                    lprev = lj;
                    acc += wgt[sj] * dv_at(lj, mun);
                }
                Vec u = u0 - (ucum + hs * acc);
                cplx mu_node = spec.track(lprev, li, mun);
                auto tv = theta(u, Pi, gamma);
                Mat H = tv.hessian / tv.value -
                        (tv.gradient * tv.gradient.transpose()) / (tv.value * tv.value);
                Vec dvP = dv_at(li, mu_node);
                total += wgt[qi] * h2 * (-(dvP.transpose() * H * dvQ)(0, 0));
            }
            cplx mun = mu, lprev = pa;
            Vec acc = Vec::Zero(g);
            for (size_t sj = 0; sj < xg.size(); ++sj) {
                cplx lj = c0 + h2 * xg[sj];
                mun = spec.track(lprev, lj, mun);
                lprev = lj;
                acc += wgt[sj] * dv_at(lj, mun);
            }
            ucum += h2 * acc;
            mu = spec.track(lprev, pb, mun);
        }
    }
    return total;
}

// Abel image of branch point k with base point at infinity, for the numeric
// cross-check of the closed-form characteristic tables. Path: down the real
// axis from +infinity (tail mapped to a finite interval by lambda = a v^{-N}),
// then over any intervening branch points by semicircles, and into lambda_k
// through the zeta^N endpoint chart.
inline Vec abel_from_infinity(const PeriodData& pd, int k, double tol = 1e-10) {
    const CurveSpec& spec = pd.spec;
    int g = spec.genus(), N = spec.N();
    double a = spec.lambda(2 * spec.m() + 1) + 2.0 * spec.min_gap() + 1.0;
    Integrand f = [&](cplx l, cplx mu, std::vector<cplx>& out) { du_all(spec, l, mu, out); };
    std::vector<cplx> acc(g, 0.0);
    // tail: integral over [a, infinity) pulled back by lambda = a v^{-N},
    // v from 1 to 0; integrand is regular at v = 0. We need the integral
    // from infinity to a, i.e. minus this.
    {
        Integrand tail = [&](cplx v, cplx /*unused*/, std::vector<cplx>& out) {
            cplx l = a * std::pow(v, -N);
            cplx mu = spec.mu_principal(l);  // right of every branch point: no cuts
            du_all(spec, l, mu, out);
            cplx jac = -double(N) * a * std::pow(v, -N - 1);
            for (auto& o : out) o *= jac;
        };
        std::vector<cplx> tail_val(g, 0.0);
        // integrate v: 1 -> 0 gives a -> infinity; lambda stays right of all
        // branch points, so the principal sheet needs no tracking
        integrate_edge_plain(cplx(1.0), cplx(1e-8), tail, tail_val, tol);
        for (int i = 0; i < g; ++i) acc[i] -= tail_val[i];
    }
    // real-axis leg from a toward lambda_k, arcs over branch points in between
    double lam_k = spec.lambda(k);
    double gap_k = 1e300;
    for (int i = 1; i <= 2 * spec.m() + 1; ++i)
        if (i != k) gap_k = std::min(gap_k, std::abs(spec.lambda(i) - lam_k));
    cplx stage = lam_k + 0.3 * gap_k * std::exp(I * pi / 4.0);
    std::vector<cplx> pts{a};
    for (int i = 2 * spec.m() + 1; i >= 1; --i) {
        double lb = spec.lambda(i);
        if (lb <= lam_k) break;
        double gap = 1e300;
        for (int t = 1; t <= 2 * spec.m() + 1; ++t)
            if (t != i) gap = std::min(gap, std::abs(spec.lambda(t) - lb));
        double r = 0.3 * gap;
        pts.push_back(lb + r);
        for (int s = 1; s < 6; ++s) pts.push_back(lb + r * std::exp(I * pi * (s / 6.0)));
        pts.push_back(lb - r);
    }
    pts.push_back(stage);
    auto leg = integrate_contour(spec, pts, spec.mu_principal(a), g, f, tol);
    for (int i = 0; i < g; ++i) acc[i] += leg.value[i];
    integrate_to_branch_point(spec, stage, lam_k, leg.mu_end, f, acc, tol);
    Vec u(g);
    for (int i = 0; i < g; ++i) u(i) = acc[i];
    return pd.a_inverse * u;
}

// distance of u from the point of the Jacobian named by ch, measured after
// quotienting by the period lattice
inline double jacobian_distance(const PeriodData& pd, const Vec& u,
                                const RationalCharacteristic& ch) {
    const Mat& Pi = pd.pi_matrix;
    int g = (int)u.size();
    Vec target = characteristic_to_vector(ch, Pi);
    Vec r = u - target;
    Eigen::VectorXd n_real = Pi.imag().ldlt().solve(r.imag());
    double worst = 0.0;
    Eigen::VectorXd n_round(g);
    for (int i = 0; i < g; ++i) {
        n_round(i) = std::round(n_real(i));
        worst = std::max(worst, std::abs(n_real(i) - n_round(i)));
    }
    Vec rem = r - Pi.transpose() * n_round.cast<cplx>();
    for (int i = 0; i < g; ++i) {
        worst = std::max(worst, std::abs(rem(i).real() - std::round(rem(i).real())));
        worst = std::max(worst, std::abs(rem(i).imag()));
    }
    return worst;
}

}  // namespace znt
