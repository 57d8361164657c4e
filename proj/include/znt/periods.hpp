#pragma once
// Homology contours, block period matrices A_s/B_s, assembly of A, B and the
// Riemann matrix Pi, normalized differentials, and the branch-point
// variational (Rauch) derivative of Pi.
//
// Contour orientation is fixed once: with these alpha/beta drawings the
// computed Pi reproduces the genus-2 closed form [[2T,T],[T,2T]] for
// N=3, lambda=(0,t,1). Do not flip either loop without recalibrating.

#include <znt/curve.hpp>
#include <znt/quadrature.hpp>

#include <Eigen/Dense>
#include <vector>

namespace znt {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct SymmetryViolation : NumericError {
    using NumericError::NumericError;
};

// du_{j+sm} = lambda^{j-1} q^s / mu^{s+1}, j=1..m, s=0..N-2
inline cplx holomorphic_differential(const CurveSpec& spec, cplx l, cplx mu, int j, int s) {
    cplx r = std::pow(l, j - 1);
    cplx qq = spec.q(l);
    for (int i = 0; i < s; ++i) r *= qq;
    for (int i = 0; i <= s; ++i) r /= mu;
    return r;
}

// all g differentials at once, index s*m + (j-1)
inline void du_all(const CurveSpec& spec, cplx l, cplx mu, std::vector<cplx>& out) {
    int N = spec.N(), m = spec.m();
    cplx qq = spec.q(l);
    cplx mu_pow = mu;  // mu^{s+1}
    cplx q_pow = 1.0;  // q^s
    for (int s = 0; s <= N - 2; ++s) {
        cplx base = q_pow / mu_pow;
        cplx lp = 1.0;
        for (int j = 1; j <= m; ++j) {
            out[s * m + (j - 1)] = lp * base;
            lp *= l;
        }
        mu_pow *= mu;
        q_pow *= qq;
    }
}

// alpha_k: anticlockwise rectangle around the first k cuts, at half-height
// h = 0.25 * min gap, horizontal clearance d = h
inline std::vector<cplx> alpha_contour(const CurveSpec& spec, int k, double h = 0.0) {
    if (h <= 0.0) h = 0.25 * spec.min_gap();
    double x0 = spec.lambda(1), x1 = spec.lambda(2 * k), d = h;
    cplx ih = I * h;
    return {x1 + d, x1 + d + ih, x0 - d + ih, x0 - d - ih, x1 + d - ih, x1 + d};
}

// beta_k: loop around the gap [lambda_{2k}, lambda_{2k+1}] seeded at the gap
// midpoint, rising into the upper half-plane first (the orientation that the
// closed-form calibration fixed)
inline std::vector<cplx> beta_contour(const CurveSpec& spec, int k, double h = 0.0) {
    if (h <= 0.0) h = 0.25 * spec.min_gap();
    double x0 = spec.lambda(2 * k), x1 = spec.lambda(2 * k + 1), d = h;
    cplx M = 0.5 * (x0 + x1);
    cplx ih = I * h;
    return {M, M + ih, x0 - d + ih, x0 - d - ih, x1 + d - ih, x1 + d + ih, M + ih, M};
}

struct QuadratureConfig {
    double target_tol = 1e-10;
    double contour_height = 0.0;  // 0 = default 0.25*min_gap
};

struct BlockPeriods {
    std::vector<Mat> a_blocks, b_blocks;  // N-1 matrices, m x m
};

inline BlockPeriods block_period_matrices(const CurveSpec& spec, const QuadratureConfig& cfg = {}) {
    int N = spec.N(), m = spec.m(), g = spec.genus();
    BlockPeriods bp;
    bp.a_blocks.assign(N - 1, Mat::Zero(m, m));
    bp.b_blocks.assign(N - 1, Mat::Zero(m, m));
    Integrand f = [&](cplx l, cplx mu, std::vector<cplx>& out) { du_all(spec, l, mu, out); };
    for (int j = 1; j <= m; ++j) {
        for (int which = 0; which < 2; ++which) {
            auto pts = which == 0 ? alpha_contour(spec, j, cfg.contour_height)
                                  : beta_contour(spec, j, cfg.contour_height);
            cplx mu0 = spec.mu_principal(pts.front());
            auto res = integrate_contour(spec, pts, mu0, g, f, cfg.target_tol);
            if (std::abs(res.mu_end - mu0) > 1e-7 * (1.0 + std::abs(mu0)))
                throw NumericError("period contour did not close on its sheet");
            auto& blocks = which == 0 ? bp.a_blocks : bp.b_blocks;
            for (int s = 0; s < N - 1; ++s)
                for (int k = 1; k <= m; ++k) blocks[s](k - 1, j - 1) = res.value[s * m + (k - 1)];
        }
    }
    return bp;
}

// R_A, R_B as printed: entries over the sheet index i and column k, each
// times the m x m identity
inline std::pair<Mat, Mat> twist_matrices(int N, int m) {
    cplx rho = std::exp(2.0 * pi * I / double(N));
    auto rp = [&](int e) { return std::exp(2.0 * pi * I * double(e) / double(N)); };
    Mat RA = Mat::Zero((N - 1) * m, (N - 1) * m), RB = RA;
    for (int i = 1; i <= N - 1; ++i)
        for (int k = 1; k <= N - 1; ++k) {
            cplx ra = (rp(-i * (k - 1)) - rp(-i * k)) / (1.0 - rp(-i));
            cplx rb = (rp(-i * (k - 1)) - rp(-i * (N - 1))) / (1.0 - rp(-(N - 1) * i));
            for (int t = 0; t < m; ++t) {
                RA((i - 1) * m + t, (k - 1) * m + t) = ra;
                RB((i - 1) * m + t, (k - 1) * m + t) = rb;
            }
        }
    (void)rho;
    return {RA, RB};
}

struct PeriodData {
    CurveSpec spec;
    BlockPeriods blocks;
    Mat a_full, b_full, pi_matrix, a_inverse;
    double asymmetry = 0.0;  // max |Pi - Pi^T| before symmetrization
};

inline PeriodData period_matrix(const CurveSpec& spec, const QuadratureConfig& cfg = {}) {
    int N = spec.N(), m = spec.m(), g = spec.genus();
    BlockPeriods bp = block_period_matrices(spec, cfg);
    auto [RA, RB] = twist_matrices(N, m);
    Mat DA = Mat::Zero(g, g), DB = Mat::Zero(g, g), DQ = Mat::Zero(g, g);
    for (int s = 0; s < N - 1; ++s) {
        DA.block(s * m, s * m, m, m) = bp.a_blocks[s];
        DB.block(s * m, s * m, m, m) = bp.b_blocks[s];
        DQ.block(s * m, s * m, m, m) =
            bp.a_blocks[s].fullPivLu().solve(bp.b_blocks[s]);
    }
    Mat Pi = RA.fullPivLu().solve(DQ) * RB;
    double asym = (Pi - Pi.transpose()).cwiseAbs().maxCoeff();
    double scale = Pi.cwiseAbs().maxCoeff();
    if (asym > 1e-6 * scale)
        throw SymmetryViolation("period matrix asymmetry " + std::to_string(asym / scale));
    Pi = 0.5 * (Pi + Pi.transpose()).eval();
    Mat A = DA * RA, B = DB * RB;
    return PeriodData{spec, std::move(bp), A, B, Pi, A.fullPivLu().inverse(), asym};
}

inline double im_pi_min_eig(const Mat& Pi) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Pi.imag());
    return es.eigenvalues().minCoeff();
}

// dv(P) = A^{-1} du(P), normalized so that alpha_j periods give the identity
inline Vec normalized_differentials(const PeriodData& pd, cplx l, cplx mu) {
    int g = pd.spec.genus();
    std::vector<cplx> raw(g);
    du_all(pd.spec, l, mu, raw);
    Vec u(g);
    for (int i = 0; i < g; ++i) u(i) = raw[i];
    return pd.a_inverse * u;
}

// dPi/dlambda_k via the variational residue: the sheet sum
// F(l) = sum_s dv_i(P^{(s)}) dv_j(P^{(s)}) is single-valued and meromorphic,
// so its residue at lambda_k comes from a trapezoid (DFT) rule on a circle.
inline Mat rauch_derivative(const PeriodData& pd, int k, int n_circle = 64) {
    const CurveSpec& spec = pd.spec;
    int g = spec.genus();
    double lam_k = spec.lambda(k);
    double dist = 1e300;
    for (int i = 1; i <= 2 * spec.m() + 1; ++i)
        if (i != k) dist = std::min(dist, std::abs(spec.lambda(i) - lam_k));
    auto residue = [&](double r) {
        Mat acc = Mat::Zero(g, g);
        for (int n = 0; n < n_circle; ++n) {
            cplx w = std::exp(2.0 * pi * I * double(n) / double(n_circle));
            cplx l = lam_k + r * w;
            auto roots = spec.mu_roots(l);
            Mat F = Mat::Zero(g, g);
            for (auto mu : roots) {
                Vec dv = normalized_differentials(pd, l, mu);
                F += dv * dv.transpose();
            }
            acc += (r * w / double(n_circle)) * F;
        }
        return acc;
    };
    Mat r1 = residue(0.10 * dist), r2 = residue(0.05 * dist);
    double drift = (r1 - r2).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, r2.cwiseAbs().maxCoeff());
    if (drift > 1e-5 * scale)
        throw NumericError("Rauch residue unstable under radius refinement");
    return 2.0 * pi * I * r2;
}

// central finite difference of Pi in lambda_k, for cross-checks
inline Mat pi_branch_derivative_fd(const CurveSpec& spec, int k, double h = 1e-5,
                                   const QuadratureConfig& cfg = {}) {
    auto shifted = [&](double dh) {
        auto lam = spec.branch_points();
        lam[k - 1] += dh;
        return period_matrix(CurveSpec(spec.N(), spec.m(), lam), cfg).pi_matrix;
    };
    return (shifted(h) - shifted(-h)) / (2.0 * h);
}

}  // namespace znt
