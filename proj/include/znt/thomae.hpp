#pragma once
// Thomae-type formulas: the classical hyperelliptic anchor, the singular
// Z_N right-hand sides for both characteristic families, the genus-2
// closed-form reference (N=3, lambda=(0,t,1)) with its hypergeometric
// evaluator, and the pinching limit of det A_s.

#include <znt/characteristics.hpp>
#include <znt/curve.hpp>
#include <znt/periods.hpp>
#include <znt/theta.hpp>

#include <set>
#include <vector>

namespace znt {

struct SeriesSlow : NumericError {
    using NumericError::NumericError;
};

inline cplx gauss_2f1_series(double a, double b, double c, double t, int maxterms = 300,
                             double tol = 1e-16) {
    double s = 1.0, term = 1.0;
    for (int n = 0; n < maxterms; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * t;
        s += term;
        if (std::abs(term) < tol * std::abs(s)) return s;
    }
    throw SeriesSlow("2F1 series did not reach tolerance in 300 terms");
}

// F(1/3, 2/3; 1; t) on (0,1); for t past 0.6 the c = a+b logarithmic
// connection formula in 1-t keeps the series fast
inline double hyper_f13(double t) {
    const double a = 1.0 / 3.0, b = 2.0 / 3.0;
    if (t <= 0.6) return gauss_2f1_series(a, b, 1.0, t).real();
    const double x = 1.0 - t;
    const double euler = 0.5772156649015329;
    const double psi_a = -euler - 1.5 * std::log(3.0) - pi / (2.0 * std::sqrt(3.0));
    const double psi_b = -euler - 1.5 * std::log(3.0) + pi / (2.0 * std::sqrt(3.0));
    const double pref = 1.0 / (std::tgamma(a) * std::tgamma(b));  // Gamma(a+b) = 1
    double lnx = std::log(x);
    double s = 0.0, poch = 1.0, psin = -euler, pa = psi_a, pb = psi_b;
    for (int n = 0; n < 300; ++n) {
        double term = poch * (lnx - 2.0 * psin + pa + pb);
        s += term;
        poch *= (a + n) * (b + n) / ((1.0 + n) * (1.0 + n)) * x;
        psin += 1.0 / (n + 1.0);
        pa += 1.0 / (a + n);
        pb += 1.0 / (b + n);
        if (n > 3 && std::abs(term) < 1e-17 * std::abs(s)) return -pref * s;
    }
    return -pref * s;
}

struct HutchinsonReference {
    double t;
    cplx T;
    cplx A1, A2;
    Mat Pi_closed;
};

// N=3, m=1, lambda = (0, t, 1)
inline HutchinsonReference hutchinson_reference(double t) {
    if (t <= 0.05 || t >= 0.95) throw ConfigInvalid("hutchinson t outside (0.05, 0.95)");
    double F0 = hyper_f13(t), F1 = hyper_f13(1.0 - t);
    cplx T = I * std::sqrt(3.0) / 3.0 * F1 / F0;
    cplx rho = std::exp(2.0 * pi * I / 3.0);
    cplx A1 = 2.0 * std::sqrt(3.0) * pi / 3.0 * (1.0 - rho * rho) * F0;  // (l3-l1)^{1/3} = 1
    cplx A2 = -rho * A1;
    Mat Pi(2, 2);
    Pi << 2.0 * T, T, T, 2.0 * T;
    return {t, T, A1, A2, Pi};
}

namespace detail {

// product of (lambda_a - lambda_b) over a in S1, b in S2, dropping every
// difference that touches the infinite branch point 2m+2
template <class S1, class S2>
inline cplx diff_prod(const CurveSpec& spec, const S1& s1, const S2& s2) {
    int inf = 2 * spec.m() + 2;
    cplx r = 1.0;
    for (int a : s1)
        for (int b : s2) {
            if (a == inf || b == inf) continue;
            r *= spec.lambda(a) - spec.lambda(b);
        }
    return r;
}

inline cplx ipow(cplx b, long e) {
    cplx r = 1.0;
    bool inv = e < 0;
    if (inv) e = -e;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return inv ? 1.0 / r : r;
}

// the same-parity Vandermonde factors prod (l_{2i}-l_{2k})^{N(N-1)} etc.
inline cplx vandermonde_factor(const CurveSpec& spec) {
    int N = spec.N(), m = spec.m();
    cplx v = 1.0;
    for (int i = 1; i <= m; ++i)
        for (int k = i + 1; k <= m; ++k)
            v *= ipow(spec.lambda(2 * i) - spec.lambda(2 * k), N * (N - 1));
    for (int i = 0; i <= m; ++i)
        for (int k = i + 1; k <= m; ++k)
            v *= ipow(spec.lambda(2 * i + 1) - spec.lambda(2 * k + 1), N * (N - 1));
    return v;
}

inline cplx det_power_prefactor(const BlockPeriods& bp, int N, int m, bool two_pi_i) {
    cplx pref = 1.0;
    for (auto& A : bp.a_blocks) pref *= ipow(A.determinant(), 2 * N);
    cplx base = two_pi_i ? 2.0 * pi * I : cplx(2.0 * pi);
    return pref / ipow(base, 2L * m * N * (N - 1));
}

}  // namespace detail

// family M right-hand side of the singular Thomae formula; equals
// theta[e_m](0)^{4N}
inline cplx thomae_rhs_em(const CurveSpec& spec, const BlockPeriods& bp, const Partition& part) {
    validate_partition(spec, part);
    if (part.is_m_plus_1()) throw InvalidPartition("family M expected");
    int N = spec.N(), m = spec.m();
    std::set<int> I1(part.I1.begin(), part.I1.end()), J1(part.J1.begin(), part.J1.end());
    std::set<int> I2, J2;
    for (int i = 1; i <= 2 * m + 1; i += 2)
        if (!I1.count(i)) I2.insert(i);
    for (int j = 2; j <= 2 * m + 2; j += 2)
        if (!J1.count(j) && j != 2 * m + 2) J2.insert(j);
    cplx cross = detail::diff_prod(spec, I1, J1) * detail::diff_prod(spec, I2, J2) /
                 (detail::diff_prod(spec, I1, I2) * detail::diff_prod(spec, J1, J2));
    return detail::det_power_prefactor(bp, N, m, true) * detail::vandermonde_factor(spec) *
           detail::ipow(cross, 2 * (N - 1));
}

// family M+1 right-hand side. The source prints a (2pi) power here where the
// family-M formula has (2pi i); the exponent 2mN(N-1) is divisible by 4 for
// all N, m, so the two variants coincide identically. Both are still
// computed so reports can say so.
inline cplx thomae_rhs_em1(const CurveSpec& spec, const BlockPeriods& bp, const Partition& part,
                           bool two_pi_i_variant = false) {
    validate_partition(spec, part);
    if (!part.is_m_plus_1()) throw InvalidPartition("family M+1 expected");
    int N = spec.N(), m = spec.m();
    int im = *part.im, jm = *part.jm;
    std::set<int> I1(part.I1.begin(), part.I1.end()), J1(part.J1.begin(), part.J1.end());
    std::set<int> I1p = I1, I2, J2, J2p;
    I1p.insert(im);
    for (int i = 1; i <= 2 * m + 1; i += 2)
        if (!I1.count(i) && i != im) I2.insert(i);
    for (int j = 2; j <= 2 * m + 2; j += 2)
        if (!J1.count(j) && j != jm && j != 2 * m + 2) J2.insert(j);
    J2p = J2;
    J2p.insert(jm);
    cplx cross = detail::diff_prod(spec, I1p, J1) * detail::diff_prod(spec, I2, J2p) /
                 (detail::diff_prod(spec, I1p, I2) * detail::diff_prod(spec, J1, J2p));
    std::set<int> im_s{im}, jm_s{jm};
    cplx extra = detail::diff_prod(spec, im_s, J2) * detail::diff_prod(spec, I1, jm_s) /
                 (detail::diff_prod(spec, im_s, I1) * detail::diff_prod(spec, jm_s, J2));
    return detail::det_power_prefactor(bp, N, m, two_pi_i_variant) *
           detail::vandermonde_factor(spec) * detail::ipow(cross, 2 * (N - 1)) *
           detail::ipow(extra, 4 * (N - 2));
}

// classical hyperelliptic anchor at N=2: theta[e]^8 against the original
// product formula over the two halves of the branch-point partition
// (the infinite point's differences drop out). Independent route from
// thomae_rhs_em on purpose.
inline cplx thomae_classical_rhs(const CurveSpec& spec, const BlockPeriods& bp,
                                 const Partition& part) {
    if (spec.N() != 2) throw ConfigInvalid("classical anchor is the N=2 case");
    validate_partition(spec, part);
    int m = spec.m();
    std::vector<int> half1(part.I1.begin(), part.I1.end());
    half1.insert(half1.end(), part.J1.begin(), part.J1.end());
    std::sort(half1.begin(), half1.end());
    std::vector<int> half2;
    for (int k = 1; k <= 2 * m + 2; ++k)
        if (std::find(half1.begin(), half1.end(), k) == half1.end()) half2.push_back(k);
    auto pairs_sq = [&](const std::vector<int>& S) {
        cplx r = 1.0;
        for (size_t a = 0; a < S.size(); ++a)
            for (size_t b = a + 1; b < S.size(); ++b) {
                if (S[a] == 2 * m + 2 || S[b] == 2 * m + 2) continue;
                cplx d = spec.lambda(S[a]) - spec.lambda(S[b]);
                r *= d * d;
            }
        return r;
    };
    cplx det = bp.a_blocks[0].determinant();
    cplx pref = detail::ipow(det / detail::ipow(2.0 * pi * I, m), 4);
    return pref * pairs_sq(half1) * pairs_sq(half2);
}

struct ThomaeReport {
    Partition partition;
    RationalCharacteristic characteristic;
    cplx lhs, rhs;
    double rel_error;
    double phase_error;  // argument difference folded to the 2pi/(4N) grid
};

inline ThomaeReport verify_thomae(const CurveSpec& spec, const PeriodData& pd,
                                  const Partition& part) {
    RationalCharacteristic ch =
        part.is_m_plus_1() ? em1_characteristic(spec, part) : em_characteristic(spec, part);
    cplx th = theta(Vec::Zero(spec.genus()), pd.pi_matrix, ch).value;
    cplx lhs = detail::ipow(th, 4 * spec.N());
    cplx rhs = part.is_m_plus_1() ? thomae_rhs_em1(spec, pd.blocks, part)
                                  : thomae_rhs_em(spec, pd.blocks, part);
    double rel = std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs));
    double dphi = std::arg(lhs / rhs);
    double cell = 2.0 * pi / (4.0 * spec.N());
    double folded = std::remainder(dphi, cell);
    return {part, ch, lhs, rhs, rel, std::abs(folded)};
}

// pinching limit of det A_s: with each cut collapsed to v_k (cut half-width
// eps), det A_s -> (2pi i)^m / (prod_{k<j}(v_k - v_j) prod_k (v_k - l_{2m+1})^{s/N});
// the fractional power is matched up to an N-th root of unity and with these
// contours the principal branch wins.
struct PinchResult {
    std::vector<double> rel_errors;  // per block s = 1..N-1
    std::vector<int> root_index;     // matching N-th root of unity
    cplx theta0;
};

inline PinchResult pinching_check(int N, const std::vector<double>& v, double lam_last,
                                  double eps, const QuadratureConfig& cfg = {}) {
    int m = (int)v.size();
    std::vector<double> lam;
    for (double vk : v) {
        lam.push_back(vk - eps);
        lam.push_back(vk + eps);
    }
    lam.push_back(lam_last);
    CurveSpec spec(N, m, lam);
    PeriodData pd = period_matrix(spec, cfg);
    PinchResult out;
    out.theta0 = theta(Vec::Zero(spec.genus()), pd.pi_matrix, RationalCharacteristic(spec.genus()))
                     .value;
    for (int s = 1; s <= N - 1; ++s) {
        cplx target = detail::ipow(2.0 * pi * I, m);
        for (int k = 0; k < m; ++k)
            for (int j = k + 1; j < m; ++j) target /= v[k] - v[j];
        for (int k = 0; k < m; ++k)
            target /= std::exp(std::log(cplx(v[k] - lam_last)) * double(s) / double(N));
        cplx det = pd.blocks.a_blocks[s - 1].determinant();
        double best = 1e300;
        int best_k = 0;
        for (int k = 0; k < N; ++k) {
            cplx rot = std::exp(2.0 * pi * I * double(k) / double(N));
            double d = std::abs(det - rot * target);
            if (d < best) {
                best = d;
                best_k = k;
            }
        }
        out.rel_errors.push_back(best / std::abs(target));
        out.root_index.push_back(best_k);
    }
    return out;
}

}  // namespace znt
