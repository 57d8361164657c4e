#pragma once
// Algebraic closed forms of the Szego kernel for the two characteristic
// families, the diagonal expansion coefficient phi, the explicit second
// log-derivative identity, and the Fay identity residual.
//
// All fractional exponents are assembled as exact rationals first and applied
// as principal-branch powers of each bracketed product as a whole.

#include <znt/characteristics.hpp>
#include <znt/curve.hpp>
#include <znt/kernels.hpp>
#include <znt/periods.hpp>

#include <set>
#include <vector>

namespace znt {

struct BranchCut : NumericError {
    using NumericError::NumericError;
};

struct PartitionSets {
    std::set<int> I1, I2, J1, J2;
    std::optional<int> im, jm;
};

// I2 = I0 - I1, J2 = J0 - J1 - {2m+2}; the M+1 family additionally strips
// i_m and j_m from the leftovers
inline PartitionSets partition_sets(const CurveSpec& spec, const Partition& part) {
    validate_partition(spec, part);
    int m = spec.m();
    PartitionSets ps;
    ps.I1.insert(part.I1.begin(), part.I1.end());
    ps.J1.insert(part.J1.begin(), part.J1.end());
    ps.im = part.im;
    ps.jm = part.jm;
    for (int i = 1; i <= 2 * m + 1; i += 2)
        if (!ps.I1.count(i) && !(part.im && *part.im == i)) ps.I2.insert(i);
    for (int j = 2; j <= 2 * m + 2; j += 2)
        if (!ps.J1.count(j) && j != 2 * m + 2 && !(part.jm && *part.jm == j)) ps.J2.insert(j);
    return ps;
}

namespace detail {

// psi_k = (lQ - lambda_k)/(lP - lambda_k); the infinite branch point 2m+2
// contributes a factor 1
inline cplx psi(const CurveSpec& spec, int k, cplx lP, cplx lQ) {
    if (k == 2 * spec.m() + 2) return 1.0;
    return (lQ - spec.lambda(k)) / (lP - spec.lambda(k));
}

inline cplx psi_prod(const CurveSpec& spec, const std::set<int>& S, cplx lP, cplx lQ) {
    cplx r = 1.0;
    for (int k : S) r *= psi(spec, k, lP, lQ);
    return r;
}

inline cplx rat_pow(cplx base, Rat e) {
    if (base.real() < 0.0 && std::abs(base.imag()) < 1e-12 * std::abs(base.real()))
        throw BranchCut("bracketed ratio on the negative real axis; resample");
    return std::exp(std::log(base) * boost::rational_cast<double>(e));
}

inline Rat frac_part(Rat r) {
    return mod1(r);
}

}  // namespace detail

// family-M kernel, reduced by sqrt(dx dx):
//   1/(N (lQ - lP)) * sum_s b1^{(N-1)/2N - s/N} * b2^{(N-1)/2N - {(s+1)/N}}
// with b1 = prod_{I1} psi / prod_{J2} psi, b2 = prod_{I2} psi / prod_{J1} psi
inline cplx szego_algebraic_em(const CurveSpec& spec, const PartitionSets& ps, cplx lP, cplx lQ) {
    int N = spec.N();
    cplx b1 = detail::psi_prod(spec, ps.I1, lP, lQ) / detail::psi_prod(spec, ps.J2, lP, lQ);
    cplx b2 = detail::psi_prod(spec, ps.I2, lP, lQ) / detail::psi_prod(spec, ps.J1, lP, lQ);
    cplx acc = 0.0;
    for (int s = 0; s < N; ++s) {
        Rat e1 = Rat(N - 1, 2 * N) - Rat(s, N);
        Rat e2 = Rat(N - 1, 2 * N) - detail::frac_part(Rat(s + 1, N));
        acc += detail::rat_pow(b1, e1) * detail::rat_pow(b2, e2);
    }
    return acc / (double(N) * (lQ - lP));
}

// zero-characteristic closed form (partition I1 = I0, J1 = empty)
inline cplx szego_algebraic_zero(const CurveSpec& spec, cplx lP, cplx lQ) {
    int N = spec.N();
    cplx b = (spec.q(lP) * spec.p(lQ)) / (spec.p(lP) * spec.q(lQ));
    cplx acc = 0.0;
    for (int s = 0; s < N; ++s)
        acc += detail::rat_pow(b, Rat(-s, N) + Rat(N - 1, 2 * N));
    return acc / (double(N) * (lQ - lP));
}

// family-(M+1) kernel: an extra (psi_{i_m}/psi_{j_m}) bracket with exponent
// (N-1)/2N - {(s+2)/N}
inline cplx szego_algebraic_em1(const CurveSpec& spec, const PartitionSets& ps, cplx lP, cplx lQ) {
    if (!ps.im || !ps.jm) throw InvalidPartition("M+1 sets need i_m, j_m");
    int N = spec.N();
    cplx b1 = detail::psi_prod(spec, ps.I1, lP, lQ) / detail::psi_prod(spec, ps.J2, lP, lQ);
    cplx b2 = detail::psi_prod(spec, ps.I2, lP, lQ) / detail::psi_prod(spec, ps.J1, lP, lQ);
    cplx b3 = detail::psi(spec, *ps.im, lP, lQ) / detail::psi(spec, *ps.jm, lP, lQ);
    cplx acc = 0.0;
    for (int s = 0; s < N; ++s) {
        Rat e1 = Rat(N - 1, 2 * N) - Rat(s, N);
        Rat e2 = Rat(N - 1, 2 * N) - detail::frac_part(Rat(s + 1, N));
        Rat e3 = Rat(N - 1, 2 * N) - detail::frac_part(Rat(s + 2, N));
        acc += detail::rat_pow(b1, e1) * detail::rat_pow(b2, e2) * detail::rat_pow(b3, e3);
    }
    return acc / (double(N) * (lQ - lP));
}

namespace detail {

inline cplx dlog_prod(const CurveSpec& spec, const std::set<int>& num, const std::set<int>& den,
                      cplx l) {
    cplx acc = 0.0;
    for (int k : num)
        if (k != 2 * spec.m() + 2) acc += 1.0 / (l - spec.lambda(k));
    for (int k : den)
        if (k != 2 * spec.m() + 2) acc -= 1.0 / (l - spec.lambda(k));
    return acc;
}

}  // namespace detail

// diagonal second-order coefficient phi[e_m](lambda)
inline cplx phi_em(const CurveSpec& spec, const PartitionSets& ps, cplx l) {
    int N = spec.N();
    cplx t1 = detail::dlog_prod(spec, ps.I1, ps.J2, l);
    cplx t2 = detail::dlog_prod(spec, ps.I2, ps.J1, l);
    double c1 = double(N * N - 1) / (24.0 * N * N);
    double c2 = 2.0 * (N - 1.0) * (N - 5.0) / (24.0 * N * N);
    return c1 * (t1 * t1 + t2 * t2) + c2 * t1 * t2;
}

// phi[e_{m+1}](lambda), with the primed sets I1' = I1 + i_m, J2' = J2 + j_m
inline cplx phi_em1(const CurveSpec& spec, const PartitionSets& ps, cplx l) {
    if (!ps.im || !ps.jm) throw InvalidPartition("M+1 sets need i_m, j_m");
    int N = spec.N();
    cplx t1 = detail::dlog_prod(spec, ps.I1, ps.J2, l);
    cplx t2 = detail::dlog_prod(spec, ps.I2, ps.J1, l);
    cplx t3 = 1.0 / (l - spec.lambda(*ps.im)) - 1.0 / (l - spec.lambda(*ps.jm));
    std::set<int> I1p = ps.I1, J2p = ps.J2;
    I1p.insert(*ps.im);
    J2p.insert(*ps.jm);
    cplx t1p = detail::dlog_prod(spec, I1p, J2p, l);
    double c1 = double(N * N - 1) / (24.0 * N * N);
    double c2 = 2.0 * (N - 1.0) * (N - 5.0) / (24.0 * N * N);
    double c3 = 2.0 * (N * N - 12.0 * N + 23.0) / (24.0 * N * N);
    return c1 * (t1 * t1 + t2 * t2 + t3 * t3) + c2 * t1p * t2 + c3 * t1 * t3;
}

// Explicit second-log-derivative identity, exactly as printed:
//   LHS = sum_kl d2 log theta[e_m](0) dv_k(P) dv_l(P) / (dlambda)^2
//         at a single sheet point
//   RHS = (N-1)/(4N) (p''/p + q''/q) - (N^2-1)/(12 N^2) (dlog(p/q))^2
//         + 2 phi[e_m](lambda)
// Returns LHS - RHS. (Empirically this identity fails as printed; see the
// tests, which report rather than assert it.)
struct SecondIdentityResult {
    cplx lhs, rhs;
    cplx residual() const { return lhs - rhs; }
};

inline SecondIdentityResult second_identity(const PeriodData& pd, const Mat& Pi,
                                            const RationalCharacteristic& ch,
                                            const PartitionSets& ps, cplx l) {
    const CurveSpec& spec = pd.spec;
    int g = spec.genus(), N = spec.N();
    auto tv = theta(Vec::Zero(g), Pi, ch);
    Mat logH = tv.hessian / tv.value -
               (tv.gradient / tv.value) * (tv.gradient / tv.value).transpose();
    Vec dv = normalized_differentials(pd, l, spec.mu_principal(l));
    cplx lhs = dv.transpose() * logH * dv;

    // second derivatives of p and q from the factored forms
    auto dpp = [&](bool odd) {
        cplx v = 0.0;
        std::vector<double> roots;
        for (int k = 1; k <= 2 * spec.m() + 1; ++k)
            if ((k % 2 == 1) == odd) roots.push_back(spec.lambda(k));
        for (size_t a = 0; a < roots.size(); ++a)
            for (size_t b = 0; b < roots.size(); ++b)
                if (a != b) v += 1.0 / ((l - roots[a]) * (l - roots[b]));
        return v;  // p''/p as sum over ordered pairs
    };
    cplx dlog = 0.0;
    for (int k = 1; k <= 2 * spec.m() + 1; ++k)
        dlog += (k % 2 == 1 ? 1.0 : -1.0) / (l - spec.lambda(k));
    cplx rhs = 0.25 * double(N - 1) / N * (dpp(true) + dpp(false)) -
               double(N * N - 1) / (12.0 * N * N) * dlog * dlog + 2.0 * phi_em(spec, ps, l);
    return {lhs, rhs};
}

// Fay identity residual at (P,Q): |S[e] S[-e]| vs |omega + contraction|
struct FayResult {
    cplx lhs_theta, lhs_algebraic, rhs;
};

inline FayResult fay_identity(const PeriodData& pd, const Mat& Pi,
                              const RationalCharacteristic& ch,
                              const RationalCharacteristic& gamma, const PartitionSets& ps,
                              const SurfacePoint& P, const SurfacePoint& Q) {
    const CurveSpec& spec = pd.spec;
    int g = spec.genus();
    cplx s_plus = szego_theta_reduced(pd, Pi, ch, gamma, P, Q.lambda);
    cplx s_minus = szego_theta_reduced(pd, Pi, -ch, gamma, P, Q.lambda);
    FayResult out;
    out.lhs_theta = s_plus * s_minus;

    // algebraic route: the complementary partition (I0-I1, J0-J1) carries -e_m
    Partition comp;
    for (int i = 1; i <= 2 * spec.m() + 1; i += 2)
        if (!ps.I1.count(i)) comp.I1.push_back(i);
    for (int j = 2; j <= 2 * spec.m() + 2; j += 2)
        if (!ps.J1.count(j)) comp.J1.push_back(j);
    PartitionSets neg = partition_sets(spec, comp);
    out.lhs_algebraic =
        szego_algebraic_em(spec, ps, P.lambda, Q.lambda) *
        szego_algebraic_em(spec, neg, P.lambda, Q.lambda);

    auto tv = theta(Vec::Zero(g), Pi, ch);
    Mat logH = tv.hessian / tv.value -
               (tv.gradient / tv.value) * (tv.gradient / tv.value).transpose();
    Vec dvP = normalized_differentials(pd, P.lambda, P.mu);
    // the sheet at Q is the one the Abel path from P arrives on, matching the
    // convention inside the theta-form kernels
    cplx mu_q = abel_map(pd, P, Q.lambda).mu_end;
    Vec dvQ = normalized_differentials(pd, Q.lambda, mu_q);
    cplx om = omega_hessian_reduced(pd, Pi, gamma, P, Q.lambda);
    out.rhs = om + cplx(dvP.transpose() * logH * dvQ);
    return out;
}

}  // namespace znt
