#pragma once
// Riemann theta with rational characteristics: value, gradient, Hessian from
// one characteristic-shifted lattice sum. Truncation box from the Gaussian
// tail of Im Pi's smallest eigenvalue.

#include <znt/characteristics.hpp>
#include <znt/curve.hpp>
#include <znt/periods.hpp>

#include <Eigen/Dense>
#include <vector>

namespace znt {

struct NotPositiveDefinite : NumericError {
    using NumericError::NumericError;
};

struct ThetaValue {
    cplx value;
    Vec gradient;
    Mat hessian;
};

struct ThetaTruncation {
    double target_tol = 1e-13;
    int radius = 0;       // derived if 0
    double min_eig = 0.0; // cached
};

inline ThetaValue theta(const Vec& z, const Mat& Pi, const RationalCharacteristic& ch,
                        ThetaTruncation trunc = {}) {
    int g = (int)z.size();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Pi.imag());
    double lmin = es.eigenvalues().minCoeff();
    if (lmin <= 0.0) throw NotPositiveDefinite("Im Pi not positive definite");
    trunc.min_eig = lmin;
    Eigen::VectorXd dd(g), ee(g);
    {
        auto dv = ch.delta_d(), ev = ch.epsilon_d();
        for (int i = 0; i < g; ++i) {
            dd(i) = dv[i];
            ee(i) = ev[i];
        }
    }
    if (trunc.radius == 0) {
        Eigen::VectorXd zi = z.imag();
        Eigen::VectorXd shift = Pi.imag().ldlt().solve(zi);
        double off = dd.cwiseAbs().maxCoeff() + shift.cwiseAbs().maxCoeff();
        trunc.radius =
            (int)std::ceil(std::sqrt(-std::log(trunc.target_tol) / (pi * lmin)) + 1.0 + off);
    }
    int R = trunc.radius;
    ThetaValue out{0.0, Vec::Zero(g), Mat::Zero(g, g)};
    std::vector<int> n(g, -R);
    Eigen::VectorXd nd(g);
    Vec ze = z;
    for (int i = 0; i < g; ++i) ze(i) += ee(i);
    bool done = false;
    while (!done) {
        for (int i = 0; i < g; ++i) nd(i) = n[i] + dd(i);
        cplx quad = 0.0, lin = 0.0;
        for (int i = 0; i < g; ++i) {
            for (int j = 0; j < g; ++j) quad += nd(i) * Pi(i, j) * nd(j);
            lin += ze(i) * nd(i);
        }
        cplx term = std::exp(I * pi * quad + 2.0 * pi * I * lin);
        out.value += term;
        for (int i = 0; i < g; ++i) {
            out.gradient(i) += term * (2.0 * pi * I) * nd(i);
            for (int j = 0; j < g; ++j)
                out.hessian(i, j) += term * (2.0 * pi * I) * (2.0 * pi * I) * nd(i) * nd(j);
        }
        int c = 0;
        while (c < g && ++n[c] > R) n[c++] = -R;
        done = (c == g);
    }
    return out;
}

inline ThetaValue theta_zero_char(const Vec& z, const Mat& Pi, ThetaTruncation trunc = {}) {
    return theta(z, Pi, RationalCharacteristic((int)z.size()), trunc);
}

// heat equation: d2theta/dz_k dz_l = 2 i pi (1 + delta_kl) dtheta/dPi_kl.
// LHS from the Hessian, RHS by symmetric central difference in Pi_kl.
inline cplx heat_residual(const Vec& z, const Mat& Pi, const RationalCharacteristic& ch, int k,
                          int l, double h = 1e-6) {
    cplx lhs = theta(z, Pi, ch).hessian(k, l);
    Mat Pp = Pi, Pm = Pi;
    Pp(k, l) += h;
    Pm(k, l) -= h;
    if (k != l) {
        Pp(l, k) += h;
        Pm(l, k) -= h;
    }
    cplx d = (theta(z, Pp, ch).value - theta(z, Pm, ch).value) / (2.0 * h);
    cplx rhs = 2.0 * I * pi * (k == l ? 2.0 : 1.0) * d;
    return lhs - rhs;
}

// Quasi-periodicity under z -> z + m' + m Pi. The printed factor in the
// source formula pairs the lattice vectors the wrong way round and drops the
// delta phase (its own m'=1, m=0 case would fail); the corrected factor is
// the default, the literal one is kept behind `as_printed` for reporting.
inline cplx periodicity_residual(const Vec& z, const Mat& Pi, const RationalCharacteristic& ch,
                                 const std::vector<int>& m_int, const std::vector<int>& m_prime,
                                 bool as_printed = false) {
    int g = (int)z.size();
    Vec mm(g), mp(g);
    for (int i = 0; i < g; ++i) {
        mm(i) = (double)m_int[i];
        mp(i) = (double)m_prime[i];
    }
    Vec zs = z + mp + Pi.transpose() * mm;
    cplx t_shift = theta(zs, Pi, ch).value;
    cplx t0 = theta(z, Pi, ch).value;
    auto dd = ch.delta_d();
    auto ee = ch.epsilon_d();
    cplx expo = 0.0;
    if (as_printed) {
        // exp{-2 i pi <m', z + (1/2) m' Pi> - 2 i pi <eps, m'>}
        for (int i = 0; i < g; ++i) {
            expo += -2.0 * pi * I * mp(i) * z(i);
            for (int j = 0; j < g; ++j) expo += -pi * I * mp(i) * Pi(i, j) * mp(j);
            expo += -2.0 * pi * I * ee[i] * mp(i);
        }
    } else {
        for (int i = 0; i < g; ++i) {
            expo += 2.0 * pi * I * dd[i] * mp(i);
            expo += -2.0 * pi * I * mm(i) * z(i);
            for (int j = 0; j < g; ++j) expo += -pi * I * mm(i) * Pi(i, j) * mm(j);
            expo += -2.0 * pi * I * ee[i] * mm(i);
        }
    }
    return t_shift - std::exp(expo) * t0;
}

// odd nonsingular half-integer characteristic: enumerate all 2^{2g} half
// characteristics, keep the odd ones (4<delta,eps> odd), return the one with
// the largest theta-gradient at 0
inline RationalCharacteristic find_odd_nonsingular_half_characteristic(const Mat& Pi) {
    int g = (int)Pi.rows();
    RationalCharacteristic best;
    double best_norm = -1.0;
    for (unsigned long md = 0; md < (1ul << g); ++md)
        for (unsigned long me = 0; me < (1ul << g); ++me) {
            int par = 0;
            for (int i = 0; i < g; ++i)
                if ((md >> i & 1) && (me >> i & 1)) par ^= 1;
            if (!par) continue;
            RationalCharacteristic ch(g);
            for (int i = 0; i < g; ++i) {
                if (md >> i & 1) ch.delta[i] = Rat(1, 2);
                if (me >> i & 1) ch.epsilon[i] = Rat(1, 2);
            }
            auto tv = theta(Vec::Zero(g), Pi, ch);
            double n = tv.gradient.norm();
            if (n > best_norm) {
                best_norm = n;
                best = ch;
            }
        }
    if (best_norm <= 1e-6) throw NumericError("no odd nonsingular half characteristic found");
    return best;
}

}  // namespace znt
