#pragma once
// Cyclic covers mu^N = p(lambda) q(lambda)^{N-1} with real ordered branch
// points. Sheets are identified by the mu value itself; everything that
// needs a sheet carries a mu along and moves it by analytic continuation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace znt {

using cplx = std::complex<double>;

constexpr double pi = 3.14159265358979323846;
inline const cplx I{0.0, 1.0};

struct CurveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigInvalid : CurveError {
    using CurveError::CurveError;
};
struct NumericError : CurveError {
    using CurveError::CurveError;
};
struct TrackingAmbiguity : NumericError {
    using NumericError::NumericError;
};
struct BranchPointProximity : NumericError {
    using NumericError::NumericError;
};

struct SurfacePoint {
    cplx lambda;
    cplx mu;
};

class CurveSpec {
  public:
    CurveSpec(int N, int m, std::vector<double> branch_points, double eps_sep = 1e-9)
        : N_(N), m_(m), lam_(std::move(branch_points)), eps_sep_(eps_sep) {
        if (N_ < 2) throw ConfigInvalid("N must be >= 2");
        if (m_ < 1) throw ConfigInvalid("m must be >= 1");
        if ((int)lam_.size() != 2 * m_ + 1)
            throw ConfigInvalid("need 2m+1 branch points, got " + std::to_string(lam_.size()));
        for (size_t i = 1; i < lam_.size(); ++i)
            if (lam_[i] - lam_[i - 1] <= eps_sep_)
                throw ConfigInvalid("branch points not strictly increasing at index " +
                                    std::to_string(i));
        min_gap_ = lam_[1] - lam_[0];
        for (size_t i = 2; i < lam_.size(); ++i)
            min_gap_ = std::min(min_gap_, lam_[i] - lam_[i - 1]);
    }

    int N() const { return N_; }
    int m() const { return m_; }
    int genus() const { return (N_ - 1) * m_; }
    const std::vector<double>& branch_points() const { return lam_; }
    // 1-based access matching the usual lambda_1 < ... < lambda_{2m+1}
    double lambda(int k) const { return lam_.at(k - 1); }
    double min_gap() const { return min_gap_; }
    double eps_sep() const { return eps_sep_; }

    // p has the odd-index points (m+1 of them), q the even-index ones (m)
    cplx p(cplx l) const {
        cplx r = 1.0;
        for (int k = 0; k <= m_; ++k) r *= l - lam_[2 * k];
        return r;
    }
    cplx q(cplx l) const {
        cplx r = 1.0;
        for (int k = 1; k <= m_; ++k) r *= l - lam_[2 * k - 1];
        return r;
    }
    cplx rhs(cplx l) const {  // p q^{N-1}
        cplx r = p(l), qq = q(l);
        for (int s = 1; s < N_; ++s) r *= qq;
        return r;
    }

    double dist_to_branch(cplx l) const {
        double d = std::abs(l - lam_[0]);
        for (size_t i = 1; i < lam_.size(); ++i) d = std::min(d, std::abs(l - lam_[i]));
        return d;
    }

    // the N roots of mu^N = p q^{N-1}; index 0 is the principal sheet
    std::vector<cplx> mu_roots(cplx l) const {
        if (dist_to_branch(l) < eps_sep_)
            throw BranchPointProximity("mu_roots too close to a branch point");
        cplx c = rhs(l);
        cplx principal = std::exp(std::log(c) / double(N_));
        std::vector<cplx> out(N_);
        for (int k = 0; k < N_; ++k)
            out[k] = principal * std::exp(2.0 * pi * I * double(k) / double(N_));
        return out;
    }
    cplx mu_principal(cplx l) const { return mu_roots(l)[0]; }

    // analytic continuation of mu from a to b along the straight segment.
    // At each step pick the root nearest the running mu; halve the step until
    // that root is nearer than 0.4x the distance to any competitor.
    cplx track(cplx a, cplx b, cplx mu, double floor_frac = 1e-12) const {
        double len = std::abs(b - a);
        if (len == 0.0) return mu;
        double floor_step = floor_frac;
        double t = 0.0, h = 0.5;
        while (t < 1.0) {
            double step = std::min(h, 1.0 - t);
            bool ok = false;
            while (!ok) {
                cplx l = a + (t + step) * (b - a);
                auto roots = mu_roots(l);
                size_t best = 0;
                double dbest = std::abs(roots[0] - mu), dsecond = 1e300;
                for (size_t i = 1; i < roots.size(); ++i) {
                    double d = std::abs(roots[i] - mu);
                    if (d < dbest) {
                        dsecond = dbest;
                        dbest = d;
                        best = i;
                    } else
                        dsecond = std::min(dsecond, d);
                }
                if (roots.size() == 1 || dbest < 0.4 * dsecond) {
                    mu = roots[best];
                    t += step;
                    ok = true;
                    if (step == h && h < 0.5) h *= 2.0;
                } else {
                    step *= 0.5;
                    h = step;
                    if (step < floor_step)
                        throw TrackingAmbiguity("continuation lost between sheets");
                }
            }
        }
        return mu;
    }

    // continuation along a polyline
    cplx track_poly(const std::vector<cplx>& pts, cplx mu) const {
        for (size_t i = 0; i + 1 < pts.size(); ++i) mu = track(pts[i], pts[i + 1], mu);
        return mu;
    }

  private:
    int N_, m_;
    std::vector<double> lam_;
    double eps_sep_, min_gap_;
};

// local chart coordinate vanishing at R (ordinary point, finite branch
// point, or infinity when at_infinity is set)
inline cplx local_coordinate(const CurveSpec& spec, cplx lP, cplx lR, bool at_infinity = false) {
    if (at_infinity) return std::exp(std::log(lP) * (-1.0 / spec.N()));
    for (double lb : spec.branch_points())
        if (std::abs(lR - lb) < spec.eps_sep())
            return std::exp(std::log(lP - lR) / double(spec.N()));
    return lP - lR;
}

// meromorphic function bases Psi = (1, mu, mu^2/q, ..., mu^{N-1}/q^{N-2})
// and Phi = (mu^{N-1}, mu^{N-2}, q mu^{N-3}, ..., q^{N-2})
struct FunctionBases {
    std::vector<cplx> psi, phi;
};

inline FunctionBases function_bases(const CurveSpec& spec, const SurfacePoint& P) {
    int N = spec.N();
    cplx qq = spec.q(P.lambda);
    if (std::abs(qq) < 1e-14) throw NumericError("function bases at an even branch point");
    FunctionBases fb;
    fb.psi.resize(N);
    fb.phi.resize(N);
    for (int k = 0; k < N; ++k) {
        cplx v = std::pow(P.mu, k);
        for (int j = 0; j < k - 1; ++j) v /= qq;
        fb.psi[k] = v;
        cplx w = std::pow(P.mu, N - 1 - k);
        for (int j = 0; j < k - 1; ++j) w *= qq;
        fb.phi[k] = w;
    }
    return fb;
}

// third-kind differential Omega_{Q,R}(P), simple poles at Q and R with
// residues +1 and -1; returned per dlambda
inline cplx third_kind_differential(const CurveSpec& spec, const SurfacePoint& P,
                                    const SurfacePoint& Q, const SurfacePoint& R) {
    auto pair = [&](const SurfacePoint& S) {
        auto a = function_bases(spec, S), b = function_bases(spec, P);
        cplx acc = 0.0;
        for (int k = 0; k < spec.N(); ++k) acc += a.psi[k] * b.phi[k];
        return acc;
    };
    if (std::abs(P.lambda - Q.lambda) < 1e-13 || std::abs(P.lambda - R.lambda) < 1e-13)
        throw NumericError("third-kind differential evaluated at a pole");
    cplx fmu = double(spec.N()) * std::pow(P.mu, spec.N() - 1);
    return (pair(Q) / (P.lambda - Q.lambda) - pair(R) / (P.lambda - R.lambda)) / fmu;
}

}  // namespace znt
