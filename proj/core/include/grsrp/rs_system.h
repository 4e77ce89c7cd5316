#pragma once

#include "grsrp/geometry.h"
#include "grsrp/polynomial.h"

#include <array>
#include <span>

namespace grsrp {

inline constexpr int kMinimalSampleSize = 5;
inline constexpr int kNumEpipolarTerms = 12;
inline constexpr int kNumScaleTerms = 4;

template <class S> using Vec3T = std::array<S, 3>;
template <class S> using Mat3T = std::array<std::array<S, 3>, 3>;

// Five correspondences plus the initial relative rotation R0 around which the
// unknown rotation is linearized: R(a) ~ R0 (I + [a]x).
struct MinimalProblem {
    std::array<Correspondence, kMinimalSampleSize> correspondences;
    Rotation r0;
};

// One epipolar equation of the linearized system is t'(c + D a): linear in t,
// affine in a. `t[k]` multiplies t_k and `ta[k][l]` multiplies t_k a_l.
template <class S> struct EpipolarCoefficients {
    Vec3T<S> t{};
    Mat3T<S> ta{};
};

// Six equations in (a1, a2, a3, t1, t2, t3): five epipolar constraints and the
// scale constraint t1^2 + t2^2 + t3^2 - 1.
template <class S> struct PolynomialSystem {
    std::array<Polynomial<S>, kMinimalSampleSize + 1> equations;
};

// Monomials of an epipolar equation in the fixed term order
// t1, t2, t3, t1*a1, t1*a2, t1*a3, t2*a1, ..., t3*a3.
const std::array<Monomial, kNumEpipolarTerms> &epipolar_monomials();
// Monomials of the scale equation: t1^2, t2^2, t3^2, 1.
const std::array<Monomial, kNumScaleTerms> &scale_monomials();
const std::array<double, kNumScaleTerms> &scale_coefficients();

namespace detail {

template <class S> Mat3T<S> skew3(const Vec3T<S> &v) {
    const S z(0);
    return {{{z, -v[2], v[1]}, {v[2], z, -v[0]}, {-v[1], v[0], z}}};
}

template <class S> Mat3T<S> matmul(const Mat3T<S> &a, const Mat3T<S> &b) {
    Mat3T<S> out{};
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            S acc(0);
            for (int k = 0; k < 3; ++k) {
                acc = acc + a[r][k] * b[k][c];
            }
            out[r][c] = acc;
        }
    }
    return out;
}

template <class S> Vec3T<S> matvec(const Mat3T<S> &a, const Vec3T<S> &v) {
    Vec3T<S> out{};
    for (int r = 0; r < 3; ++r) {
        out[r] = a[r][0] * v[0] + a[r][1] * v[1] + a[r][2] * v[2];
    }
    return out;
}

template <class S> Mat3T<S> identity_plus(const Mat3T<S> &m, S scale) {
    Mat3T<S> out{};
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            out[r][c] = m[r][c] * scale + (r == c ? S(1) : S(0));
        }
    }
    return out;
}

} // namespace detail

// Coefficients of m_j' [t]x (I + v_j[w'_j]x)' R0 (I + [a]x) (I + v_i[w'_i]x) m_i.
// With M = (I - v_j[w'_j]x) R0 and n = (I + v_i[w'_i]x) m_i the residual is
// t' ( -[m_j]x M n + [m_j]x M [n]x a ).
template <class S>
EpipolarCoefficients<S> epipolar_coefficients(const Vec3T<S> &ray_i, S row_i, const Vec3T<S> &w_i,
                                              const Vec3T<S> &ray_j, S row_j, const Vec3T<S> &w_j,
                                              const Mat3T<S> &r0) {
    using namespace detail;
    const Mat3T<S> lj_t = identity_plus(skew3(w_j), -row_j);
    const Mat3T<S> li = identity_plus(skew3(w_i), row_i);
    const Mat3T<S> m = matmul(lj_t, r0);
    const Vec3T<S> n = matvec(li, ray_i);
    const Mat3T<S> mj = skew3(ray_j);
    const Mat3T<S> mj_m = matmul(mj, m);
    EpipolarCoefficients<S> out;
    const Vec3T<S> c = matvec(mj_m, n);
    for (int k = 0; k < 3; ++k) {
        out.t[k] = -c[k];
    }
    out.ta = matmul(mj_m, skew3(n));
    return out;
}

EpipolarCoefficients<double> epipolar_coefficients(const Correspondence &corr, const Mat3 &r0);

template <class S>
PolynomialSystem<S> build_system_from_coefficients(std::span<const EpipolarCoefficients<S>, kMinimalSampleSize> eqs) {
    PolynomialSystem<S> sys;
    const auto &mono = epipolar_monomials();
    for (int e = 0; e < kMinimalSampleSize; ++e) {
        for (int k = 0; k < 3; ++k) {
            sys.equations[e].add_term(mono[k], eqs[e].t[k]);
            for (int l = 0; l < 3; ++l) {
                sys.equations[e].add_term(mono[3 + 3 * k + l], eqs[e].ta[k][l]);
            }
        }
    }
    const auto &smono = scale_monomials();
    const auto &scoef = scale_coefficients();
    for (int k = 0; k < kNumScaleTerms; ++k) {
        sys.equations[kMinimalSampleSize].add_term(smono[k], S(static_cast<std::int64_t>(scoef[k])));
    }
    return sys;
}

PolynomialSystem<double> build_system(const MinimalProblem &problem);

// Largest absolute coefficient over all six equations.
double coefficient_norm(const PolynomialSystem<double> &sys);

} // namespace grsrp
