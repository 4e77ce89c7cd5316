#include "grsrp/rs_system.h"

#include <algorithm>
#include <cmath>

namespace grsrp {

namespace {

Vec3T<double> to_array(const Vec3 &v) { return {v.x(), v.y(), v.z()}; }

} // namespace

const std::array<Monomial, kNumEpipolarTerms> &epipolar_monomials() {
    static const std::array<Monomial, kNumEpipolarTerms> monos = [] {
        std::array<Monomial, kNumEpipolarTerms> m{};
        for (int k = 0; k < 3; ++k) {
            m[k] = unit_monomial(3 + k);
            for (int l = 0; l < 3; ++l) {
                m[3 + 3 * k + l] = multiply(unit_monomial(3 + k), unit_monomial(l));
            }
        }
        return m;
    }();
    return monos;
}

const std::array<Monomial, kNumScaleTerms> &scale_monomials() {
    static const std::array<Monomial, kNumScaleTerms> monos = {
        multiply(unit_monomial(3), unit_monomial(3)), multiply(unit_monomial(4), unit_monomial(4)),
        multiply(unit_monomial(5), unit_monomial(5)), Monomial{}};
    return monos;
}

const std::array<double, kNumScaleTerms> &scale_coefficients() {
    static const std::array<double, kNumScaleTerms> coeffs = {1.0, 1.0, 1.0, -1.0};
    return coeffs;
}

EpipolarCoefficients<double> epipolar_coefficients(const Correspondence &corr, const Mat3 &r0) {
    Mat3T<double> r{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            r[i][j] = r0(i, j);
        }
    }
    return epipolar_coefficients<double>(to_array(corr.obs_i.point.lift()), corr.obs_i.row,
                                         to_array(corr.obs_i.w_scaled), to_array(corr.obs_j.point.lift()),
                                         corr.obs_j.row, to_array(corr.obs_j.w_scaled), r);
}

PolynomialSystem<double> build_system(const MinimalProblem &problem) {
    std::array<EpipolarCoefficients<double>, kMinimalSampleSize> eqs;
    for (int e = 0; e < kMinimalSampleSize; ++e) {
        eqs[e] = epipolar_coefficients(problem.correspondences[e], problem.r0.matrix());
    }
    return build_system_from_coefficients<double>(eqs);
}

double coefficient_norm(const PolynomialSystem<double> &sys) {
    double n = 0.0;
    for (const auto &eq : sys.equations) {
        for (const auto &[m, c] : eq.terms()) {
            n = std::max(n, std::abs(c));
        }
    }
    return n;
}

} // namespace grsrp
