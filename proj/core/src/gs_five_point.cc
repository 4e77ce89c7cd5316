#include "grsrp/gs_five_point.h"

#include "grsrp/errors.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace grsrp {

namespace {

// Dense polynomials in (x, y, z) of degree <= 3. Monomials are ordered as
// x^3 x^2y xy^2 y^3 x^2z xyz y^2z xz^2 yz^2 z^3 | x^2 xy y^2 xz yz z^2 x y z 1
// so that the last ten form the quotient basis.
constexpr int kNumMonomials = 20;
constexpr std::array<std::array<int, 3>, kNumMonomials> kExponents = {{
    {3, 0, 0}, {2, 1, 0}, {1, 2, 0}, {0, 3, 0}, {2, 0, 1}, {1, 1, 1}, {0, 2, 1}, {1, 0, 2}, {0, 1, 2}, {0, 0, 3},
    {2, 0, 0}, {1, 1, 0}, {0, 2, 0}, {1, 0, 1}, {0, 1, 1}, {0, 0, 2}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 0},
}};

constexpr int monomial_index(int ex, int ey, int ez) {
    for (int k = 0; k < kNumMonomials; ++k) {
        if (kExponents[k][0] == ex && kExponents[k][1] == ey && kExponents[k][2] == ez) {
            return k;
        }
    }
    return -1;
}

using Poly = Eigen::Matrix<double, kNumMonomials, 1>;

Poly operator_mul(const Poly &a, const Poly &b) {
    Poly r = Poly::Zero();
    for (int i = 0; i < kNumMonomials; ++i) {
        if (a(i) == 0.0) {
            continue;
        }
        for (int j = 0; j < kNumMonomials; ++j) {
            if (b(j) == 0.0) {
                continue;
            }
            const int ex = kExponents[i][0] + kExponents[j][0];
            const int ey = kExponents[i][1] + kExponents[j][1];
            const int ez = kExponents[i][2] + kExponents[j][2];
            if (ex + ey + ez > 3) {
                continue; // never reached for products of total degree <= 3
            }
            r(monomial_index(ex, ey, ez)) += a(i) * b(j);
        }
    }
    return r;
}

using PolyMat = std::array<std::array<Poly, 3>, 3>;

PolyMat mul(const PolyMat &a, const PolyMat &b) {
    PolyMat r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            r[i][j] = Poly::Zero();
            for (int k = 0; k < 3; ++k) {
                r[i][j] += operator_mul(a[i][k], b[k][j]);
            }
        }
    }
    return r;
}

PolyMat transpose(const PolyMat &a) {
    PolyMat r;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            r[i][j] = a[j][i];
        }
    }
    return r;
}

} // namespace

GsMinimalProblem GsMinimalProblem::from(std::span<const Correspondence> corrs) {
    if (corrs.size() != 5) {
        throw std::invalid_argument("GsMinimalProblem: exactly five correspondences are required");
    }
    GsMinimalProblem p;
    for (int k = 0; k < 5; ++k) {
        p.points_i[k] = corrs[k].obs_i.point;
        p.points_j[k] = corrs[k].obs_j.point;
    }
    return p;
}

std::vector<Mat3> gs_five_point(const GsMinimalProblem &problem) {
    Eigen::Matrix<double, 5, 9> q;
    for (int k = 0; k < 5; ++k) {
        const Vec3 mi = problem.points_i[k].lift();
        const Vec3 mj = problem.points_j[k].lift();
        if (!mi.allFinite() || !mj.allFinite()) {
            throw DegenerateInput("gs_five_point: non-finite point");
        }
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                q(k, 3 * a + b) = mj(a) * mi(b);
            }
        }
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 5, 9>> svd(q, Eigen::ComputeFullV);
    const auto &sv = svd.singularValues();
    if (!(sv(4) > 1e-12 * sv(0))) {
        throw DegenerateInput("gs_five_point: linear constraints are rank deficient");
    }
    // E = x X + y Y + z Z + W over the null space.
    const Eigen::Matrix<double, 9, 4> basis = svd.matrixV().rightCols<4>();
    const int lin_index[4] = {monomial_index(1, 0, 0), monomial_index(0, 1, 0), monomial_index(0, 0, 1),
                              monomial_index(0, 0, 0)};
    PolyMat e;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            e[a][b] = Poly::Zero();
            for (int k = 0; k < 4; ++k) {
                e[a][b](lin_index[k]) = basis(3 * a + b, k);
            }
        }
    }

    Eigen::Matrix<double, 10, kNumMonomials> constraints;
    constraints.row(0) = (operator_mul(e[0][0], operator_mul(e[1][1], e[2][2]) - operator_mul(e[1][2], e[2][1])) -
                          operator_mul(e[0][1], operator_mul(e[1][0], e[2][2]) - operator_mul(e[1][2], e[2][0])) +
                          operator_mul(e[0][2], operator_mul(e[1][0], e[2][1]) - operator_mul(e[1][1], e[2][0])))
                             .transpose();
    const PolyMat eet = mul(e, transpose(e));
    const Poly trace = eet[0][0] + eet[1][1] + eet[2][2];
    const PolyMat eete = mul(eet, e);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            constraints.row(1 + 3 * a + b) = (2.0 * eete[a][b] - operator_mul(trace, e[a][b])).transpose();
        }
    }

    // Gauss-Jordan on the cubic block leaves cubic = -G * basis.
    const Eigen::Matrix<double, 10, 10> lead = constraints.leftCols<10>();
    Eigen::FullPivLU<Eigen::Matrix<double, 10, 10>> lu(lead);
    if (!lu.isInvertible()) {
        throw DegenerateInput("gs_five_point: cubic constraint block is singular");
    }
    const Eigen::Matrix<double, 10, 10> g = lu.solve(Eigen::Matrix<double, 10, 10>(constraints.rightCols<10>()));
    if (!g.allFinite()) {
        throw DegenerateInput("gs_five_point: non-finite elimination");
    }

    // Multiplication by x on the basis [x^2 xy y^2 xz yz z^2 x y z 1].
    Eigen::Matrix<double, 10, 10> action = Eigen::Matrix<double, 10, 10>::Zero();
    const int x_times_basis[10][3] = {{3, 0, 0}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}, {1, 1, 1},
                                      {1, 0, 2}, {2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {1, 0, 0}};
    for (int r = 0; r < 10; ++r) {
        const int m = monomial_index(x_times_basis[r][0], x_times_basis[r][1], x_times_basis[r][2]);
        if (m < 10) {
            action.row(r) = -g.row(m);
        } else {
            action(r, m - 10) = 1.0;
        }
    }

    Eigen::EigenSolver<Eigen::Matrix<double, 10, 10>> es(action);
    if (es.info() != Eigen::Success) {
        throw DegenerateInput("gs_five_point: eigen decomposition failed");
    }
    std::vector<Mat3> out;
    for (int k = 0; k < 10; ++k) {
        const Eigen::Matrix<std::complex<double>, 10, 1> v = es.eigenvectors().col(k);
        if (std::abs(es.eigenvalues()(k).imag()) > 1e-8 * std::max(1.0, std::abs(es.eigenvalues()(k)))) {
            continue;
        }
        if (std::abs(v(9)) < 1e-14 * v.norm()) {
            continue;
        }
        const double x = (v(6) / v(9)).real();
        const double y = (v(7) / v(9)).real();
        const double z = (v(8) / v(9)).real();
        Eigen::Matrix<double, 9, 1> ev = basis * Eigen::Vector4d(x, y, z, 1.0);
        Mat3 em;
        em << ev(0), ev(1), ev(2), ev(3), ev(4), ev(5), ev(6), ev(7), ev(8);
        const double n = em.norm();
        if (!std::isfinite(n) || n == 0.0) {
            continue;
        }
        out.push_back(em / n);
    }
    return out;
}

std::array<RelativePose, 4> essential_factorizations(const Mat3 &e) {
    Eigen::JacobiSVD<Mat3> svd(e, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 u = svd.matrixU();
    Mat3 v = svd.matrixV();
    if (u.determinant() < 0.0) {
        u = -u;
    }
    if (v.determinant() < 0.0) {
        v = -v;
    }
    Mat3 w;
    w << 0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0;
    const Rotation r1 = nearest_rotation(u * w * v.transpose());
    const Rotation r2 = nearest_rotation(u * w.transpose() * v.transpose());
    const Vec3 t = u.col(2).normalized();
    return {RelativePose(r1, t), RelativePose(r1, -t), RelativePose(r2, t), RelativePose(r2, -t)};
}

RelativePose decompose_essential(const Mat3 &e, std::span<const Correspondence> corrs) {
    const auto candidates = essential_factorizations(e);
    std::array<int, 4> counts{};
    for (int k = 0; k < 4; ++k) {
        counts[k] = cheirality_count(candidates[k], corrs, ShutterModel::global);
    }
    int best = 0;
    for (int k = 1; k < 4; ++k) {
        if (counts[k] > counts[best]) {
            best = k;
        }
    }
    if (counts[best] == 0) {
        throw DegenerateInput("decompose_essential: no point in front of both cameras");
    }
    for (int k = 0; k < 4; ++k) {
        if (k != best && counts[k] == counts[best]) {
            throw AmbiguousDecomposition("decompose_essential: cheirality tie between factorizations");
        }
    }
    return candidates[best];
}

} // namespace grsrp
