#include "grsrp/minimal_solver.h"

#include "grsrp/errors.h"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace grsrp {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EquationCoefficients = std::array<EpipolarCoefficients<double>, kMinimalSampleSize>;

RowMatrix fill_template(const EquationCoefficients &eqs,
                        const EliminationTemplate &tmpl) {
    std::array<std::array<double, kNumEpipolarTerms>, kMinimalSampleSize> coeffs;
    for (int e = 0; e < kMinimalSampleSize; ++e) {
        const auto &ec = eqs[e];
        for (int k = 0; k < 3; ++k) {
            coeffs[e][k] = ec.t[k];
            for (int l = 0; l < 3; ++l) {
                coeffs[e][3 + 3 * k + l] = ec.ta[k][l];
            }
        }
    }
    RowMatrix c = RowMatrix::Zero(tmpl.num_rows(), tmpl.num_cols());
    const auto &rows = tmpl.recipe().rows;
    const auto &cols = tmpl.row_columns();
    for (int r = 0; r < tmpl.num_rows(); ++r) {
        const int eq = rows[r].equation;
        if (eq < kMinimalSampleSize) {
            for (int k = 0; k < kNumEpipolarTerms; ++k) {
                c(r, cols[r][k]) = coeffs[eq][k];
            }
        } else {
            for (int k = 0; k < kNumScaleTerms; ++k) {
                c(r, cols[r][k]) = scale_coefficients()[k];
            }
        }
    }
    return c;
}

// Gaussian elimination with partial pivoting over the excessive and reducible
// columns, then back substitution in the reducible block. Returns false on a
// pivot below tolerance. On success `out` holds X with reducible_k = X(k,:) * basis.
bool reduce_lu(RowMatrix c, const EliminationTemplate &tmpl, double pivot_tol, Eigen::MatrixXd &out) {
    const int n = tmpl.num_rows();
    const int ne = tmpl.num_excessive();
    const int nr = tmpl.num_reducible();
    const int nb = tmpl.num_basis();
    const int width = tmpl.num_cols();
    const double scale = c.rowwise().norm().maxCoeff();
    const double tol = pivot_tol * scale;
    const auto &has_pivot = tmpl.column_has_pivot();

    int cur = 0;
    int first_reducible_row = -1;
    for (int col = 0; col < ne + nr; ++col) {
        if (!has_pivot[col]) {
            continue;
        }
        if (col == ne) {
            first_reducible_row = cur;
        }
        if (cur >= n) {
            return false;
        }
        Eigen::Index best = 0;
        const double mag = c.col(col).segment(cur, n - cur).cwiseAbs().maxCoeff(&best);
        if (!(mag >= tol) || mag == 0.0) {
            return false;
        }
        best += cur;
        if (best != cur) {
            c.row(cur).segment(col, width - col).swap(c.row(best).segment(col, width - col));
        }
        const double inv = 1.0 / c(cur, col);
        for (int r = cur + 1; r < n; ++r) {
            const double f = c(r, col);
            if (f == 0.0) {
                continue;
            }
            c.row(r).segment(col, width - col).noalias() -= (f * inv) * c.row(cur).segment(col, width - col);
        }
        ++cur;
    }
    if (first_reducible_row < 0) {
        first_reducible_row = cur - nr;
    }
    const Eigen::MatrixXd upper = c.block(first_reducible_row, ne, nr, nr);
    const Eigen::MatrixXd rhs = c.block(first_reducible_row, ne + nr, nr, nb);
    out = -upper.triangularView<Eigen::Upper>().solve(rhs);
    return out.allFinite();
}

// Orthogonal route: QR of the excessive block, then least squares on the
// remaining rows for the reducible block.
bool reduce_qr(const RowMatrix &c, const EliminationTemplate &tmpl, Eigen::MatrixXd &out) {
    const int n = tmpl.num_rows();
    const int ne = tmpl.num_excessive();
    const int nr = tmpl.num_reducible();
    const int nb = tmpl.num_basis();
    const int rank_e = ne - static_cast<int>(tmpl.recipe().nonpivot_excessive.size());

    Eigen::MatrixXd rest = c.rightCols(nr + nb);
    if (ne > 0) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_e(c.leftCols(ne));
        rest = qr_e.householderQ().transpose() * rest;
    }
    if (n - rank_e < nr) {
        return false;
    }
    const Eigen::MatrixXd s_r = rest.block(rank_e, 0, n - rank_e, nr);
    const Eigen::MatrixXd s_b = rest.block(rank_e, nr, n - rank_e, nb);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_r(s_r);
    if (qr_r.rank() < nr) {
        return false;
    }
    out = -qr_r.solve(s_b);
    return out.allFinite();
}

Eigen::Matrix<double, 6, 1> system_values(const EquationCoefficients &eqs, const Vec3 &a, const Vec3 &t) {
    Eigen::Matrix<double, 6, 1> f;
    for (int e = 0; e < kMinimalSampleSize; ++e) {
        double v = 0.0;
        for (int k = 0; k < 3; ++k) {
            double row = eqs[e].t[k];
            for (int l = 0; l < 3; ++l) {
                row += eqs[e].ta[k][l] * a(l);
            }
            v += t(k) * row;
        }
        f(e) = v;
    }
    f(5) = t.squaredNorm() - 1.0;
    return f;
}

// Newton steps on a real root; stops as soon as a step fails to reduce the
// residual.
void polish_root(const EquationCoefficients &eqs, Vec3 &a, Vec3 &t, int max_steps) {
    Eigen::Matrix<double, 6, 1> f = system_values(eqs, a, t);
    for (int it = 0; it < max_steps; ++it) {
        Eigen::Matrix<double, 6, 6> jac;
        for (int e = 0; e < kMinimalSampleSize; ++e) {
            for (int l = 0; l < 3; ++l) {
                double d = 0.0;
                for (int k = 0; k < 3; ++k) {
                    d += eqs[e].ta[k][l] * t(k);
                }
                jac(e, l) = d;
            }
            for (int k = 0; k < 3; ++k) {
                double d = eqs[e].t[k];
                for (int l = 0; l < 3; ++l) {
                    d += eqs[e].ta[k][l] * a(l);
                }
                jac(e, 3 + k) = d;
            }
        }
        jac.block<1, 3>(5, 0).setZero();
        jac.block<1, 3>(5, 3) = 2.0 * t.transpose();
        const Eigen::Matrix<double, 6, 1> step = jac.partialPivLu().solve(-f);
        if (!step.allFinite()) {
            return;
        }
        const Vec3 a_new = a + step.head<3>();
        const Vec3 t_new = t + step.tail<3>();
        const Eigen::Matrix<double, 6, 1> f_new = system_values(eqs, a_new, t_new);
        if (!(f_new.norm() < f.norm())) {
            return;
        }
        a = a_new;
        t = t_new;
        f = f_new;
    }
}

} // namespace

std::vector<RelativePose> SolutionSet::poses() const {
    std::vector<RelativePose> out;
    out.reserve(candidates.size());
    for (const auto &c : candidates) {
        out.push_back(c.pose);
    }
    return out;
}

SolutionSet solve(const MinimalProblem &problem, const EliminationTemplate &tmpl, const SolverOptions &options) {
    EquationCoefficients coeffs;
    for (int e = 0; e < kMinimalSampleSize; ++e) {
        coeffs[e] = epipolar_coefficients(problem.correspondences[e], problem.r0.matrix());
    }
    const RowMatrix c = fill_template(coeffs, tmpl);
    if (!c.allFinite()) {
        throw NumericalFailure("solve: non-finite template coefficients");
    }

    SolutionSet out;
    Eigen::MatrixXd reduced;
    bool ok = !options.force_qr && reduce_lu(c, tmpl, options.pivot_tolerance, reduced);
    if (!ok) {
        out.used_qr_fallback = true;
        ok = reduce_qr(c, tmpl, reduced);
    }
    if (!ok) {
        throw NumericalFailure("solve: elimination template is numerically singular");
    }

    const int nb = tmpl.num_basis();
    Eigen::MatrixXd action(nb, nb);
    const auto &amap = tmpl.action_map();
    for (int k = 0; k < nb; ++k) {
        if (amap[k].in_basis) {
            action.row(k).setZero();
            action(k, amap[k].index) = 1.0;
        } else {
            action.row(k) = reduced.row(amap[k].index);
        }
    }

    Eigen::EigenSolver<Eigen::MatrixXd> es(action);
    if (es.info() != Eigen::Success) {
        throw NumericalFailure("solve: eigen decomposition of the action matrix failed");
    }
    const Eigen::VectorXcd values = es.eigenvalues();
    const Eigen::MatrixXcd vectors = es.eigenvectors();

    std::vector<int> order(nb);
    for (int k = 0; k < nb; ++k) {
        order[k] = k;
    }
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        if (values(x).real() != values(y).real()) {
            return values(x).real() < values(y).real();
        }
        return values(x).imag() < values(y).imag();
    });

    const int one = tmpl.basis_index_of_one();
    const Mat3 &r0 = problem.r0.matrix();
    for (int k : order) {
        const Eigen::VectorXcd v = vectors.col(k);
        const std::complex<double> s = v(one);
        if (std::abs(s) < 1e-12 * v.norm()) {
            continue; // root at infinity
        }
        Root root;
        root.eigenvalue = values(k);
        for (int i = 0; i < 3; ++i) {
            root.a(i) = v(tmpl.basis_index_of_unknown(i)) / s;
            root.t(i) = v(tmpl.basis_index_of_unknown(3 + i)) / s;
        }
        if (!root.a.allFinite() || !root.t.allFinite()) {
            continue;
        }
        root.is_real = root.a.imag().cwiseAbs().maxCoeff() < options.imag_tolerance &&
                       root.t.imag().cwiseAbs().maxCoeff() < options.imag_tolerance;
        out.roots.push_back(root);
        if (!root.is_real) {
            continue;
        }
        Vec3 a = root.a.real();
        Vec3 t = root.t.real();
        if (options.newton_steps > 0) {
            polish_root(coeffs, a, t, options.newton_steps);
        }
        if (t.norm() < 1e-12) {
            continue;
        }
        try {
            const Rotation r = nearest_rotation(r0 * (Mat3::Identity() + skew(a)));
            out.candidates.push_back({a, t, RelativePose(r, t.normalized())});
        } catch (const NumericalFailure &) {
            continue;
        }
    }
    if (out.candidates.empty()) {
        throw DegenerateInput("solve: no real solution");
    }
    return out;
}

std::array<std::complex<double>, kMinimalSampleSize + 1> evaluate_system(const PolynomialSystem<double> &sys,
                                                                        const Eigen::Vector3cd &a,
                                                                        const Eigen::Vector3cd &t) {
    const std::array<std::complex<double>, kNumUnknowns> x = {a(0), a(1), a(2), t(0), t(1), t(2)};
    std::array<std::complex<double>, kMinimalSampleSize + 1> out;
    for (int e = 0; e <= kMinimalSampleSize; ++e) {
        std::complex<double> sum = 0.0;
        for (const auto &[mono, coef] : sys.equations[e].terms()) {
            std::complex<double> term = coef;
            for (int v = 0; v < kNumUnknowns; ++v) {
                for (int p = 0; p < mono[v]; ++p) {
                    term *= x[v];
                }
            }
            sum += term;
        }
        out[e] = sum;
    }
    return out;
}

} // namespace grsrp
