#include "grsrp/geometry.h"

#include "grsrp/errors.h"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace grsrp {

namespace {

double clamped_acos_deg(double c) { return std::acos(std::clamp(c, -1.0, 1.0)) * 180.0 / std::numbers::pi; }

} // namespace

Rotation::Rotation(const Mat3 &m) : m_(m) {
    if (!is_rotation(m)) {
        throw std::invalid_argument("Rotation: matrix is not in SO(3)");
    }
}

Rotation::Rotation(const Eigen::Quaterniond &q) : m_(q.normalized().toRotationMatrix()) {}

Rotation Rotation::axis_angle(const Vec3 &axis, double angle_rad) {
    return Rotation(Mat3(Eigen::AngleAxisd(angle_rad, axis.normalized())), Unchecked{});
}

Rotation Rotation::inverse() const { return Rotation(m_.transpose(), Unchecked{}); }

Rotation Rotation::operator*(const Rotation &other) const { return Rotation(m_ * other.m_, Unchecked{}); }

bool Rotation::is_rotation(const Mat3 &m, double tol) {
    if (!m.allFinite()) {
        return false;
    }
    return (m.transpose() * m - Mat3::Identity()).norm() <= tol && std::abs(m.determinant() - 1.0) <= tol;
}

bool NormalizedPoint::is_valid() const {
    return std::isfinite(x) && std::isfinite(y) && std::abs(x) < 10.0 && std::abs(y) < 10.0;
}

RelativePose::RelativePose(const Rotation &r, const Vec3 &t) : rotation(r), translation(t) {
    if (!t.allFinite() || std::abs(t.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("RelativePose: translation must be a finite unit vector");
    }
}

RelativePose RelativePose::inverse() const {
    const Rotation rt = rotation.inverse();
    return RelativePose(rt, -(rt.matrix() * translation));
}

Mat3 RelativePose::essential() const { return skew(translation) * rotation.matrix(); }

Mat3 skew(const Vec3 &v) {
    Mat3 s;
    s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
    return s;
}

Rotation cayley_rotation(const Vec3 &v) {
    const double vv = v.squaredNorm();
    const double k = 1.0 + vv;
    const Mat3 m = ((1.0 - vv) * Mat3::Identity() + 2.0 * skew(v) + 2.0 * v * v.transpose()) / k;
    // Exact up to round-off; re-validation would only reject |v| ~ 1e8.
    return nearest_rotation(m);
}

Mat3 linearized_rotation(const Vec3 &v, double row) { return Mat3::Identity() + skew(row * v); }

Mat3 instant_rotation(const Vec3 &w_scaled, double row, ShutterModel model) {
    switch (model) {
    case ShutterModel::global:
        return Mat3::Identity();
    case ShutterModel::linearized:
        return linearized_rotation(w_scaled, row);
    case ShutterModel::exact:
        return cayley_rotation(0.5 * row * w_scaled).matrix();
    }
    return Mat3::Identity();
}

Mat3 rs_rotation(const Mat3 &a_rot, const Correspondence &corr, ShutterModel model) {
    const Mat3 li = instant_rotation(corr.obs_i.w_scaled, corr.obs_i.row, model);
    const Mat3 lj = instant_rotation(corr.obs_j.w_scaled, corr.obs_j.row, model);
    return lj.transpose() * a_rot * li;
}

Mat3 rs_rotation(const Rotation &a_rot, const Correspondence &corr, ShutterModel model) {
    return rs_rotation(a_rot.matrix(), corr, model);
}

Mat3 rs_essential(const RelativePose &pose, const Correspondence &corr, ShutterModel model) {
    return skew(pose.translation) * rs_rotation(pose.rotation, corr, model);
}

double epipolar_residual(const RelativePose &pose, const Correspondence &corr, ShutterModel model) {
    return corr.obs_j.point.lift().dot(rs_essential(pose, corr, model) * corr.obs_i.point.lift());
}

double rotation_error(const Rotation &gt, const Rotation &est) {
    const double tr = (gt.matrix().transpose() * est.matrix()).trace();
    return clamped_acos_deg((tr - 1.0) / 2.0);
}

double translation_error(const Vec3 &gt, const Vec3 &est) {
    if (std::abs(gt.norm() - 1.0) > 1e-6 || std::abs(est.norm() - 1.0) > 1e-6) {
        throw std::invalid_argument("translation_error: inputs must be unit vectors");
    }
    return clamped_acos_deg(gt.dot(est));
}

Rotation nearest_rotation(const Mat3 &m) {
    if (!m.allFinite()) {
        throw NumericalFailure("nearest_rotation: non-finite input");
    }
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues()(2) < 1e-12) {
        throw NumericalFailure("nearest_rotation: input is (near) singular");
    }
    Mat3 d = Mat3::Identity();
    d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
    const Mat3 r = svd.matrixU() * d * svd.matrixV().transpose();
    return Rotation(r);
}

Vec2 triangulate_depths(const RelativePose &pose, const Correspondence &corr, ShutterModel model) {
    const Vec3 ray_i = rs_rotation(pose.rotation, corr, model) * corr.obs_i.point.lift();
    const Vec3 ray_j = corr.obs_j.point.lift();
    // [ray_i  -ray_j] [d_i d_j]' = -t
    Eigen::Matrix<double, 3, 2> a;
    a.col(0) = ray_i;
    a.col(1) = -ray_j;
    const Eigen::Matrix2d ata = a.transpose() * a;
    const Vec2 atb = -(a.transpose() * pose.translation);
    const double det = ata.determinant();
    if (std::abs(det) < 1e-15 * ata.squaredNorm()) {
        return Vec2::Zero();
    }
    return ata.inverse() * atb;
}

int cheirality_count(const RelativePose &pose, std::span<const Correspondence> corrs, ShutterModel model) {
    int count = 0;
    for (const Correspondence &c : corrs) {
        const Vec2 d = triangulate_depths(pose, c, model);
        if (d(0) > 0.0 && d(1) > 0.0) {
            ++count;
        }
    }
    return count;
}

RelativePose orient_translation(const RelativePose &pose, std::span<const Correspondence> corrs, ShutterModel model) {
    const RelativePose flipped(pose.rotation, -pose.translation);
    return cheirality_count(flipped, corrs, model) > cheirality_count(pose, corrs, model) ? flipped : pose;
}

} // namespace grsrp
