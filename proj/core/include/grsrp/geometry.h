#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <span>

namespace grsrp {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Element of SO(3). Construction from a raw matrix validates orthonormality
// and det = +1 to 1e-9; use nearest_rotation() to project arbitrary matrices.
class Rotation {
  public:
    static constexpr double kTolerance = 1e-9;

    Rotation() : m_(Mat3::Identity()) {}
    explicit Rotation(const Mat3 &m);
    explicit Rotation(const Eigen::Quaterniond &q);

    static Rotation identity() { return Rotation(); }
    static Rotation axis_angle(const Vec3 &axis, double angle_rad);

    const Mat3 &matrix() const { return m_; }
    Eigen::Quaterniond quaternion() const { return Eigen::Quaterniond(m_); }
    Rotation inverse() const;
    Rotation operator*(const Rotation &other) const;
    Vec3 operator*(const Vec3 &v) const { return m_ * v; }

    static bool is_rotation(const Mat3 &m, double tol = kTolerance);

  private:
    struct Unchecked {};
    Rotation(const Mat3 &m, Unchecked) : m_(m) {}
    Mat3 m_;
};

struct NormalizedPoint {
    double x = 0.0;
    double y = 0.0;

    Vec3 lift() const { return Vec3(x, y, 1.0); }
    bool is_valid() const;
};

// One view of a correspondence: normalized point, its row offset in pixels
// from the middle row of the image (negative above it) and the scaled angular
// velocity w' = readout * omega, so that row * w' is the instant rotation
// vector in radians. The middle row is the exposure time the pose refers to.
struct RSFrameObservation {
    NormalizedPoint point;
    double row = 0.0;
    Vec3 w_scaled = Vec3::Zero();
};

struct Correspondence {
    RSFrameObservation obs_i;
    RSFrameObservation obs_j;

    // The same correspondence seen from the other camera.
    Correspondence swapped() const { return {obs_j, obs_i}; }
};

// Maps view-i coordinates into view-j coordinates: X_j = R X_i + t, |t| = 1.
struct RelativePose {
    Rotation rotation;
    Vec3 translation = Vec3::UnitX();

    RelativePose() = default;
    RelativePose(const Rotation &r, const Vec3 &t);

    RelativePose inverse() const;
    Mat3 essential() const;
};

// Which rolling-shutter model an operation uses.
//   global:     instant rotations are ignored (classical epipolar geometry)
//   linearized: I + row * skew(w')
//   exact:      cayley_rotation(row * w' / 2), an SO(3) element whose angle is
//               2 atan(|row w'| / 2) ~ |row w'|
enum class ShutterModel { global, linearized, exact };

Mat3 skew(const Vec3 &v);

// Raw Cayley map: ((1 - v'v) I + 2 [v]x + 2 v v') / (1 + v'v).
Rotation cayley_rotation(const Vec3 &v);

// I + row * skew(v). First-order model, not orthonormal in general.
Mat3 linearized_rotation(const Vec3 &v, double row);

// Instant rotation of one view at the given row under `model`.
Mat3 instant_rotation(const Vec3 &w_scaled, double row, ShutterModel model);

// R_{v_i v_j} = L_j' * a_rot * L_i, with L the instant rotation of each view.
Mat3 rs_rotation(const Rotation &a_rot, const Correspondence &corr, ShutterModel model);
Mat3 rs_rotation(const Mat3 &a_rot, const Correspondence &corr, ShutterModel model);

Mat3 rs_essential(const RelativePose &pose, const Correspondence &corr, ShutterModel model);

// Signed algebraic residual m_j' E_{v_i v_j} m_i.
double epipolar_residual(const RelativePose &pose, const Correspondence &corr, ShutterModel model);

// Angular distance in degrees, acos argument clamped to [-1, 1].
double rotation_error(const Rotation &gt, const Rotation &est);

// Angle in degrees between two unit vectors. Throws std::invalid_argument if
// either norm deviates from 1 by more than 1e-6.
double translation_error(const Vec3 &gt, const Vec3 &est);

// Closest rotation in Frobenius norm (SVD with det-sign correction).
// Throws NumericalFailure when the smallest singular value is below 1e-12.
Rotation nearest_rotation(const Mat3 &m);

// Depths (d_i, d_j) solving d_j m_j = d_i R_{v_i v_j} m_i + t in least squares.
Vec2 triangulate_depths(const RelativePose &pose, const Correspondence &corr, ShutterModel model);

// Number of correspondences triangulated in front of both cameras.
int cheirality_count(const RelativePose &pose, std::span<const Correspondence> corrs, ShutterModel model);

// Picks the sign of the translation with the larger cheirality count. Ties
// keep the input sign.
RelativePose orient_translation(const RelativePose &pose, std::span<const Correspondence> corrs, ShutterModel model);

} // namespace grsrp
