#include "grsrp/synth.h"

#include "grsrp/errors.h"
#include "grsrp/seeding.h"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace grsrp {

namespace {

constexpr int kMinCorrespondences = 20;
constexpr int kRescueAttempts = 10;
constexpr int kRowIterations = 50;
constexpr double kRowTolerance = 1e-8;

double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

Vec3 random_direction(std::mt19937_64 &rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec3 v;
    do {
        v = Vec3(n(rng), n(rng), n(rng));
    } while (v.norm() < 1e-9);
    return v.normalized();
}

Rotation euler_rotation(double rx, double ry, double rz) {
    return Rotation::axis_angle(Vec3::UnitZ(), rz) * Rotation::axis_angle(Vec3::UnitY(), ry) *
           Rotation::axis_angle(Vec3::UnitX(), rx);
}

// Unit-depth ray through a pixel of camera i.
Vec3 backproject(const Vec2 &px, const Intrinsics &in) { return in.normalize(px).lift(); }

} // namespace

void SceneConfig::validate() const {
    if (n_points < 1 || !(min_depth_m > 0.0) || !(max_depth_m > min_depth_m) || !(rot_std_deg >= 0.0) ||
        !(trans_std_m > 0.0) || image_w < 1 || image_h < 1 || !(focal_px > 0.0) || !(readout_s_per_row > 0.0)) {
        throw std::invalid_argument("SceneConfig: sizes, depths, focal length and readout must be positive");
    }
    if (!(readout_s_per_row * image_h < 0.1)) {
        throw std::invalid_argument("SceneConfig: total readout must stay below 0.1 s");
    }
}

Intrinsics SceneConfig::intrinsics() const {
    Intrinsics in;
    in.focal_px = focal_px;
    in.principal_point_px = Vec2(image_w / 2.0, image_h / 2.0);
    in.width_px = image_w;
    in.height_px = image_h;
    return in;
}

Vec3 camera_point(const Vec3 &x_world, double row, bool view_j, const GroundTruth &truth, double readout,
                  ShutterModel model) {
    // `row` is the offset from the middle row here.
    if (!view_j) {
        const Mat3 l = instant_rotation(readout * truth.omega_i, row, model);
        return l.inverse() * x_world + row * readout * truth.linvel_i;
    }
    const Mat3 l = instant_rotation(readout * truth.omega_j, row, model);
    return l.transpose() * (truth.rotation.matrix() * x_world) + truth.translation + row * readout * truth.linvel_j;
}

Vec2 project_at_row(const Vec3 &x_world, double row, bool view_j, const GroundTruth &truth,
                    const Intrinsics &intrinsics, double readout, ShutterModel model) {
    const Vec3 xc = camera_point(x_world, intrinsics.row_offset(row), view_j, truth, readout, model);
    return intrinsics.to_pixel({xc.x() / xc.z(), xc.y() / xc.z()});
}

bool solve_row(const Vec3 &x_world, bool view_j, const GroundTruth &truth, const Intrinsics &intrinsics,
               double readout, ShutterModel model, double &row_out, Vec2 &pixel_out) {
    double v = intrinsics.reference_row();
    for (int it = 0; it < kRowIterations; ++it) {
        const Vec3 xc = camera_point(x_world, intrinsics.row_offset(v), view_j, truth, readout, model);
        if (!(xc.z() > 0.0)) {
            return false;
        }
        const Vec2 px = intrinsics.to_pixel({xc.x() / xc.z(), xc.y() / xc.z()});
        if (!px.allFinite()) {
            return false;
        }
        if (std::abs(px.y() - v) < kRowTolerance) {
            row_out = px.y();
            pixel_out = project_at_row(x_world, row_out, view_j, truth, intrinsics, readout, model);
            return std::abs(pixel_out.y() - row_out) < 1e-6;
        }
        v = 0.5 * v + 0.5 * px.y();
    }
    return false;
}

SyntheticScene generate_scene(const SceneConfig &scene, const MotionConfig &motion, ShutterModel model) {
    scene.validate();
    if (motion.omega_mag_i < 0.0 || motion.omega_mag_j < 0.0 || motion.linvel_mag_i < 0.0 ||
        motion.linvel_mag_j < 0.0) {
        throw std::invalid_argument("MotionConfig: magnitudes must be non-negative");
    }
    const Intrinsics intr = scene.intrinsics();
    const double readout = scene.readout_s_per_row;

    for (int attempt = 0; attempt <= kRescueAttempts; ++attempt) {
        std::mt19937_64 rng(mix_seed(scene.seed, static_cast<std::uint64_t>(attempt)));
        std::normal_distribution<double> rot(0.0, deg2rad(scene.rot_std_deg));
        std::normal_distribution<double> trans(0.0, scene.trans_std_m);
        std::uniform_real_distribution<double> ux(0.0, scene.image_w);
        std::uniform_real_distribution<double> uy(0.0, scene.image_h);
        std::uniform_real_distribution<double> depth(scene.min_depth_m, scene.max_depth_m);

        // Two world-to-camera poses; camera i then becomes the world frame.
        Rotation cam_rot[2];
        Vec3 cam_trans[2];
        for (int c = 0; c < 2; ++c) {
            const double rx = rot(rng);
            const double ry = rot(rng);
            const double rz = rot(rng);
            cam_rot[c] = euler_rotation(rx, ry, rz);
            const double tx = trans(rng);
            const double ty = trans(rng);
            const double tz = trans(rng);
            cam_trans[c] = Vec3(tx, ty, tz);
        }
        GroundTruth truth;
        truth.rotation = cam_rot[1] * cam_rot[0].inverse();
        truth.translation = cam_trans[1] - truth.rotation * cam_trans[0];
        if (truth.translation.norm() < 1e-6) {
            continue;
        }
        truth.pose = RelativePose(truth.rotation, truth.translation.normalized());
        truth.omega_i = motion.omega_mag_i * random_direction(rng);
        truth.omega_j = motion.omega_mag_j * random_direction(rng);
        truth.linvel_i = motion.linvel_mag_i * random_direction(rng);
        truth.linvel_j = motion.linvel_mag_j * random_direction(rng);

        // Plane through a point on the optical axis, normal tilted from it.
        Vec3 plane_normal = Vec3::UnitZ();
        double plane_offset = 0.0;
        if (scene.planar) {
            std::normal_distribution<double> tilt(0.0, 0.3);
            plane_normal = Vec3(tilt(rng), tilt(rng), 1.0).normalized();
            const double d0 = std::uniform_real_distribution<double>(10.0, 30.0)(rng);
            plane_offset = plane_normal.dot(Vec3(0.0, 0.0, d0));
        }

        SyntheticScene out;
        out.data.intrinsics = intr;
        out.data.readout_s_per_row = readout;
        out.data.gyro_i = truth.omega_i;
        out.data.gyro_j = truth.omega_j;
        out.data.ground_truth = truth.pose;

        const int max_draws = 20 * scene.n_points;
        for (int draw = 0; draw < max_draws && static_cast<int>(truth.points.size()) < scene.n_points; ++draw) {
            const Vec3 ray = backproject(Vec2(ux(rng), uy(rng)), intr);
            double z = depth(rng);
            if (scene.planar) {
                const double denom = plane_normal.dot(ray);
                if (std::abs(denom) < 1e-9) {
                    continue;
                }
                z = plane_offset / denom;
                if (z < scene.min_depth_m || z > scene.max_depth_m) {
                    continue;
                }
            }
            const Vec3 x = z * ray;
            double row_i = 0.0;
            double row_j = 0.0;
            Vec2 px_i;
            Vec2 px_j;
            if (!solve_row(x, false, truth, intr, readout, model, row_i, px_i) ||
                !solve_row(x, true, truth, intr, readout, model, row_j, px_j)) {
                continue;
            }
            if (!intr.contains(px_i) || !intr.contains(px_j)) {
                continue;
            }
            truth.points.push_back(x);
            truth.rows_i.push_back(row_i);
            truth.rows_j.push_back(row_j);
            out.data.correspondences.push_back({px_i, px_j});
        }
        if (static_cast<int>(out.data.correspondences.size()) >= std::min(kMinCorrespondences, scene.n_points)) {
            out.truth = std::move(truth);
            return out;
        }
    }
    throw GenerationFailed("generate_scene: too few visible correspondences after re-sampling");
}

PairDataset add_noise(const PairDataset &data, const NoiseConfig &noise, std::mt19937_64 &rng) {
    if (noise.pixel_std < 0.0 || noise.gyro_std < 0.0) {
        throw std::invalid_argument("NoiseConfig: standard deviations must be non-negative");
    }
    PairDataset out = data;
    if (noise.pixel_std > 0.0) {
        std::normal_distribution<double> n(0.0, noise.pixel_std);
        for (auto &c : out.correspondences) {
            c.pixel_i += Vec2(n(rng), n(rng));
            c.pixel_j += Vec2(n(rng), n(rng));
        }
    }
    if (noise.gyro_std > 0.0) {
        std::normal_distribution<double> n(0.0, noise.gyro_std);
        out.gyro_i += Vec3(n(rng), n(rng), n(rng));
        out.gyro_j += Vec3(n(rng), n(rng), n(rng));
    }
    return out;
}

double mean_row_displacement(const SyntheticScene &scene, const SceneConfig &config) {
    GroundTruth still = scene.truth;
    still.omega_i.setZero();
    still.omega_j.setZero();
    still.linvel_i.setZero();
    still.linvel_j.setZero();
    const Intrinsics intr = config.intrinsics();
    double sum = 0.0;
    const std::size_t n = scene.truth.points.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2 gs = project_at_row(scene.truth.points[k], intr.reference_row(), true, still, intr,
                                       config.readout_s_per_row, ShutterModel::global);
        sum += std::abs(gs.y() - scene.data.correspondences[k].pixel_j.y());
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

} // namespace grsrp
