#pragma once

#include "grsrp/dataset.h"
#include "grsrp/geometry.h"

#include <cstdint>
#include <random>
#include <vector>

namespace grsrp {

struct SceneConfig {
    int n_points = 150;
    double min_depth_m = 2.0;
    double max_depth_m = 60.0;
    double rot_std_deg = 10.0;
    double trans_std_m = 2.0;
    int image_w = 1920;
    int image_h = 1080;
    double focal_px = 640.0;
    double readout_s_per_row = 60e-6;
    // All points on one plane (degenerate configuration).
    bool planar = false;
    std::uint64_t seed = 0;

    void validate() const;
    Intrinsics intrinsics() const;
};

// Velocity magnitudes per view; directions are drawn uniformly per scene.
struct MotionConfig {
    double omega_mag_i = 0.0; // rad/s
    double omega_mag_j = 0.0;
    double linvel_mag_i = 0.0; // m/s
    double linvel_mag_j = 0.0;
};

struct NoiseConfig {
    double pixel_std = 1.0;
    double gyro_std = 0.1; // rad/s, per axis and view
};

struct GroundTruth {
    RelativePose pose;
    Rotation rotation;
    Vec3 translation = Vec3::Zero(); // metric, before normalization
    Vec3 omega_i = Vec3::Zero();
    Vec3 omega_j = Vec3::Zero();
    Vec3 linvel_i = Vec3::Zero();
    Vec3 linvel_j = Vec3::Zero();
    std::vector<Vec3> points; // world frame = camera i at its middle row
    std::vector<double> rows_i; // pixel rows
    std::vector<double> rows_j;
};

struct SyntheticScene {
    PairDataset data; // noiseless pixels and true gyro readings
    GroundTruth truth;
};

// Camera-frame coordinates of world point X at row offset v from the middle
// row (see RSFrameObservation):
//   view i: L_i(v)^-1 X + v * readout * d_i
//   view j: L_j(v)' (R X) + t + v * readout * d_j
Vec3 camera_point(const Vec3 &x_world, double row_offset, bool view_j, const GroundTruth &truth, double readout,
                  ShutterModel model);

// Pixel of a world point under the rolling-shutter projection at pixel row `row`.
Vec2 project_at_row(const Vec3 &x_world, double row, bool view_j, const GroundTruth &truth,
                    const Intrinsics &intrinsics, double readout, ShutterModel model);

// Solves row = projected_row(row) in pixel rows by v <- (v + row(v)) / 2.
// Returns false when the iteration does not settle to 1e-8 rows within 50
// steps or the point is behind the camera.
bool solve_row(const Vec3 &x_world, bool view_j, const GroundTruth &truth, const Intrinsics &intrinsics,
               double readout, ShutterModel model, double &row_out, Vec2 &pixel_out);

// Random two-view rolling-shutter scene. Throws GenerationFailed when fewer
// than 20 correspondences survive after 10 re-samples of the cameras.
SyntheticScene generate_scene(const SceneConfig &scene, const MotionConfig &motion,
                              ShutterModel model = ShutterModel::exact);

// Gaussian pixel noise on every coordinate and per-axis gyro noise per view.
// Rows follow the noisy pixel y when converted to correspondences.
PairDataset add_noise(const PairDataset &data, const NoiseConfig &noise, std::mt19937_64 &rng);

// Mean absolute row shift of the view-j pixels against a global-shutter
// projection of the same points and pose.
double mean_row_displacement(const SyntheticScene &scene, const SceneConfig &config);

} // namespace grsrp
