#include "grsrp/errors.h"
#include "grsrp/refine.h"
#include "test_support.h"

#include <gtest/gtest.h>

#include <random>

namespace grsrp {
namespace {

using testing::make_scene;
using testing::random_correspondence;
using testing::random_rotation;
using testing::random_vec;

Rotation right_perturb(const Rotation &r, const Vec3 &theta) {
    const double a = theta.norm();
    return a == 0.0 ? r : r * Rotation::axis_angle(theta / a, a);
}

std::vector<Correspondence> noisy_corrs(std::uint64_t seed, double omega, double pixel_std, GroundTruth &truth) {
    SceneConfig sc;
    sc.seed = seed;
    const SyntheticScene s = generate_scene(sc, {omega, omega, 0.0, 0.0}, ShutterModel::linearized);
    truth = s.truth;
    std::mt19937_64 rng(seed + 100);
    return to_correspondences(add_noise(s.data, {pixel_std, 0.0}, rng));
}

TEST(Refine, AtTruthStaysPut) {
    const auto scene = make_scene(1, ShutterModel::linearized, 2.0);
    const RefineReport r = refine(scene.corrs, scene.truth.pose);
    EXPECT_LE(r.iterations, 2);
    EXPECT_LT(r.final_cost, 1e-20);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(rotation_error(scene.truth.rotation, r.pose.rotation), 1e-6);
    EXPECT_LT(translation_error(scene.truth.pose.translation, r.pose.translation), 1e-6);
}

TEST(Refine, RecoversPerturbedPose) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto scene = make_scene(seed, ShutterModel::linearized, 2.5);
        std::mt19937_64 rng(seed);
        const Vec3 axis = random_vec(rng).normalized();
        const Rotation r0 = scene.truth.rotation * Rotation::axis_angle(axis, 2.0 * EIGEN_PI / 180.0);
        const Vec3 t_axis = scene.truth.pose.translation.cross(random_vec(rng)).normalized();
        const Vec3 t0 = (Eigen::AngleAxisd(5.0 * EIGEN_PI / 180.0, t_axis) * scene.truth.pose.translation).normalized();
        const RefineReport r = refine(scene.corrs, RelativePose(r0, t0));
        EXPECT_LT(rotation_error(scene.truth.rotation, r.pose.rotation), 0.01) << seed;
        EXPECT_LT(translation_error(scene.truth.pose.translation, r.pose.translation), 0.05) << seed;
        EXPECT_LT(std::abs(r.scale_slack), 1e-6) << seed;
        EXPECT_LE(r.final_cost, r.initial_cost);
    }
}

TEST(Refine, JacobianMatchesFiniteDifferences) {
    std::mt19937_64 rng(5);
    const double h = 1e-6;
    for (int k = 0; k < 100; ++k) {
        const Correspondence c = random_correspondence(rng);
        const Rotation r = random_rotation(rng);
        const Vec3 t = random_vec(rng).normalized();
        const ResidualJacobian rj = refine_residual(c, r, t);
        for (int d = 0; d < 6; ++d) {
            Vec3 theta = Vec3::Zero();
            Vec3 dt = Vec3::Zero();
            (d < 3 ? theta : dt)[d % 3] = h;
            const double plus = refine_residual(c, right_perturb(r, theta), t + dt).value;
            const double minus = refine_residual(c, right_perturb(r, -theta), t - dt).value;
            const double fd = (plus - minus) / (2.0 * h);
            EXPECT_NEAR(rj.gradient(d), fd, 1e-6 * std::max(1.0, std::abs(fd))) << k << ' ' << d;
        }
    }
}

TEST(Refine, ResidualMatchesEpipolarResidual) {
    std::mt19937_64 rng(8);
    for (int k = 0; k < 50; ++k) {
        const Correspondence c = random_correspondence(rng);
        const RelativePose p(random_rotation(rng), random_vec(rng).normalized());
        EXPECT_NEAR(refine_residual(c, p.rotation, p.translation).value,
                    epipolar_residual(p, c, ShutterModel::linearized), 1e-12);
    }
}

TEST(Refine, CostNeverIncreasesUnderNoise) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        GroundTruth truth;
        const auto corrs = noisy_corrs(seed, 2.0, 1.0, truth);
        const RefineReport r = refine(corrs, truth.pose);
        EXPECT_LE(r.final_cost, r.initial_cost);
        EXPECT_TRUE(std::isfinite(r.final_cost));
        EXPECT_NEAR(r.pose.translation.norm(), 1.0, 1e-12);
    }
}

TEST(Refine, GaugeSwapOnGlobalShutterData) {
    // Swapping the views and inverting the start pose gives the inverse answer.
    GroundTruth truth;
    const auto corrs = noisy_corrs(11, 0.0, 1.0, truth);
    std::vector<Correspondence> swapped;
    for (const auto &c : corrs) {
        swapped.push_back(c.swapped());
    }
    const RefineReport a = refine(corrs, truth.pose);
    const RefineReport b = refine(swapped, truth.pose.inverse());
    const RelativePose back = b.pose.inverse();
    EXPECT_LT(rotation_error(a.pose.rotation, back.rotation), 1e-3);
    EXPECT_LT(translation_error(a.pose.translation, back.translation), 1e-2);
}

TEST(Refine, TooFewInliers) {
    const auto scene = make_scene(2, ShutterModel::linearized, 1.0, 0.0, 20);
    std::vector<Correspondence> four(scene.corrs.begin(), scene.corrs.begin() + 4);
    EXPECT_THROW(refine(four, scene.truth.pose), InsufficientData);
}

TEST(Refine, ConfigValidation) {
    RefineConfig cfg;
    cfg.max_iterations = 0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.scale_penalty_weight = 0.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

} // namespace
} // namespace grsrp
