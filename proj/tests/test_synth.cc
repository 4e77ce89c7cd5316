#include "grsrp/errors.h"
#include "grsrp/synth.h"
#include "test_support.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace grsrp {
namespace {

TEST(Synth, ZeroVelocityMatchesGlobalShutter) {
    SceneConfig sc;
    sc.seed = 4;
    const SyntheticScene s = generate_scene(sc, {});
    const Intrinsics intr = sc.intrinsics();
    ASSERT_EQ(s.truth.points.size(), s.data.correspondences.size());
    for (std::size_t k = 0; k < s.truth.points.size(); ++k) {
        const Vec3 &x = s.truth.points[k];
        const Vec3 xj = s.truth.rotation * x + s.truth.translation;
        const Vec2 pi = intr.to_pixel({x.x() / x.z(), x.y() / x.z()});
        const Vec2 pj = intr.to_pixel({xj.x() / xj.z(), xj.y() / xj.z()});
        EXPECT_LT((pi - s.data.correspondences[k].pixel_i).norm(), 1e-8);
        EXPECT_LT((pj - s.data.correspondences[k].pixel_j).norm(), 1e-8);
    }
    const auto corrs = to_correspondences(s.data);
    for (const auto &c : corrs) {
        EXPECT_LT(std::abs(epipolar_residual(s.truth.pose, c, ShutterModel::global)), 1e-10);
    }
}

TEST(Synth, RowsAreSelfConsistent) {
    for (ShutterModel model : {ShutterModel::exact, ShutterModel::linearized}) {
        SceneConfig sc;
        sc.seed = 9;
        const SyntheticScene s = generate_scene(sc, {2.5, 2.5, 10.0, 10.0}, model);
        const Intrinsics intr = sc.intrinsics();
        for (std::size_t k = 0; k < s.truth.points.size(); ++k) {
            const auto &pc = s.data.correspondences[k];
            EXPECT_NEAR(pc.pixel_i.y(), s.truth.rows_i[k], 1e-6);
            EXPECT_NEAR(pc.pixel_j.y(), s.truth.rows_j[k], 1e-6);
            const Vec2 ri = project_at_row(s.truth.points[k], s.truth.rows_i[k], false, s.truth, intr,
                                           sc.readout_s_per_row, model);
            const Vec2 rj = project_at_row(s.truth.points[k], s.truth.rows_j[k], true, s.truth, intr,
                                           sc.readout_s_per_row, model);
            EXPECT_LT((ri - pc.pixel_i).norm(), 1e-8);
            EXPECT_LT((rj - pc.pixel_j).norm(), 1e-8);
            EXPECT_TRUE(intr.contains(pc.pixel_i));
            EXPECT_TRUE(intr.contains(pc.pixel_j));
        }
    }
}

TEST(Synth, LinearizedScenesSatisfyLinearizedConstraint) {
    const auto scene = testing::make_scene(3, ShutterModel::linearized, 2.5);
    for (const auto &c : scene.corrs) {
        EXPECT_LT(std::abs(epipolar_residual(scene.truth.pose, c, ShutterModel::linearized)), 1e-9);
    }
}

TEST(Synth, FastRotationDisplacesRows) {
    SceneConfig sc;
    sc.seed = 2;
    const SyntheticScene s = generate_scene(sc, {2.5, 2.5, 0.0, 0.0});
    EXPECT_GT(mean_row_displacement(s, sc), 5.0);
    const SyntheticScene still = generate_scene(sc, {});
    EXPECT_LT(mean_row_displacement(still, sc), 1e-9);
}

TEST(Synth, ZeroNoiseIsIdentity) {
    SceneConfig sc;
    sc.seed = 1;
    const SyntheticScene s = generate_scene(sc, {1.0, 1.0, 0.0, 0.0});
    std::mt19937_64 rng(3);
    const PairDataset n = add_noise(s.data, {0.0, 0.0}, rng);
    ASSERT_EQ(n.correspondences.size(), s.data.correspondences.size());
    for (std::size_t k = 0; k < n.correspondences.size(); ++k) {
        EXPECT_EQ(n.correspondences[k].pixel_i, s.data.correspondences[k].pixel_i);
        EXPECT_EQ(n.correspondences[k].pixel_j, s.data.correspondences[k].pixel_j);
    }
    EXPECT_EQ(n.gyro_i, s.data.gyro_i);
    EXPECT_EQ(n.gyro_j, s.data.gyro_j);
}

TEST(Synth, PixelNoiseHasRequestedSpread) {
    PairDataset d;
    d.correspondences.assign(25000, {Vec2(100.0, 200.0), Vec2(300.0, 400.0)});
    std::mt19937_64 rng(17);
    const PairDataset n = add_noise(d, {2.0, 0.0}, rng);
    double sum = 0.0;
    double sq = 0.0;
    int count = 0;
    for (std::size_t k = 0; k < d.correspondences.size(); ++k) {
        const Vec2 a = n.correspondences[k].pixel_i - d.correspondences[k].pixel_i;
        const Vec2 b = n.correspondences[k].pixel_j - d.correspondences[k].pixel_j;
        for (double e : {a.x(), a.y(), b.x(), b.y()}) {
            sum += e;
            sq += e * e;
            ++count;
        }
    }
    ASSERT_EQ(count, 100000);
    const double mean = sum / count;
    const double sd = std::sqrt((sq - count * mean * mean) / (count - 1));
    EXPECT_NEAR(sd, 2.0, 0.02 * 2.0);
    EXPECT_NEAR(mean, 0.0, 0.03);
}

TEST(Synth, GyroNoiseLeavesPixelsUntouched) {
    SceneConfig sc;
    sc.seed = 5;
    const SyntheticScene s = generate_scene(sc, {1.0, 1.0, 0.0, 0.0});
    std::mt19937_64 rng(3);
    const PairDataset n = add_noise(s.data, {0.0, 0.5}, rng);
    for (std::size_t k = 0; k < n.correspondences.size(); ++k) {
        EXPECT_EQ(n.correspondences[k].pixel_i, s.data.correspondences[k].pixel_i);
    }
    EXPECT_GT((n.gyro_i - s.data.gyro_i).norm(), 0.0);
    EXPECT_GT((n.gyro_j - s.data.gyro_j).norm(), 0.0);
}

TEST(Synth, GyroReadingsMatchTruth) {
    SceneConfig sc;
    sc.seed = 6;
    const SyntheticScene s = generate_scene(sc, {1.5, 2.0, 0.0, 0.0});
    EXPECT_EQ(s.data.gyro_i, s.truth.omega_i);
    EXPECT_EQ(s.data.gyro_j, s.truth.omega_j);
    EXPECT_NEAR(s.truth.omega_i.norm(), 1.5, 1e-12);
    EXPECT_NEAR(s.truth.omega_j.norm(), 2.0, 1e-12);
    EXPECT_NEAR(s.truth.pose.translation.norm(), 1.0, 1e-12);
}

TEST(Synth, SolveRowFixedPoint) {
    SceneConfig sc;
    sc.seed = 8;
    const SyntheticScene s = generate_scene(sc, {2.5, 2.5, 10.0, 10.0});
    const Intrinsics intr = sc.intrinsics();
    for (std::size_t k = 0; k < s.truth.points.size(); ++k) {
        double row = 0.0;
        Vec2 px;
        ASSERT_TRUE(solve_row(s.truth.points[k], true, s.truth, intr, sc.readout_s_per_row, ShutterModel::exact, row, px));
        EXPECT_LT(std::abs(px.y() - row), 1e-6);
    }
    double row = 0.0;
    Vec2 px;
    EXPECT_FALSE(solve_row(Vec3(0.0, 0.0, -5.0), false, s.truth, intr, sc.readout_s_per_row, ShutterModel::exact, row,
                           px));
}

TEST(Synth, DeterministicForSeed) {
    SceneConfig sc;
    sc.seed = 12;
    const SyntheticScene a = generate_scene(sc, {2.0, 2.0, 4.0, 4.0});
    const SyntheticScene b = generate_scene(sc, {2.0, 2.0, 4.0, 4.0});
    ASSERT_EQ(a.data.correspondences.size(), b.data.correspondences.size());
    for (std::size_t k = 0; k < a.data.correspondences.size(); ++k) {
        EXPECT_EQ(a.data.correspondences[k].pixel_j, b.data.correspondences[k].pixel_j);
    }
}

TEST(Synth, PlanarScenesArePlanar) {
    SceneConfig sc;
    sc.seed = 3;
    sc.planar = true;
    const SyntheticScene s = generate_scene(sc, {1.5, 1.5, 0.0, 0.0});
    Eigen::MatrixXd a(s.truth.points.size(), 4);
    for (std::size_t k = 0; k < s.truth.points.size(); ++k) {
        a.row(k) << s.truth.points[k].transpose(), 1.0;
    }
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    EXPECT_LT(svd.singularValues()(3) / svd.singularValues()(0), 1e-10);
}

TEST(Synth, UnreachableSceneFails) {
    // Every re-sampled camera pair has a vanishing baseline.
    SceneConfig sc;
    sc.trans_std_m = 1e-12;
    EXPECT_THROW(generate_scene(sc, {}), GenerationFailed);
}

TEST(Synth, ConfigValidation) {
    SceneConfig sc;
    sc.min_depth_m = 0.0;
    EXPECT_THROW(generate_scene(sc, {}), std::invalid_argument);
    sc = {};
    EXPECT_THROW(generate_scene(sc, {-1.0, 0.0, 0.0, 0.0}), std::invalid_argument);
    std::mt19937_64 rng(1);
    EXPECT_THROW(add_noise(PairDataset{}, {-1.0, 0.0}, rng), std::invalid_argument);
}

} // namespace
} // namespace grsrp
