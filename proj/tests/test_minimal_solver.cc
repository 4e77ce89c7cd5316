#include "grsrp/errors.h"
#include "grsrp/minimal_solver.h"
#include "grsrp/pipeline.h"
#include "test_support.h"

#include <gtest/gtest.h>

#include <cmath>

namespace grsrp {
namespace {

using testing::first_five;
using testing::make_scene;

bool contains_truth(const SolutionSet &s, const RelativePose &truth, double rot_deg, double trans_deg) {
    for (const Candidate &c : s.candidates) {
        if (rotation_error(truth.rotation, c.pose.rotation) < rot_deg &&
            translation_error(truth.translation, c.pose.translation) < trans_deg) {
            return true;
        }
    }
    return false;
}

TEST(Solve, RecoversLinearizedGroundTruth) {
    int found = 0;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto scene = make_scene(seed, ShutterModel::linearized, 0.5 + 0.05 * seed, 0.0, 20);
        const SolutionSet s = solve(first_five(scene.corrs, scene.truth.rotation));
        found += contains_truth(s, scene.truth.pose, 0.01, 0.05) ? 1 : 0;
    }
    EXPECT_GE(found, 39);
}

TEST(Solve, RealRootsBackSubstitute) {
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
        const auto scene = make_scene(seed, ShutterModel::linearized, 2.0, 0.0, 20);
        const MinimalProblem p = first_five(scene.corrs, scene.truth.rotation);
        const auto sys = build_system(p);
        const double scale = coefficient_norm(sys);
        const SolutionSet s = solve(p);
        ASSERT_FALSE(s.candidates.empty());
        for (const Candidate &c : s.candidates) {
            const auto values = evaluate_system(sys, c.a.cast<std::complex<double>>(), c.t.cast<std::complex<double>>());
            for (const auto &v : values) {
                EXPECT_LT(std::abs(v), 1e-6 * scale);
            }
        }
    }
}

TEST(Solve, TwentyRootsInSignPairs) {
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int trial = 0; trial < 20; ++trial) {
        MinimalProblem p;
        for (auto &c : p.correspondences) {
            c = testing::random_correspondence(rng, 2e-4);
        }
        p.r0 = testing::random_rotation(rng);
        SolutionSet s;
        try {
            s = solve(p);
        } catch (const DegenerateInput &) {
            // Random data may have no real root at all.
            continue;
        }
        ++checked;
        ASSERT_EQ(s.roots.size(), 20u);
        for (const Root &r : s.roots) {
            bool paired = false;
            for (const Root &q : s.roots) {
                const double da = (r.a - q.a).norm() / std::max(1.0, r.a.norm());
                const double dt = (r.t + q.t).norm() / std::max(1.0, r.t.norm());
                // Ill-conditioned roots of random instances agree to ~1e-6 only.
                paired = paired || (da < 1e-5 && dt < 1e-5);
            }
            EXPECT_TRUE(paired) << r.eigenvalue << ' ' << r.a.transpose() << ' ' << r.t.transpose();
        }
        // Real candidates therefore come in antipodal pairs as well.
        EXPECT_EQ(s.candidates.size() % 2, 0u);
    }
    EXPECT_GE(checked, 10);
}

TEST(Solve, CandidatesAreRenormalizedAndReal) {
    const auto scene = make_scene(7, ShutterModel::linearized, 1.5, 0.0, 20);
    const SolutionSet s = solve(first_five(scene.corrs, scene.truth.rotation));
    for (const Root &r : s.roots) {
        if (r.is_real) {
            EXPECT_LT(r.a.imag().cwiseAbs().maxCoeff(), 1e-6);
            EXPECT_LT(r.t.imag().cwiseAbs().maxCoeff(), 1e-6);
        }
    }
    for (const Candidate &c : s.candidates) {
        EXPECT_NEAR(c.pose.translation.norm(), 1.0, 1e-12);
        EXPECT_TRUE(Rotation::is_rotation(c.pose.rotation.matrix()));
    }
}

TEST(Solve, EigenvalueOrderIsDeterministic) {
    const auto scene = make_scene(8, ShutterModel::linearized, 1.0, 0.0, 20);
    const MinimalProblem p = first_five(scene.corrs, scene.truth.rotation);
    const SolutionSet a = solve(p);
    const SolutionSet b = solve(p);
    ASSERT_EQ(a.roots.size(), b.roots.size());
    for (std::size_t k = 0; k < a.roots.size(); ++k) {
        EXPECT_EQ(a.roots[k].eigenvalue, b.roots[k].eigenvalue);
        if (k > 0) {
            const auto &prev = a.roots[k - 1].eigenvalue;
            const auto &cur = a.roots[k].eigenvalue;
            EXPECT_TRUE(prev.real() < cur.real() || (prev.real() == cur.real() && prev.imag() <= cur.imag()));
        }
    }
}

TEST(Solve, HomogeneousRescaleOfPointsIsInvisible) {
    const auto scene = make_scene(9, ShutterModel::linearized, 1.0, 0.0, 20);
    MinimalProblem p = first_five(scene.corrs, scene.truth.rotation);
    const SolutionSet base = solve(p);
    for (auto &c : p.correspondences) {
        // Scale the homogeneous vector, then normalize back.
        const Vec3 h = 3.7 * c.obs_i.point.lift();
        c.obs_i.point = {h.x() / h.z(), h.y() / h.z()};
    }
    const SolutionSet again = solve(p);
    ASSERT_EQ(base.candidates.size(), again.candidates.size());
    for (std::size_t k = 0; k < base.candidates.size(); ++k) {
        EXPECT_LT((base.candidates[k].a - again.candidates[k].a).norm(), 1e-9);
        EXPECT_LT((base.candidates[k].t - again.candidates[k].t).norm(), 1e-9);
    }
}

TEST(Solve, QrFallbackAgreesWithLu) {
    const auto scene = make_scene(10, ShutterModel::linearized, 2.0, 0.0, 20);
    const MinimalProblem p = first_five(scene.corrs, scene.truth.rotation);
    SolverOptions qr;
    qr.force_qr = true;
    const SolutionSet s = solve(p, default_template(), qr);
    EXPECT_TRUE(s.used_qr_fallback);
    EXPECT_TRUE(contains_truth(s, scene.truth.pose, 0.01, 0.05));
}

TEST(Solve, IdenticalCorrespondencesDoNotProduceNaN) {
    const auto scene = make_scene(11, ShutterModel::linearized, 1.0, 0.0, 20);
    MinimalProblem p = first_five(scene.corrs, scene.truth.rotation);
    for (auto &c : p.correspondences) {
        c = p.correspondences[0];
    }
    try {
        const SolutionSet s = solve(p);
        for (const Candidate &c : s.candidates) {
            EXPECT_TRUE(c.pose.rotation.matrix().allFinite());
            EXPECT_TRUE(c.pose.translation.allFinite());
        }
        ADD_FAILURE() << "rank-deficient sample was accepted";
    } catch (const DegenerateInput &) {
    } catch (const NumericalFailure &) {
    }
}

TEST(Solve, ExactModelWithFivePointInitialization) {
    // Noiseless Cayley-model data, R0 from the global-shutter estimate; the
    // linearization is only approximate here, so RANSAC picks the sample.
    for (int k = 0; k < 20; ++k) {
        const auto scene = make_scene(200 + k, ShutterModel::exact, 2.5, 0.0, 150);
        const RansacResult gs = estimate_gsrp(scene.corrs, RansacConfig{});
        const RansacResult rs =
            ransac(scene.corrs, gs.pose.rotation, RansacConfig{}, grsrp_minimal_solver(), ShutterModel::linearized);
        const RelativePose p = orient_translation(rs.pose, scene.corrs, ShutterModel::linearized);
        EXPECT_LT(rotation_error(scene.truth.rotation, p.rotation), 1.0) << k;
        EXPECT_LT(translation_error(scene.truth.pose.translation, p.translation), 5.0) << k;
        EXPECT_LT(rotation_error(scene.truth.rotation, p.rotation), rotation_error(scene.truth.rotation, gs.pose.rotation))
            << k;
    }
}

} // namespace
} // namespace grsrp
