#include "grsrp/pipeline.h"

#include "grsrp/errors.h"
#include "grsrp/gs_five_point.h"
#include "grsrp/seeding.h"

#include <chrono>

namespace grsrp {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

RansacResult estimate_gsrp(std::span<const Correspondence> corrs, const RansacConfig &config) {
    RansacResult result = ransac(corrs, Rotation::identity(), config, gsrp_minimal_solver(), ShutterModel::global);
    const std::vector<Correspondence> inliers = select(corrs, result.inlier_mask);
    try {
        result.pose = decompose_essential(result.pose.essential(), inliers);
    } catch (const Error &) {
        // Keep the factorization chosen on the minimal sample.
    }
    return result;
}

PipelineResult estimate_pose(std::span<const Correspondence> corrs, const PipelineConfig &config,
                             const EliminationTemplate &tmpl) {
    PipelineResult out;

    auto t0 = std::chrono::steady_clock::now();
    const RansacResult gs = estimate_gsrp(corrs, config.ransac);
    out.gsrp = gs.pose;
    out.gsrp_inliers = gs.inlier_mask;
    out.timings.gsrp_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    RansacConfig rs_config = config.ransac;
    rs_config.seed = mix_seed(config.ransac.seed, 1);
    const RansacResult rs =
        ransac(corrs, gs.pose.rotation, rs_config, grsrp_minimal_solver(tmpl), ShutterModel::linearized);
    const std::vector<Correspondence> inliers = select(corrs, rs.inlier_mask);
    out.grsrp = orient_translation(rs.pose, inliers, ShutterModel::linearized);
    out.grsrp_inliers = rs.inlier_mask;
    out.timings.grsrp_s = seconds_since(t0);

    if (config.refine && inliers.size() >= 5) {
        t0 = std::chrono::steady_clock::now();
        try {
            RefineReport report = refine(inliers, out.grsrp, config.refine_config);
            report.pose = orient_translation(report.pose, inliers, ShutterModel::linearized);
            out.refined = report;
        } catch (const DivergenceDetected &) {
            out.refined.reset();
        }
        out.timings.refine_s = seconds_since(t0);
    }
    return out;
}

} // namespace grsrp
