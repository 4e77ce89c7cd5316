#pragma once

#include "grsrp/elimination_template.h"
#include "grsrp/ransac.h"
#include "grsrp/refine.h"

#include <optional>
#include <span>
#include <vector>

namespace grsrp {

struct PipelineConfig {
    RansacConfig ransac;
    bool refine = true;
    RefineConfig refine_config;
};

struct StageTimings {
    double gsrp_s = 0.0;
    double grsrp_s = 0.0;
    double refine_s = 0.0;
};

struct PipelineResult {
    // Global-shutter five-point RANSAC; its rotation is R0 for the next stage.
    RelativePose gsrp;
    std::vector<bool> gsrp_inliers;
    // Rolling-shutter RANSAC with the translation sign fixed by cheirality.
    RelativePose grsrp;
    std::vector<bool> grsrp_inliers;
    // Refined pose, present when refinement was requested and succeeded.
    std::optional<RefineReport> refined;
    StageTimings timings;

    const RelativePose &best() const { return refined ? refined->pose : grsrp; }
};

// Global-shutter robust estimate: five-point RANSAC with the global residual,
// then the best essential matrix re-decomposed over its inliers.
RansacResult estimate_gsrp(std::span<const Correspondence> corrs, const RansacConfig &config);

// GSRP -> R0 -> G-RSRP RANSAC -> optional refinement on the inliers. A failed
// refinement (DivergenceDetected) leaves `refined` empty.
PipelineResult estimate_pose(std::span<const Correspondence> corrs, const PipelineConfig &config = {},
                             const EliminationTemplate &tmpl = default_template());

} // namespace grsrp
