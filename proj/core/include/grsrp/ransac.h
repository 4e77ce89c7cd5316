#pragma once

#include "grsrp/elimination_template.h"
#include "grsrp/geometry.h"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace grsrp {

struct RansacConfig {
    // Bound on |m_j' E m_i| in normalized image coordinates.
    double inlier_threshold = 0.01;
    int max_iterations = 200;
    std::uint64_t seed = 0;
    int min_sample = 5;

    void validate() const;
};

struct RansacResult {
    RelativePose pose;
    std::vector<bool> inlier_mask;
    int score = 0;
    int iterations_run = 0;
    // Sum of squared residuals over the inliers, used to break score ties.
    double inlier_cost = 0.0;
};

// A minimal solver: five correspondences and the initial rotation in, zero or
// more candidate poses out. May throw grsrp::Error on degenerate samples; the
// sample is then skipped.
using MinimalSolverFn = std::function<std::vector<RelativePose>(std::span<const Correspondence>, const Rotation &)>;

// Called after every iteration with the iteration index and the best score so far.
using RansacTraceFn = std::function<void(int iteration, int best_score)>;

// Gyro-aided rolling-shutter solver on a fixed template.
MinimalSolverFn grsrp_minimal_solver(const EliminationTemplate &tmpl = default_template());

// Global-shutter five-point solver; each essential matrix is decomposed with
// the five sample points. The initial rotation is ignored.
MinimalSolverFn gsrp_minimal_solver();

// Fixed-budget RANSAC. Every candidate of every sample is scored by counting
// |epipolar_residual(candidate, c, scoring_model)| <= threshold. Samples for
// iteration k depend only on (seed, k). Throws InsufficientData with fewer
// than min_sample correspondences and NoValidHypothesis when no sample
// produced a candidate.
RansacResult ransac(std::span<const Correspondence> corrs, const Rotation &r0, const RansacConfig &config,
                    const MinimalSolverFn &solver, ShutterModel scoring_model, const RansacTraceFn &trace = {});

// Inlier mask of `pose` recomputed from scratch.
std::vector<bool> inlier_mask(const RelativePose &pose, std::span<const Correspondence> corrs, double threshold,
                              ShutterModel model);

// Correspondences whose mask entry is set.
std::vector<Correspondence> select(std::span<const Correspondence> corrs, const std::vector<bool> &mask);

} // namespace grsrp
