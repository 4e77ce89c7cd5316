#pragma once

#include "grsrp/geometry.h"

#include <Eigen/Core>

#include <span>

namespace grsrp {

struct RefineConfig {
    int max_iterations = 100;
    double gradient_tolerance = 1e-10;
    double step_tolerance = 1e-12;
    double scale_penalty_weight = 1.0;

    void validate() const;
};

struct RefineReport {
    RelativePose pose;
    double initial_cost = 0.0;
    double final_cost = 0.0;
    int iterations = 0;
    bool converged = false;
    // |t| - 1 at the final iterate, before renormalization.
    double scale_slack = 0.0;
};

// Levenberg-Marquardt on the rolling-shutter epipolar residuals of the
// inliers (linearized instant rotations, gyro held fixed) plus the soft scale
// residual sqrt(w) (|t|^2 - 1). Rotation is updated as R <- R exp([theta]x).
// Throws InsufficientData with fewer than five inliers and DivergenceDetected
// when the cost turns non-finite or no damping level yields a decrease.
RefineReport refine(std::span<const Correspondence> inliers, const RelativePose &initial,
                    const RefineConfig &config = {});

// Residual C = m_j' [t]x R_{v_i v_j} m_i and its gradient with respect to the
// rotation increment theta (first three) and t (last three).
struct ResidualJacobian {
    double value = 0.0;
    Eigen::Matrix<double, 1, 6> gradient;
};
ResidualJacobian refine_residual(const Correspondence &corr, const Rotation &rotation, const Vec3 &t);

} // namespace grsrp
