#include "grsrp/ransac.h"

#include "grsrp/errors.h"
#include "grsrp/gs_five_point.h"
#include "grsrp/minimal_solver.h"
#include "grsrp/seeding.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

namespace grsrp {

namespace {

// View-i instant rotations folded into the rays: the residual becomes
// m_j' (t x L_j' R p_i) with p_i = L_i m_i.
struct ScoringRays {
    std::vector<Vec3> p_i;
    std::vector<Mat3> lt_j;
    std::vector<Vec3> m_j;
};

ScoringRays scoring_rays(std::span<const Correspondence> corrs, ShutterModel model) {
    ScoringRays rays;
    rays.p_i.reserve(corrs.size());
    rays.lt_j.reserve(corrs.size());
    rays.m_j.reserve(corrs.size());
    for (const Correspondence &c : corrs) {
        rays.p_i.push_back(instant_rotation(c.obs_i.w_scaled, c.obs_i.row, model) * c.obs_i.point.lift());
        rays.lt_j.push_back(instant_rotation(c.obs_j.w_scaled, c.obs_j.row, model).transpose());
        rays.m_j.push_back(c.obs_j.point.lift());
    }
    return rays;
}

struct Score {
    int count = 0;
    double cost = 0.0;
};

double residual(const RelativePose &pose, const ScoringRays &rays, std::size_t k) {
    return rays.m_j[k].dot(pose.translation.cross(rays.lt_j[k] * (pose.rotation.matrix() * rays.p_i[k])));
}

Score score_pose(const RelativePose &pose, const ScoringRays &rays, double threshold) {
    Score s;
    for (std::size_t k = 0; k < rays.p_i.size(); ++k) {
        const double r = residual(pose, rays, k);
        if (std::abs(r) <= threshold) {
            ++s.count;
            s.cost += r * r;
        }
    }
    return s;
}

} // namespace

void RansacConfig::validate() const {
    if (!(inlier_threshold > 0.0) || max_iterations < 1 || min_sample != 5) {
        throw std::invalid_argument("RansacConfig: threshold > 0, iterations >= 1 and min_sample = 5 are required");
    }
}

MinimalSolverFn grsrp_minimal_solver(const EliminationTemplate &tmpl) {
    return [&tmpl](std::span<const Correspondence> sample, const Rotation &r0) {
        MinimalProblem problem;
        std::copy_n(sample.begin(), kMinimalSampleSize, problem.correspondences.begin());
        problem.r0 = r0;
        return solve(problem, tmpl).poses();
    };
}

MinimalSolverFn gsrp_minimal_solver() {
    return [](std::span<const Correspondence> sample, const Rotation &) {
        std::vector<RelativePose> poses;
        for (const Mat3 &e : gs_five_point(GsMinimalProblem::from(sample))) {
            try {
                poses.push_back(decompose_essential(e, sample));
            } catch (const Error &) {
                // Scoring only sees E up to sign, so any factorization will do.
                poses.push_back(essential_factorizations(e)[0]);
            }
        }
        return poses;
    };
}

RansacResult ransac(std::span<const Correspondence> corrs, const Rotation &r0, const RansacConfig &config,
                    const MinimalSolverFn &solver, ShutterModel scoring_model, const RansacTraceFn &trace) {
    config.validate();
    const int n = static_cast<int>(corrs.size());
    if (n < config.min_sample) {
        throw InsufficientData("ransac: at least five correspondences are required");
    }
    const ScoringRays rays = scoring_rays(corrs, scoring_model);

    bool have_best = false;
    RelativePose best_pose;
    Score best;
    std::vector<int> indices(n);
    std::vector<Correspondence> sample(config.min_sample);
    int iterations = 0;
    for (int it = 0; it < config.max_iterations; ++it) {
        std::mt19937_64 rng(mix_seed(config.seed, static_cast<std::uint64_t>(it)));
        std::iota(indices.begin(), indices.end(), 0);
        // Partial Fisher-Yates: the first min_sample entries are the sample.
        for (int k = 0; k < config.min_sample; ++k) {
            const int j = k + static_cast<int>(rng() % static_cast<std::uint64_t>(n - k));
            std::swap(indices[k], indices[j]);
            sample[k] = corrs[indices[k]];
        }
        ++iterations;
        std::vector<RelativePose> candidates;
        try {
            candidates = solver(sample, r0);
        } catch (const Error &) {
            candidates.clear();
        }
        for (const RelativePose &pose : candidates) {
            const Score s = score_pose(pose, rays, config.inlier_threshold);
            if (!have_best || s.count > best.count || (s.count == best.count && s.cost < best.cost)) {
                have_best = true;
                best = s;
                best_pose = pose;
            }
        }
        if (trace) {
            trace(it, best.count);
        }
    }
    if (!have_best) {
        throw NoValidHypothesis("ransac: no sample produced a candidate pose");
    }
    RansacResult result;
    result.pose = best_pose;
    result.inlier_mask = inlier_mask(best_pose, corrs, config.inlier_threshold, scoring_model);
    result.score = best.count;
    result.iterations_run = iterations;
    result.inlier_cost = best.cost;
    return result;
}

std::vector<bool> inlier_mask(const RelativePose &pose, std::span<const Correspondence> corrs, double threshold,
                              ShutterModel model) {
    const ScoringRays rays = scoring_rays(corrs, model);
    std::vector<bool> mask(corrs.size());
    for (std::size_t k = 0; k < corrs.size(); ++k) {
        mask[k] = std::abs(residual(pose, rays, k)) <= threshold;
    }
    return mask;
}

std::vector<Correspondence> select(std::span<const Correspondence> corrs, const std::vector<bool> &mask) {
    std::vector<Correspondence> out;
    for (std::size_t k = 0; k < corrs.size(); ++k) {
        if (mask[k]) {
            out.push_back(corrs[k]);
        }
    }
    return out;
}

} // namespace grsrp
