#pragma once

#include "grsrp/dataset.h"
#include "grsrp/geometry.h"
#include "grsrp/rs_system.h"
#include "grsrp/synth.h"

#include <cstdint>
#include <random>
#include <vector>

namespace grsrp::testing {

struct NoiselessScene {
    std::vector<Correspondence> corrs;
    GroundTruth truth;
    SceneConfig config;
};

// Noiseless scene with random velocity directions and the given magnitudes.
inline NoiselessScene make_scene(std::uint64_t seed, ShutterModel model, double omega, double linvel = 0.0,
                                 int n_points = 150) {
    SceneConfig sc;
    sc.seed = seed;
    sc.n_points = n_points;
    const SyntheticScene s = generate_scene(sc, {omega, omega, linvel, linvel}, model);
    return {to_correspondences(s.data), s.truth, sc};
}

inline MinimalProblem first_five(const std::vector<Correspondence> &corrs, const Rotation &r0) {
    MinimalProblem p;
    for (int k = 0; k < kMinimalSampleSize; ++k) {
        p.correspondences[k] = corrs[k];
    }
    p.r0 = r0;
    return p;
}

inline Vec3 random_vec(std::mt19937_64 &rng, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, scale);
    return Vec3(n(rng), n(rng), n(rng));
}

inline Rotation random_rotation(std::mt19937_64 &rng, double max_angle = 3.0) {
    std::uniform_real_distribution<double> u(0.0, max_angle);
    return Rotation::axis_angle(random_vec(rng), u(rng));
}

inline Correspondence random_correspondence(std::mt19937_64 &rng, double w_scale = 1e-4) {
    std::uniform_real_distribution<double> p(-1.0, 1.0);
    std::uniform_real_distribution<double> r(-540.0, 540.0);
    Correspondence c;
    c.obs_i = {{p(rng), p(rng)}, r(rng), random_vec(rng, w_scale)};
    c.obs_j = {{p(rng), p(rng)}, r(rng), random_vec(rng, w_scale)};
    return c;
}

} // namespace grsrp::testing
