#include "grsrp/gs_five_point.h"
#include "grsrp/minimal_solver.h"
#include "grsrp/pipeline.h"
#include "grsrp/refine.h"
#include "grsrp/synth.h"

#include <benchmark/benchmark.h>

#include <random>

namespace {

using namespace grsrp;

struct Fixture {
    std::vector<Correspondence> noiseless;
    std::vector<Correspondence> noisy;
    GroundTruth truth;
};

const Fixture &fixture() {
    static const Fixture f = [] {
        SceneConfig sc;
        sc.seed = 7;
        const SyntheticScene s = generate_scene(sc, {2.5, 2.5, 0.0, 0.0});
        std::mt19937_64 rng(1);
        return Fixture{to_correspondences(s.data), to_correspondences(add_noise(s.data, {}, rng)), s.truth};
    }();
    return f;
}

void BM_GyroMinimalSolver(benchmark::State &state) {
    const Fixture &f = fixture();
    MinimalProblem p;
    for (int k = 0; k < kMinimalSampleSize; ++k) {
        p.correspondences[k] = f.noiseless[k];
    }
    p.r0 = f.truth.rotation;
    default_template();
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve(p));
    }
}
BENCHMARK(BM_GyroMinimalSolver);

void BM_FivePoint(benchmark::State &state) {
    const Fixture &f = fixture();
    const auto problem = GsMinimalProblem::from(std::span(f.noiseless).first(5));
    for (auto _ : state) {
        benchmark::DoNotOptimize(gs_five_point(problem));
    }
}
BENCHMARK(BM_FivePoint);

void BM_Pipeline(benchmark::State &state) {
    const Fixture &f = fixture();
    PipelineConfig cfg;
    cfg.ransac.max_iterations = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_pose(f.noisy, cfg));
    }
}
BENCHMARK(BM_Pipeline)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Refine(benchmark::State &state) {
    const Fixture &f = fixture();
    for (auto _ : state) {
        benchmark::DoNotOptimize(refine(f.noisy, f.truth.pose));
    }
}
BENCHMARK(BM_Refine)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
