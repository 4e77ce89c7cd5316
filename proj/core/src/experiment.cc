#include "grsrp/experiment.h"

#include "grsrp/errors.h"
#include "grsrp/pipeline.h"
#include "grsrp/seeding.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace grsrp {

namespace {

constexpr const char *kMetrics[] = {"rotation_error_deg", "translation_error_deg", "inliers"};

LevelSpec motion_level(int index, double omega, double linvel) {
    LevelSpec s;
    s.index = index;
    s.value = omega;
    s.motion = {omega, omega, linvel, linvel};
    return s;
}

TrialResult measure(Method m, const RelativePose &est, const RelativePose &truth, const std::vector<bool> &mask,
                    double runtime) {
    TrialResult r;
    r.method = m;
    r.ok = true;
    r.rotation_error = rotation_error(truth.rotation, est.rotation);
    r.translation_error = translation_error(truth.translation, est.translation);
    r.inlier_count = static_cast<int>(std::count(mask.begin(), mask.end(), true));
    r.runtime_s = runtime;
    return r;
}

void summarize(const std::vector<double> &v, double &mean, double &sd) {
    mean = 0.0;
    sd = 0.0;
    if (v.empty()) {
        return;
    }
    for (double x : v) {
        mean += x;
    }
    mean /= static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) {
            ss += (x - mean) * (x - mean);
        }
        sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
}

} // namespace

std::string_view protocol_name(Protocol p) {
    switch (p) {
    case Protocol::angular:
        return "angular";
    case Protocol::angular_linear:
        return "angular_linear";
    case Protocol::gyro_noise:
        return "gyro_noise";
    case Protocol::camera_noise:
        return "camera_noise";
    case Protocol::planar:
        return "planar";
    }
    return "unknown";
}

std::optional<Protocol> parse_protocol(std::string_view name) {
    for (Protocol p : {Protocol::angular, Protocol::angular_linear, Protocol::gyro_noise, Protocol::camera_noise,
                       Protocol::planar}) {
        if (protocol_name(p) == name) {
            return p;
        }
    }
    return std::nullopt;
}

std::string_view method_name(Method m) {
    switch (m) {
    case Method::gsrp:
        return "GSRP";
    case Method::grsrp:
        return "G-RSRP";
    case Method::grsrp_plus:
        return "G-RSRP+";
    }
    return "unknown";
}

std::vector<LevelSpec> protocol_levels(Protocol p) {
    std::vector<LevelSpec> levels;
    switch (p) {
    case Protocol::angular:
        for (int k = 1; k <= 5; ++k) {
            levels.push_back(motion_level(k, 0.5 * k, 0.0));
        }
        break;
    case Protocol::angular_linear:
        for (int k = 1; k <= 5; ++k) {
            levels.push_back(motion_level(k, 0.5 * k, 4.0 * k));
        }
        break;
    case Protocol::gyro_noise:
        for (int k = 1; k <= 5; ++k) {
            LevelSpec s = motion_level(k, 2.5, 20.0);
            s.value = 0.1 * k;
            s.noise.gyro_std = 0.1 * k;
            levels.push_back(s);
        }
        break;
    case Protocol::camera_noise:
        for (int k = 1; k <= 5; ++k) {
            LevelSpec s = motion_level(k, 2.5, 20.0);
            s.value = k;
            s.noise.pixel_std = k;
            levels.push_back(s);
        }
        break;
    case Protocol::planar: {
        LevelSpec s = motion_level(1, 1.5, 0.0);
        s.planar = true;
        levels.push_back(s);
        break;
    }
    }
    return levels;
}

const SummaryRow &ExperimentResult::row(int level, Method method, std::string_view metric) const {
    for (const SummaryRow &r : summary) {
        if (r.level == level && r.method == method_name(method) && r.metric == metric) {
            return r;
        }
    }
    throw std::out_of_range("ExperimentResult::row: no such entry");
}

TrialData make_trial(const ExperimentConfig &config, const LevelSpec &level, int trial) {
    const std::uint64_t base =
        mix_seed(config.seed, {static_cast<std::uint64_t>(level.index), static_cast<std::uint64_t>(trial)});
    SceneConfig scene = config.scene;
    scene.seed = mix_seed(base, 0);
    scene.planar = scene.planar || level.planar;
    SyntheticScene s = generate_scene(scene, level.motion, ShutterModel::exact);
    std::mt19937_64 rng(mix_seed(base, 1));
    TrialData out;
    out.noisy = add_noise(s.data, level.noise, rng);
    out.truth = std::move(s.truth);
    return out;
}

std::vector<TrialResult> run_methods(const PairDataset &data, const RelativePose &truth, const RansacConfig &ransac,
                                     bool refine, const EliminationTemplate &tmpl) {
    const std::vector<Correspondence> corrs = to_correspondences(data);
    std::vector<TrialResult> out;
    PipelineConfig pc;
    pc.ransac = ransac;
    pc.refine = refine;
    try {
        const PipelineResult r = estimate_pose(corrs, pc, tmpl);
        out.push_back(measure(Method::gsrp, r.gsrp, truth, r.gsrp_inliers, r.timings.gsrp_s));
        out.push_back(measure(Method::grsrp, r.grsrp, truth, r.grsrp_inliers, r.timings.gsrp_s + r.timings.grsrp_s));
        if (refine) {
            // A diverged refinement falls back to the unrefined pose.
            out.push_back(measure(Method::grsrp_plus, r.best(), truth, r.grsrp_inliers,
                                  r.timings.gsrp_s + r.timings.grsrp_s + r.timings.refine_s));
        }
    } catch (const Error &) {
        out.clear();
        out.push_back({Method::gsrp});
        out.push_back({Method::grsrp});
        if (refine) {
            out.push_back({Method::grsrp_plus});
        }
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig &config, const EliminationTemplate &tmpl) {
    if (config.trials < 1) {
        throw std::invalid_argument("run_experiment: trials must be >= 1");
    }
    config.ransac.validate();
    config.scene.validate();
    const std::vector<LevelSpec> levels = protocol_levels(config.protocol);

    ExperimentResult result;
    result.trials.resize(levels.size() * static_cast<std::size_t>(config.trials));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task = next++; task < result.trials.size(); task = next++) {
            const LevelSpec &level = levels[task / config.trials];
            const int trial = static_cast<int>(task % config.trials);
            TrialRecord &rec = result.trials[task];
            rec.level = level.index;
            rec.trial = trial;
            TrialData data;
            try {
                data = make_trial(config, level, trial);
            } catch (const GenerationFailed &e) {
                rec.skip_reason = e.what();
                continue;
            }
            rec.generated = true;
            RansacConfig rc = config.ransac;
            rc.seed = mix_seed(config.seed, {static_cast<std::uint64_t>(level.index),
                                             static_cast<std::uint64_t>(trial), 2});
            rec.results = run_methods(data.noisy, data.truth.pose, rc, config.refine, tmpl);
        }
    };
    int threads = config.threads > 0 ? config.threads : static_cast<int>(std::thread::hardware_concurrency());
    threads = std::clamp(threads, 1, static_cast<int>(result.trials.size()));
    {
        std::vector<std::jthread> pool;
        for (int k = 1; k < threads; ++k) {
            pool.emplace_back(worker);
        }
        worker();
    }

    std::vector<Method> methods = {Method::gsrp, Method::grsrp};
    if (config.refine) {
        methods.push_back(Method::grsrp_plus);
    }
    for (const LevelSpec &level : levels) {
        for (Method m : methods) {
            std::vector<double> values[3];
            for (const TrialRecord &rec : result.trials) {
                if (rec.level != level.index) {
                    continue;
                }
                for (const TrialResult &r : rec.results) {
                    if (r.method == m && r.ok) {
                        values[0].push_back(r.rotation_error);
                        values[1].push_back(r.translation_error);
                        values[2].push_back(r.inlier_count);
                    }
                }
            }
            for (int k = 0; k < 3; ++k) {
                SummaryRow row;
                row.protocol = protocol_name(config.protocol);
                row.level = level.index;
                row.method = method_name(m);
                row.metric = kMetrics[k];
                summarize(values[k], row.mean, row.std);
                row.n = static_cast<int>(values[k].size());
                result.summary.push_back(row);
            }
        }
    }
    for (const TrialRecord &rec : result.trials) {
        result.skipped += rec.generated ? 0 : 1;
    }
    return result;
}

std::string to_csv(const std::vector<SummaryRow> &rows) {
    std::string out = std::string(kCsvHeader) + "\n";
    char buf[128];
    for (const SummaryRow &r : rows) {
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%d\n", r.mean, r.std, r.n);
        out += r.protocol + "," + std::to_string(r.level) + "," + r.method + "," + r.metric + buf;
    }
    return out;
}

} // namespace grsrp
