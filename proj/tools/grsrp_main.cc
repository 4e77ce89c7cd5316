// grsrp: relative pose of two rolling-shutter frames with gyro data.
//
//   grsrp estimate <dataset.json> [--seed S] [--threshold T] [--iterations N] [--no-refine]
//   grsrp bench --protocol P [--trials N] [--seed S] [--out DIR]
//   grsrp export-synthetic --out FILE [--protocol P] [--level K] [--seed S] [--noiseless]
//
// Exit codes: 0 success, 2 usage or IO error, 3 estimation failure. Errors
// are reported on stderr as {"error": {"type": ..., "message": ...}}.

#include "grsrp/dataset.h"
#include "grsrp/errors.h"
#include "grsrp/experiment.h"
#include "grsrp/pipeline.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitEstimation = 3;

int report_error(const std::string &type, const std::string &message, int code) {
    json err = {{"error", {{"type", type}, {"message", message}}}};
    std::cerr << err.dump() << "\n";
    return code;
}

json pose_json(const grsrp::RelativePose &pose) {
    const Eigen::Quaterniond q = pose.rotation.quaternion();
    const grsrp::Mat3 &m = pose.rotation.matrix();
    json rows = json::array();
    for (int r = 0; r < 3; ++r) {
        rows.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
    }
    return {
        {"rotation", {{"quaternion_wxyz", json::array({q.w(), q.x(), q.y(), q.z()})}, {"matrix", rows}}},
        {"translation", json::array({pose.translation.x(), pose.translation.y(), pose.translation.z()})},
    };
}

int count(const std::vector<bool> &mask) { return static_cast<int>(std::count(mask.begin(), mask.end(), true)); }

struct EstimateArgs {
    std::string dataset;
    std::uint64_t seed = 0;
    double threshold = 0.01;
    int iterations = 200;
    bool no_refine = false;
};

int cmd_estimate(const EstimateArgs &args) {
    grsrp::PairDataset data;
    try {
        data = grsrp::load_dataset(args.dataset);
    } catch (const std::ios_base::failure &e) {
        return report_error("IOError", e.what(), kExitUsage);
    } catch (const grsrp::Error &e) {
        return report_error(e.type_name(), e.what(), kExitUsage);
    }

    grsrp::PipelineConfig config;
    config.ransac.seed = args.seed;
    config.ransac.inlier_threshold = args.threshold;
    config.ransac.max_iterations = args.iterations;
    config.refine = !args.no_refine;
    try {
        config.ransac.validate();
    } catch (const std::invalid_argument &e) {
        return report_error("UsageError", e.what(), kExitUsage);
    }

    grsrp::PipelineResult result;
    try {
        result = grsrp::estimate_pose(grsrp::to_correspondences(data), config);
    } catch (const grsrp::Error &e) {
        return report_error(e.type_name(), e.what(), kExitEstimation);
    }

    const grsrp::RelativePose &best = result.best();
    json out = pose_json(best);
    out["method"] = result.refined ? "G-RSRP+" : "G-RSRP";
    out["inlier_count"] = count(result.grsrp_inliers);
    out["num_correspondences"] = data.correspondences.size();
    out["gsrp"] = pose_json(result.gsrp);
    out["gsrp"]["inlier_count"] = count(result.gsrp_inliers);
    if (result.refined) {
        out["refinement"] = {{"initial_cost", result.refined->initial_cost},
                             {"final_cost", result.refined->final_cost},
                             {"iterations", result.refined->iterations},
                             {"converged", result.refined->converged}};
    }
    out["timings_s"] = {{"gsrp", result.timings.gsrp_s},
                        {"grsrp", result.timings.grsrp_s},
                        {"refine", result.timings.refine_s}};
    if (data.ground_truth) {
        out["error_vs_ground_truth_deg"] = {
            {"rotation", grsrp::rotation_error(data.ground_truth->rotation, best.rotation)},
            {"translation", grsrp::translation_error(data.ground_truth->translation, best.translation)}};
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

struct BenchArgs {
    std::string protocol = "angular";
    int trials = 100;
    std::uint64_t seed = 0;
    std::string out = ".";
    double threshold = 0.01;
    int iterations = 200;
    bool no_refine = false;
    int threads = 0;
};

int cmd_bench(const BenchArgs &args) {
    std::vector<grsrp::Protocol> protocols;
    if (args.protocol == "all") {
        protocols = {grsrp::Protocol::angular, grsrp::Protocol::angular_linear, grsrp::Protocol::gyro_noise,
                     grsrp::Protocol::camera_noise, grsrp::Protocol::planar};
    } else if (auto p = grsrp::parse_protocol(args.protocol)) {
        protocols = {*p};
    } else {
        return report_error("UsageError", "unknown protocol '" + args.protocol + "'", kExitUsage);
    }
    std::error_code ec;
    std::filesystem::create_directories(args.out, ec);
    if (ec) {
        return report_error("IOError", "cannot create '" + args.out + "': " + ec.message(), kExitUsage);
    }

    for (grsrp::Protocol p : protocols) {
        grsrp::ExperimentConfig config;
        config.protocol = p;
        config.trials = args.trials;
        config.seed = args.seed;
        config.ransac.inlier_threshold = args.threshold;
        config.ransac.max_iterations = args.iterations;
        config.refine = !args.no_refine;
        config.threads = args.threads;
        grsrp::ExperimentResult result;
        try {
            result = grsrp::run_experiment(config);
        } catch (const std::invalid_argument &e) {
            return report_error("UsageError", e.what(), kExitUsage);
        } catch (const grsrp::Error &e) {
            return report_error(e.type_name(), e.what(), kExitEstimation);
        }

        const std::filesystem::path path = std::filesystem::path(args.out) / (std::string(grsrp::protocol_name(p)) + ".csv");
        std::ofstream file(path, std::ios::binary);
        file << grsrp::to_csv(result.summary);
        file.close();
        if (!file) {
            return report_error("IOError", "cannot write '" + path.string() + "'", kExitUsage);
        }

        std::printf("%s (%d trials/level, %d skipped) -> %s\n", std::string(grsrp::protocol_name(p)).c_str(),
                    args.trials, result.skipped, path.string().c_str());
        std::printf("  %-5s %-8s %12s %12s %12s %12s\n", "level", "method", "rot mean", "rot std", "trans mean",
                    "trans std");
        for (std::size_t k = 0; k + 2 < result.summary.size(); k += 3) {
            const auto &rot = result.summary[k];
            const auto &tr = result.summary[k + 1];
            std::printf("  %-5d %-8s %12.4f %12.4f %12.4f %12.4f\n", rot.level, rot.method.c_str(), rot.mean, rot.std,
                        tr.mean, tr.std);
        }
    }
    return kExitOk;
}

struct ExportArgs {
    std::string out;
    std::string protocol = "angular";
    int level = 3;
    std::uint64_t seed = 0;
    bool noiseless = false;
};

int cmd_export(const ExportArgs &args) {
    const auto p = grsrp::parse_protocol(args.protocol);
    if (!p) {
        return report_error("UsageError", "unknown protocol '" + args.protocol + "'", kExitUsage);
    }
    const auto levels = grsrp::protocol_levels(*p);
    if (args.level < 1 || args.level > static_cast<int>(levels.size())) {
        return report_error("UsageError", "level out of range for protocol '" + args.protocol + "'", kExitUsage);
    }
    grsrp::LevelSpec level = levels[args.level - 1];
    if (args.noiseless) {
        level.noise = {0.0, 0.0};
    }
    grsrp::ExperimentConfig config;
    config.protocol = *p;
    config.seed = args.seed;
    grsrp::TrialData trial;
    try {
        trial = grsrp::make_trial(config, level, 0);
    } catch (const grsrp::Error &e) {
        return report_error(e.type_name(), e.what(), kExitEstimation);
    }
    // Noise can push a pixel just outside the image; such matches are dropped.
    grsrp::PairDataset data = trial.noisy;
    std::erase_if(data.correspondences, [&](const grsrp::PixelCorrespondence &c) {
        return !data.intrinsics.contains(c.pixel_i) || !data.intrinsics.contains(c.pixel_j);
    });
    try {
        grsrp::save_dataset(data, args.out);
    } catch (const std::ios_base::failure &e) {
        return report_error("IOError", e.what(), kExitUsage);
    }
    std::printf("wrote %zu correspondences to %s\n", data.correspondences.size(), args.out.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Gyro-aided rolling-shutter relative pose estimation"};
    app.require_subcommand(1);

    EstimateArgs est;
    CLI::App *estimate = app.add_subcommand("estimate", "Estimate the relative pose of a dataset file");
    estimate->add_option("dataset", est.dataset, "Dataset JSON file")->required();
    estimate->add_option("--seed", est.seed, "RANSAC seed");
    estimate->add_option("--threshold", est.threshold, "Inlier threshold on |m_j' E m_i|");
    estimate->add_option("--iterations", est.iterations, "RANSAC iterations");
    estimate->add_flag("--no-refine", est.no_refine, "Skip nonlinear refinement");

    BenchArgs bench;
    CLI::App *bench_cmd = app.add_subcommand("bench", "Run a synthetic sweep and write CSV results");
    bench_cmd->add_option("--protocol", bench.protocol,
                          "angular | angular_linear | gyro_noise | camera_noise | planar | all");
    bench_cmd->add_option("--trials", bench.trials, "Trials per level");
    bench_cmd->add_option("--seed", bench.seed, "Base seed");
    bench_cmd->add_option("--out", bench.out, "Output directory");
    bench_cmd->add_option("--threshold", bench.threshold, "Inlier threshold on |m_j' E m_i|");
    bench_cmd->add_option("--iterations", bench.iterations, "RANSAC iterations");
    bench_cmd->add_flag("--no-refine", bench.no_refine, "Skip G-RSRP+");
    bench_cmd->add_option("--threads", bench.threads, "Worker threads (0 = all cores)");

    ExportArgs exp;
    CLI::App *export_cmd = app.add_subcommand("export-synthetic", "Write one synthetic trial as a dataset file");
    export_cmd->add_option("--out", exp.out, "Output JSON file")->required();
    export_cmd->add_option("--protocol", exp.protocol, "Protocol supplying motion and noise");
    export_cmd->add_option("--level", exp.level, "Sweep level (1-based)");
    export_cmd->add_option("--seed", exp.seed, "Seed");
    export_cmd->add_flag("--noiseless", exp.noiseless, "Disable pixel and gyro noise");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        return report_error("UsageError", e.what(), kExitUsage);
    }

    if (estimate->parsed()) {
        return cmd_estimate(est);
    }
    if (bench_cmd->parsed()) {
        return cmd_bench(bench);
    }
    return cmd_export(exp);
}
