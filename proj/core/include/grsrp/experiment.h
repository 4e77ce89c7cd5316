#pragma once

#include "grsrp/elimination_template.h"
#include "grsrp/ransac.h"
#include "grsrp/synth.h"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace grsrp {

enum class Protocol { angular, angular_linear, gyro_noise, camera_noise, planar };
enum class Method { gsrp, grsrp, grsrp_plus };

std::string_view protocol_name(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view name);
std::string_view method_name(Method m);

// One sweep level: motion and noise applied to every trial at that level.
struct LevelSpec {
    int index = 1;
    double value = 0.0; // swept quantity in its own unit (rad/s or px)
    MotionConfig motion;
    NoiseConfig noise;
    bool planar = false;
};

//   angular         omega 0.5..2.5 rad/s, no linear velocity
//   angular_linear  omega 0.5..2.5 rad/s with 4..20 m/s
//   gyro_noise      level-5 motion, gyro noise 0.1..0.5 rad/s
//   camera_noise    level-5 motion, pixel noise 1..5 px
//   planar          planar scene, omega 1.5 rad/s, single level
std::vector<LevelSpec> protocol_levels(Protocol p);

struct ExperimentConfig {
    Protocol protocol = Protocol::angular;
    int trials = 100;
    std::uint64_t seed = 0;
    // Threshold and iteration budget; the seed is derived per trial.
    RansacConfig ransac;
    bool refine = true;
    SceneConfig scene;
    // Worker threads; 0 picks the hardware concurrency. Results do not depend
    // on it.
    int threads = 0;
};

struct TrialResult {
    Method method = Method::gsrp;
    bool ok = false;
    double rotation_error = 0.0;    // degrees
    double translation_error = 0.0; // degrees
    int inlier_count = 0;
    double runtime_s = 0.0;
};

struct TrialRecord {
    int level = 0;
    int trial = 0;
    bool generated = false;
    std::string skip_reason;
    std::vector<TrialResult> results;
};

struct SummaryRow {
    std::string protocol;
    int level = 0;
    std::string method;
    std::string metric;
    double mean = 0.0;
    double std = 0.0; // sample standard deviation (n - 1)
    int n = 0;
};

struct ExperimentResult {
    std::vector<TrialRecord> trials;
    std::vector<SummaryRow> summary;
    int skipped = 0;

    // Summary entry lookup; throws std::out_of_range when absent.
    const SummaryRow &row(int level, Method method, std::string_view metric) const;
};

// Noisy inputs of one trial, identical for every method.
struct TrialData {
    PairDataset noisy;
    GroundTruth truth;
};
TrialData make_trial(const ExperimentConfig &config, const LevelSpec &level, int trial);

// Runs GSRP, G-RSRP and (when enabled) G-RSRP+ on the same data.
std::vector<TrialResult> run_methods(const PairDataset &data, const RelativePose &truth, const RansacConfig &ransac,
                                     bool refine, const EliminationTemplate &tmpl = default_template());

// Full sweep. Scene generation failures are recorded as skipped trials.
ExperimentResult run_experiment(const ExperimentConfig &config, const EliminationTemplate &tmpl = default_template());

inline constexpr const char *kCsvHeader = "protocol,level,method,metric,mean,std,n";

// Header line plus one row per summary entry, numbers at 17 significant digits.
std::string to_csv(const std::vector<SummaryRow> &rows);

} // namespace grsrp
