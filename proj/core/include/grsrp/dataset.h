#pragma once

#include "grsrp/geometry.h"

#include <optional>
#include <string>
#include <vector>

namespace grsrp {

struct Intrinsics {
    double focal_px = 640.0;
    Vec2 principal_point_px = Vec2(960.0, 540.0);
    int width_px = 1920;
    int height_px = 1080;

    NormalizedPoint normalize(const Vec2 &pixel) const;
    Vec2 to_pixel(const NormalizedPoint &p) const;
    bool contains(const Vec2 &pixel) const;
    // Row whose exposure time defines the frame pose: the middle of the image.
    double reference_row() const { return height_px / 2.0; }
    // Signed row offset of a pixel y-coordinate from reference_row().
    double row_offset(double pixel_y) const { return pixel_y - reference_row(); }
};

struct PixelCorrespondence {
    Vec2 pixel_i;
    Vec2 pixel_j;
};

// Two rolling-shutter frames after calibration: matched pixels and one
// (pre-averaged) gyro reading per frame.
struct PairDataset {
    Intrinsics intrinsics;
    double readout_s_per_row = 60e-6;
    Vec3 gyro_i = Vec3::Zero();
    Vec3 gyro_j = Vec3::Zero();
    std::vector<PixelCorrespondence> correspondences;
    std::optional<RelativePose> ground_truth;

    // Throws ValidationError on fewer than five correspondences, pixels
    // outside the image, non-positive readout or non-finite values.
    void validate() const;
};

inline constexpr const char *kDatasetFormat = "grsrp-pair";
inline constexpr int kDatasetVersion = 1;

// Normalized points, row offsets from pixel y and w' = readout * gyro.
std::vector<Correspondence> to_correspondences(const PairDataset &data);

// JSON (de)serialization. Parsing throws ParseError with the offending field,
// then runs validate().
PairDataset parse_dataset(const std::string &json_text);
std::string serialize_dataset(const PairDataset &data);

// File variants. Missing or unreadable files throw std::ios_base::failure.
PairDataset load_dataset(const std::string &path);
void save_dataset(const PairDataset &data, const std::string &path);

} // namespace grsrp
