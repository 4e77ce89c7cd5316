#include "grsrp/dataset.h"

#include "grsrp/errors.h"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace grsrp {

using nlohmann::json;

namespace {

const json &field(const json &obj, const char *name, const std::string &context) {
    if (!obj.is_object() || !obj.contains(name)) {
        throw ParseError("missing field '" + context + name + "'");
    }
    return obj.at(name);
}

double number(const json &v, const std::string &context) {
    if (!v.is_number()) {
        throw ParseError("field '" + context + "' must be a number");
    }
    return v.get<double>();
}

Vec2 vec2(const json &v, const std::string &context) {
    if (!v.is_array() || v.size() != 2) {
        throw ParseError("field '" + context + "' must be an array of 2 numbers");
    }
    return Vec2(number(v[0], context + "[0]"), number(v[1], context + "[1]"));
}

Vec3 vec3(const json &v, const std::string &context) {
    if (!v.is_array() || v.size() != 3) {
        throw ParseError("field '" + context + "' must be an array of 3 numbers");
    }
    return Vec3(number(v[0], context + "[0]"), number(v[1], context + "[1]"), number(v[2], context + "[2]"));
}

json to_json(const Vec2 &v) { return json::array({v.x(), v.y()}); }
json to_json(const Vec3 &v) { return json::array({v.x(), v.y(), v.z()}); }

} // namespace

NormalizedPoint Intrinsics::normalize(const Vec2 &pixel) const {
    return {(pixel.x() - principal_point_px.x()) / focal_px, (pixel.y() - principal_point_px.y()) / focal_px};
}

Vec2 Intrinsics::to_pixel(const NormalizedPoint &p) const {
    return Vec2(focal_px * p.x + principal_point_px.x(), focal_px * p.y + principal_point_px.y());
}

bool Intrinsics::contains(const Vec2 &pixel) const {
    return pixel.x() >= 0.0 && pixel.x() < width_px && pixel.y() >= 0.0 && pixel.y() < height_px;
}

void PairDataset::validate() const {
    if (!(intrinsics.focal_px > 0.0) || intrinsics.width_px <= 0 || intrinsics.height_px <= 0 ||
        !intrinsics.principal_point_px.allFinite()) {
        throw ValidationError("intrinsics must have positive focal length and image size");
    }
    if (!(readout_s_per_row > 0.0) || !std::isfinite(readout_s_per_row)) {
        throw ValidationError("readout_s_per_row must be positive");
    }
    if (!gyro_i.allFinite() || !gyro_j.allFinite()) {
        throw ValidationError("gyro readings must be finite");
    }
    if (correspondences.size() < 5) {
        throw ValidationError("at least 5 correspondences are required, got " + std::to_string(correspondences.size()));
    }
    for (std::size_t k = 0; k < correspondences.size(); ++k) {
        const auto &c = correspondences[k];
        if (!intrinsics.contains(c.pixel_i) || !intrinsics.contains(c.pixel_j)) {
            throw ValidationError("correspondence " + std::to_string(k) + " lies outside the image");
        }
    }
}

std::vector<Correspondence> to_correspondences(const PairDataset &data) {
    std::vector<Correspondence> out;
    out.reserve(data.correspondences.size());
    const Vec3 wi = data.readout_s_per_row * data.gyro_i;
    const Vec3 wj = data.readout_s_per_row * data.gyro_j;
    for (const auto &c : data.correspondences) {
        Correspondence corr;
        corr.obs_i = {data.intrinsics.normalize(c.pixel_i), data.intrinsics.row_offset(c.pixel_i.y()), wi};
        corr.obs_j = {data.intrinsics.normalize(c.pixel_j), data.intrinsics.row_offset(c.pixel_j.y()), wj};
        out.push_back(corr);
    }
    return out;
}

PairDataset parse_dataset(const std::string &json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    const json &format = field(doc, "format", "");
    if (!format.is_string() || format.get<std::string>() != kDatasetFormat) {
        throw ParseError(std::string("field 'format' must be \"") + kDatasetFormat + "\"");
    }
    const json &version = field(doc, "version", "");
    if (!version.is_number_integer() || version.get<int>() != kDatasetVersion) {
        throw ParseError("unsupported dataset version");
    }

    PairDataset data;
    const json &intr = field(doc, "intrinsics", "");
    data.intrinsics.focal_px = number(field(intr, "focal_px", "intrinsics."), "intrinsics.focal_px");
    data.intrinsics.principal_point_px =
        vec2(field(intr, "principal_point_px", "intrinsics."), "intrinsics.principal_point_px");
    const Vec2 size = vec2(field(intr, "image_size_px", "intrinsics."), "intrinsics.image_size_px");
    if (size.x() != std::floor(size.x()) || size.y() != std::floor(size.y())) {
        throw ParseError("field 'intrinsics.image_size_px' must hold integers");
    }
    data.intrinsics.width_px = static_cast<int>(size.x());
    data.intrinsics.height_px = static_cast<int>(size.y());
    data.readout_s_per_row = number(field(doc, "readout_s_per_row", ""), "readout_s_per_row");
    const json &gyro = field(doc, "gyro_rad_s", "");
    data.gyro_i = vec3(field(gyro, "view_i", "gyro_rad_s."), "gyro_rad_s.view_i");
    data.gyro_j = vec3(field(gyro, "view_j", "gyro_rad_s."), "gyro_rad_s.view_j");

    const json &corrs = field(doc, "correspondences_px", "");
    if (!corrs.is_array()) {
        throw ParseError("field 'correspondences_px' must be an array");
    }
    for (std::size_t k = 0; k < corrs.size(); ++k) {
        const std::string ctx = "correspondences_px[" + std::to_string(k) + "]";
        const json &c = corrs[k];
        if (!c.is_array() || c.size() != 4) {
            throw ParseError("field '" + ctx + "' must be [u_i, v_i, u_j, v_j]");
        }
        data.correspondences.push_back({Vec2(number(c[0], ctx), number(c[1], ctx)),
                                        Vec2(number(c[2], ctx), number(c[3], ctx))});
    }

    if (doc.contains("ground_truth")) {
        const json &gt = doc.at("ground_truth");
        const json &q = field(gt, "rotation_quaternion_wxyz", "ground_truth.");
        if (!q.is_array() || q.size() != 4) {
            throw ParseError("field 'ground_truth.rotation_quaternion_wxyz' must be an array of 4 numbers");
        }
        const Eigen::Quaterniond quat(number(q[0], "ground_truth.rotation_quaternion_wxyz"),
                                      number(q[1], "ground_truth.rotation_quaternion_wxyz"),
                                      number(q[2], "ground_truth.rotation_quaternion_wxyz"),
                                      number(q[3], "ground_truth.rotation_quaternion_wxyz"));
        if (!(quat.norm() > 0.0)) {
            throw ValidationError("ground-truth quaternion must be nonzero");
        }
        const Vec3 t = vec3(field(gt, "translation", "ground_truth."), "ground_truth.translation");
        if (!(t.norm() > 0.0) || !t.allFinite()) {
            throw ValidationError("ground-truth translation must be nonzero");
        }
        data.ground_truth = RelativePose(Rotation(quat), t.normalized());
    }
    data.validate();
    return data;
}

std::string serialize_dataset(const PairDataset &data) {
    json doc;
    doc["format"] = kDatasetFormat;
    doc["version"] = kDatasetVersion;
    doc["intrinsics"] = {
        {"focal_px", data.intrinsics.focal_px},
        {"principal_point_px", to_json(data.intrinsics.principal_point_px)},
        {"image_size_px", json::array({data.intrinsics.width_px, data.intrinsics.height_px})},
    };
    doc["readout_s_per_row"] = data.readout_s_per_row;
    doc["gyro_rad_s"] = {{"view_i", to_json(data.gyro_i)}, {"view_j", to_json(data.gyro_j)}};
    json corrs = json::array();
    for (const auto &c : data.correspondences) {
        corrs.push_back(json::array({c.pixel_i.x(), c.pixel_i.y(), c.pixel_j.x(), c.pixel_j.y()}));
    }
    doc["correspondences_px"] = std::move(corrs);
    if (data.ground_truth) {
        const Eigen::Quaterniond q = data.ground_truth->rotation.quaternion();
        doc["ground_truth"] = {
            {"rotation_quaternion_wxyz", json::array({q.w(), q.x(), q.y(), q.z()})},
            {"translation", to_json(data.ground_truth->translation)},
        };
    }
    return doc.dump(2) + "\n";
}

PairDataset load_dataset(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::ios_base::failure("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str());
}

void save_dataset(const PairDataset &data, const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::ios_base::failure("cannot write '" + path + "'");
    }
    out << serialize_dataset(data);
    if (!out) {
        throw std::ios_base::failure("write to '" + path + "' failed");
    }
}

} // namespace grsrp
