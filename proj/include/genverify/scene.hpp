#pragma once

#include "genverify/interval.hpp"
#include "genverify/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gv {

/// Lateral offset d to the lane marker (meters, negative = left of it) and
/// yaw theta (radians).
struct Configuration {
    double d = 0.0;
    double theta = 0.0;
};

/// Affine stand-in for a thresholded forward camera crop. The line centre
/// in row r (0 = top) sits at
///   center_column + lateral_gain * (d - center_distance)
///                 + slope_gain * theta * (size - 1 - r)
/// in pixel units, where pixel j spans [j, j + 1).
struct SceneModel {
    std::size_t size = 16;
    double lateral_gain = 2.5;     // pixels per meter
    double slope_gain = 2.5;       // pixels per radian per row
    double thickness = 2.0;        // pixels
    double threshold = 0.5;        // minimum pixel coverage to light a pixel
    double center_column = 8.0;
    double center_distance = -1.685;
};

void validate(const SceneModel &model);

/// Line centre (continuous column) of row `row` under the model.
double line_center(const Configuration &cfg, const SceneModel &model, std::size_t row);

/// size x size black/white image (values 0 or 1). Lines that leave the frame
/// simply produce dark rows.
Tensor render_scene(const Configuration &cfg, const SceneModel &model = {});

/// Mean column centre (j + 0.5) of the lit pixels of a row, if any are lit.
std::optional<double> line_column(const Tensor &image, std::size_t row);

inline constexpr double kMaxBreakWidth = 16.0;

/// Diagonal band of pixels with |(row + col + 1) - anchor| < width / 2.
struct BreakMask {
    double width = 0.0;
    double anchor = 16.0;
};

Tensor apply_break(const Tensor &image, const BreakMask &mask);

struct Label {
    std::size_t index = 0;
    double d = 0.0;
    double theta = 0.0;
    double break_w = 0.0;
};

/// Image for a label: rendered scene, with the break applied when break_w > 0.
Tensor render_label(const Label &label, const SceneModel &model = {},
                    double break_anchor = BreakMask{}.anchor);

struct DatasetSpec {
    std::size_t n = 10000;
    Interval d_range{-3.0, 0.0};
    Interval theta_range{-0.1, 0.2};
    double break_prob = 0.5;
    Interval break_width{2.0, 8.0};
    std::uint64_t seed = 0x5eed;
};

/// Uniformly sampled labels; deterministic in the seed.
std::vector<Label> sample_labels(const DatasetSpec &spec);

/// Writes img_%06d.pgm files and labels.csv (index,d,theta,break_w) into `dir`.
std::vector<Label> generate_dataset(const std::filesystem::path &dir, const DatasetSpec &spec,
                                    const SceneModel &model = {});

std::string format_labels_csv(const std::vector<Label> &labels);
std::vector<Label> parse_labels_csv(const std::string &text);

std::string image_filename(std::size_t index);

/// Mean SSIM over all 8x8 windows (stride 1) with K1 = 0.01, K2 = 0.03, L = 1.
double ssim(const Tensor &a, const Tensor &b);

} // namespace gv
