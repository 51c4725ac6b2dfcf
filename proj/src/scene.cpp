#include "genverify/scene.hpp"

#include "genverify/error.hpp"
#include "genverify/manifest.hpp"
#include "genverify/partition.hpp"
#include "genverify/pnm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <random>

namespace gv {

namespace {

double unit_uniform(std::mt19937_64 &rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string shortest(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

void validate(const SceneModel &model)
{
    if (model.size < 1)
        throw Error("scene size must be positive");
    if (!(model.lateral_gain > 0.0) || !(model.slope_gain > 0.0))
        throw Error("scene gains must be positive");
    if (!(model.thickness >= 1.0))
        throw Error("line thickness must be at least one pixel");
    if (!(model.threshold > 0.0 && model.threshold <= 1.0))
        throw Error("intensity threshold must lie in (0, 1]");
}

double line_center(const Configuration &cfg, const SceneModel &model, std::size_t row)
{
    const double rows_above_bottom = static_cast<double>(model.size - 1 - row);
    return model.center_column + model.lateral_gain * (cfg.d - model.center_distance)
           + model.slope_gain * cfg.theta * rows_above_bottom;
}

Tensor render_scene(const Configuration &cfg, const SceneModel &model)
{
    validate(model);
    Tensor image({model.size, model.size});
    if (!std::isfinite(cfg.d) || !std::isfinite(cfg.theta))
        return image;
    const double half = 0.5 * model.thickness;
    for (std::size_t r = 0; r < model.size; ++r) {
        const double x = line_center(cfg, model, r);
        for (std::size_t c = 0; c < model.size; ++c) {
            const double left = static_cast<double>(c);
            const double coverage =
                std::max(0.0, std::min(left + 1.0, x + half) - std::max(left, x - half));
            image.at(r, c) = coverage >= model.threshold ? 1.0 : 0.0;
        }
    }
    return image;
}

std::optional<double> line_column(const Tensor &image, std::size_t row)
{
    double sum = 0.0;
    std::size_t lit = 0;
    for (std::size_t c = 0; c < image.shape()[1]; ++c) {
        if (image.at(row, c) >= 0.5) {
            sum += static_cast<double>(c) + 0.5;
            ++lit;
        }
    }
    if (lit == 0)
        return std::nullopt;
    return sum / static_cast<double>(lit);
}

Tensor apply_break(const Tensor &image, const BreakMask &mask)
{
    if (image.rank() != 2)
        throw ShapeError("apply_break needs a rank-2 image");
    if (!(mask.width >= 0.0 && mask.width <= kMaxBreakWidth))
        throw Error("break width must lie in [0, 16]");
    Tensor out = image;
    const double half = 0.5 * mask.width;
    for (std::size_t r = 0; r < image.shape()[0]; ++r)
        for (std::size_t c = 0; c < image.shape()[1]; ++c)
            if (std::abs(static_cast<double>(r + c + 1) - mask.anchor) < half)
                out.at(r, c) = 0.0;
    return out;
}

Tensor render_label(const Label &label, const SceneModel &model, double break_anchor)
{
    Tensor image = render_scene({label.d, label.theta}, model);
    if (label.break_w > 0.0)
        image = apply_break(image, BreakMask{label.break_w, break_anchor});
    return image;
}

std::vector<Label> sample_labels(const DatasetSpec &spec)
{
    if (spec.n < 1)
        throw Error("dataset size must be at least 1");
    if (!(spec.break_prob >= 0.0 && spec.break_prob <= 1.0))
        throw Error("break probability must lie in [0, 1]");
    if (!(spec.d_range.lo <= spec.d_range.hi) || !(spec.theta_range.lo <= spec.theta_range.hi)
        || !(spec.break_width.lo > 0.0 && spec.break_width.lo <= spec.break_width.hi
             && spec.break_width.hi <= kMaxBreakWidth))
        throw Error("invalid dataset ranges");

    std::mt19937_64 rng(spec.seed);
    const auto uniform = [&](const Interval &iv) {
        return std::min(iv.lo + unit_uniform(rng) * iv.width(), iv.hi);
    };
    std::vector<Label> labels;
    labels.reserve(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        Label l;
        l.index = i;
        l.d = uniform(spec.d_range);
        l.theta = uniform(spec.theta_range);
        const bool broken = unit_uniform(rng) < spec.break_prob;
        const double w = uniform(spec.break_width);
        l.break_w = broken ? w : 0.0;
        labels.push_back(l);
    }
    return labels;
}

std::string image_filename(std::size_t index)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "img_%06zu.pgm", index);
    return buf;
}

std::string format_labels_csv(const std::vector<Label> &labels)
{
    std::string out = "index,d,theta,break_w\n";
    for (const auto &l : labels)
        out += std::to_string(l.index) + "," + shortest(l.d) + "," + shortest(l.theta) + ","
               + shortest(l.break_w) + "\n";
    return out;
}

std::vector<Label> parse_labels_csv(const std::string &text)
{
    std::vector<Label> labels;
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string::npos)
            end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (header) {
            if (line != "index,d,theta,break_w")
                throw FormatError("labels header must be 'index,d,theta,break_w'");
            header = false;
            continue;
        }
        std::vector<std::string> cols;
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            cols.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        if (cols.size() != 4)
            throw FormatError("labels row '" + line + "' needs 4 columns");
        Label l;
        try {
            l.index = static_cast<std::size_t>(std::stoull(cols[0]));
            l.d = parse_number(cols[1]);
            l.theta = parse_number(cols[2]);
            l.break_w = parse_number(cols[3]);
        } catch (const std::exception &e) {
            throw FormatError("labels row '" + line + "': " + e.what());
        }
        labels.push_back(l);
    }
    if (header)
        throw FormatError("labels file is empty");
    return labels;
}

std::vector<Label> generate_dataset(const std::filesystem::path &dir, const DatasetSpec &spec,
                                    const SceneModel &model)
{
    validate(model);
    auto labels = sample_labels(spec);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error("cannot create dataset directory '" + dir.string() + "': " + ec.message());
    for (const auto &l : labels)
        write_pgm(dir / image_filename(l.index), render_label(l, model));
    write_file(dir / "labels.csv", format_labels_csv(labels));
    return labels;
}

double ssim(const Tensor &a, const Tensor &b)
{
    constexpr std::size_t win = 8;
    constexpr double c1 = (0.01 * 1.0) * (0.01 * 1.0);
    constexpr double c2 = (0.03 * 1.0) * (0.03 * 1.0);
    if (a.shape() != b.shape())
        throw ShapeError("ssim needs equal shapes, got " + shape_str(a.shape()) + " and "
                         + shape_str(b.shape()));
    if (a.rank() != 2 || a.shape()[0] < win || a.shape()[1] < win)
        throw ShapeError("ssim needs rank-2 images of at least 8x8");

    const double n = static_cast<double>(win * win);
    double total = 0.0;
    std::size_t windows = 0;
    for (std::size_t r = 0; r + win <= a.shape()[0]; ++r) {
        for (std::size_t c = 0; c + win <= a.shape()[1]; ++c) {
            double sa = 0.0, sb = 0.0;
            for (std::size_t y = 0; y < win; ++y)
                for (std::size_t x = 0; x < win; ++x) {
                    sa += a.at(r + y, c + x);
                    sb += b.at(r + y, c + x);
                }
            const double mu_a = sa / n;
            const double mu_b = sb / n;
            double va = 0.0, vb = 0.0, cov = 0.0;
            for (std::size_t y = 0; y < win; ++y)
                for (std::size_t x = 0; x < win; ++x) {
                    const double da = a.at(r + y, c + x) - mu_a;
                    const double db = b.at(r + y, c + x) - mu_b;
                    va += da * da;
                    vb += db * db;
                    cov += da * db;
                }
            va /= n;
            vb /= n;
            cov /= n;
            total += ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2))
                     / ((mu_a * mu_a + mu_b * mu_b + c1) * (va + vb + c2));
            ++windows;
        }
    }
    return total / static_cast<double>(windows);
}

} // namespace gv
