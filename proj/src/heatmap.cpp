#include "genverify/heatmap.hpp"

#include "genverify/error.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

namespace gv {

Rgb result_color(int result)
{
    switch (verdict_from_code(result)) {
    case Verdict::Counterexample: return kSatColor;
    case Verdict::Unknown: return kUnknownColor;
    case Verdict::Proved: return kProvedColor;
    }
    return kUnknownColor;
}

Rgb hot_ramp(double t)
{
    t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
    const auto channel = [](double v) {
        return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
    };
    return {channel(3.0 * t), channel(3.0 * t - 1.0), channel(3.0 * t - 2.0)};
}

std::vector<HeatmapSlice> render_heatmap(const ProofMap &map, HeatmapMode mode, std::size_t scale)
{
    const auto &p = map.partition;
    if (scale < 1)
        throw Error("heatmap scale must be at least 1");
    if (map.entries.size() != p.size())
        throw Error("proof map is incomplete");

    std::vector<std::size_t> config_axes;
    std::vector<std::size_t> latent_axes;
    for (std::size_t a = 0; a < p.dims(); ++a)
        (p.axes()[a].latent ? latent_axes : config_axes).push_back(a);
    if (config_axes.empty() || config_axes.size() > 2)
        throw Error("heatmaps need one or two configuration axes, map has "
                    + std::to_string(config_axes.size()));

    const std::size_t row_axis = config_axes[0];
    const std::size_t rows = p.counts()[row_axis];
    const std::size_t cols = config_axes.size() == 2 ? p.counts()[config_axes[1]] : 1;

    double max_time = 0.0;
    for (const auto &e : map.entries)
        max_time = std::max(max_time, e.time_s);

    std::size_t slices = 1;
    for (auto a : latent_axes)
        slices *= p.counts()[a];

    std::vector<HeatmapSlice> out;
    for (std::size_t s = 0; s < slices; ++s) {
        HeatmapSlice slice;
        slice.latent.resize(latent_axes.size());
        std::size_t rem = s;
        for (std::size_t k = latent_axes.size(); k-- > 0;) {
            slice.latent[k] = rem % p.counts()[latent_axes[k]];
            rem /= p.counts()[latent_axes[k]];
        }
        for (std::size_t k = 0; k < latent_axes.size(); ++k) {
            const auto &b = p.boundaries(latent_axes[k]);
            if (k)
                slice.label += ";";
            slice.label += p.axes()[latent_axes[k]].name + "="
                           + to_string(Interval{b[slice.latent[k]], b[slice.latent[k] + 1]});
        }

        slice.image.width = cols * scale;
        slice.image.height = rows * scale;
        slice.image.rgb.assign(slice.image.width * slice.image.height * 3, 0);

        std::vector<std::size_t> index(p.dims());
        for (std::size_t k = 0; k < latent_axes.size(); ++k)
            index[latent_axes[k]] = slice.latent[k];
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                index[row_axis] = r;
                if (config_axes.size() == 2)
                    index[config_axes[1]] = c;
                const CellEntry &e = map.at(index);
                const Rgb color = mode == HeatmapMode::Results
                                      ? result_color(e.result)
                                      : hot_ramp(max_time > 0.0 ? e.time_s / max_time : 0.0);
                for (std::size_t y = 0; y < scale; ++y)
                    for (std::size_t x = 0; x < scale; ++x)
                        slice.image.set(r * scale + y, c * scale + x, color[0], color[1], color[2]);
            }
        }
        out.push_back(std::move(slice));
    }
    return out;
}

std::vector<std::string> emit_heatmap(const ProofMap &map, HeatmapMode mode,
                                      const std::string &out, std::size_t scale)
{
    const auto slices = render_heatmap(map, mode, scale);
    std::vector<std::string> written;
    const std::filesystem::path base(out);
    for (std::size_t s = 0; s < slices.size(); ++s) {
        std::filesystem::path path = base;
        if (slices.size() > 1) {
            path = base.parent_path()
                   / (base.stem().string() + "_z" + std::to_string(s) + base.extension().string());
        }
        write_ppm(path, slices[s].image);
        written.push_back(path.string());
    }
    return written;
}

} // namespace gv
