#pragma once

#include "genverify/pnm.hpp"
#include "genverify/proofmap.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace gv {

using Rgb = std::array<std::uint8_t, 3>;

inline constexpr Rgb kSatColor{200, 30, 30};
inline constexpr Rgb kUnknownColor{120, 60, 160};
inline constexpr Rgb kProvedColor{30, 60, 200};

enum class HeatmapMode { Results, Timing };

Rgb result_color(int result);

/// Black -> red -> yellow -> white, t clamped to [0, 1].
Rgb hot_ramp(double t);

/// One image per combination of latent-axis cells. Image rows follow the
/// first configuration axis (row 0 = its lowest cell), columns the second;
/// each cell is drawn as a `scale` x `scale` square. Timing mode normalizes
/// by the largest cell time in the whole map.
struct HeatmapSlice {
    std::string label;              // e.g. "z=[-0.1,0]" or empty for 2D maps
    std::vector<std::size_t> latent; // latent grid coordinates of the slice
    RgbImage image;
};

std::vector<HeatmapSlice> render_heatmap(const ProofMap &map, HeatmapMode mode,
                                         std::size_t scale = 16);

/// Writes every slice; a single slice goes to `out`, several slices to
/// `<stem>_z<k><ext>`. Returns the paths written.
std::vector<std::string> emit_heatmap(const ProofMap &map, HeatmapMode mode,
                                      const std::string &out, std::size_t scale = 16);

} // namespace gv
