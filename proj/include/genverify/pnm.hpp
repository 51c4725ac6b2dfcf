#pragma once

#include "genverify/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace gv {

struct RgbImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> rgb; // height x width x 3

    void set(std::size_t row, std::size_t col, std::uint8_t r, std::uint8_t g, std::uint8_t b)
    {
        auto *p = &rgb[(row * width + col) * 3];
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }

    friend bool operator==(const RgbImage &, const RgbImage &) = default;
};

/// Binary PGM (P5, maxval 255) of a rank-2 tensor with values in [0, 1];
/// values are clamped and rounded to the nearest level.
std::vector<std::uint8_t> encode_pgm(const Tensor &image);
Tensor decode_pgm(std::span<const std::uint8_t> bytes);

/// Binary PPM (P6, maxval 255).
std::vector<std::uint8_t> encode_ppm(const RgbImage &image);

void write_pgm(const std::filesystem::path &path, const Tensor &image);
Tensor read_pgm(const std::filesystem::path &path);
void write_ppm(const std::filesystem::path &path, const RgbImage &image);

} // namespace gv
