#include "genverify/pnm.hpp"

#include "genverify/error.hpp"
#include "genverify/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

namespace gv {

namespace {

void append(std::vector<std::uint8_t> &out, const std::string &text)
{
    out.insert(out.end(), text.begin(), text.end());
}

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::span<const std::uint8_t> bytes, std::size_t &pos)
{
    for (;;) {
        while (pos < bytes.size() && std::isspace(bytes[pos]))
            ++pos;
        if (pos < bytes.size() && bytes[pos] == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n')
                ++pos;
            continue;
        }
        break;
    }
    std::string tok;
    while (pos < bytes.size() && !std::isspace(bytes[pos]))
        tok.push_back(static_cast<char>(bytes[pos++]));
    if (tok.empty())
        throw FormatError("truncated PGM header");
    return tok;
}

std::size_t header_number(std::span<const std::uint8_t> bytes, std::size_t &pos)
{
    const auto tok = header_token(bytes, pos);
    if (!std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(c); }))
        throw FormatError("malformed PGM header value '" + tok + "'");
    return std::stoul(tok);
}

} // namespace

std::vector<std::uint8_t> encode_pgm(const Tensor &image)
{
    if (image.rank() != 2)
        throw ShapeError("PGM needs a rank-2 image, got " + shape_str(image.shape()));
    std::vector<std::uint8_t> out;
    append(out, "P5\n" + std::to_string(image.shape()[1]) + " " + std::to_string(image.shape()[0])
                    + "\n255\n");
    for (double v : image.data()) {
        const double c = std::clamp(std::isfinite(v) ? v : 0.0, 0.0, 1.0);
        out.push_back(static_cast<std::uint8_t>(std::lround(c * 255.0)));
    }
    return out;
}

Tensor decode_pgm(std::span<const std::uint8_t> bytes)
{
    std::size_t pos = 0;
    if (header_token(bytes, pos) != "P5")
        throw FormatError("not a binary PGM (P5) image");
    const auto width = header_number(bytes, pos);
    const auto height = header_number(bytes, pos);
    const auto maxval = header_number(bytes, pos);
    if (width == 0 || height == 0 || maxval == 0 || maxval > 255)
        throw FormatError("unsupported PGM dimensions or maxval");
    ++pos; // single whitespace before the raster
    if (bytes.size() - std::min(pos, bytes.size()) != width * height)
        throw FormatError("PGM raster has wrong length");
    Tensor image({height, width});
    for (std::size_t i = 0; i < width * height; ++i)
        image[i] = static_cast<double>(bytes[pos + i]) / static_cast<double>(maxval);
    return image;
}

std::vector<std::uint8_t> encode_ppm(const RgbImage &image)
{
    if (image.rgb.size() != image.width * image.height * 3)
        throw ShapeError("RGB buffer does not match image size");
    std::vector<std::uint8_t> out;
    append(out, "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height)
                    + "\n255\n");
    out.insert(out.end(), image.rgb.begin(), image.rgb.end());
    return out;
}

void write_pgm(const std::filesystem::path &path, const Tensor &image)
{
    write_file(path, encode_pgm(image));
}

Tensor read_pgm(const std::filesystem::path &path)
{
    try {
        return decode_pgm(read_file_bytes(path));
    } catch (const FormatError &e) {
        throw FormatError("'" + path.string() + "': " + e.what());
    }
}

void write_ppm(const std::filesystem::path &path, const RgbImage &image)
{
    write_file(path, encode_ppm(image));
}

} // namespace gv
