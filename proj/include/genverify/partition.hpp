#pragma once

#include "genverify/verifier.hpp"

#include <string>
#include <vector>

namespace gv {

/// One named coordinate of the domain. Latent coordinates (Z) are sliced
/// rather than drawn when rendering proof maps.
struct Axis {
    std::string name;
    Interval range;
    bool latent = false;

    friend bool operator==(const Axis &, const Axis &) = default;
};

/// Uniform grid over a box-shaped domain. Cells are enumerated row-major in
/// axis order, so the last axis varies fastest and cell 0 sits at the
/// domain's lower corner. Neighbouring cells share their boundary values
/// exactly.
class Partition {
public:
    Partition(std::vector<Axis> axes, std::vector<std::size_t> counts);

    const std::vector<Axis> &axes() const noexcept { return _axes; }
    const std::vector<std::size_t> &counts() const noexcept { return _counts; }
    std::size_t dims() const noexcept { return _axes.size(); }
    std::size_t size() const noexcept { return _size; }

    /// count + 1 boundary values of an axis; first and last equal the range.
    const std::vector<double> &boundaries(std::size_t axis) const { return _bounds[axis]; }

    Cell cell(std::size_t flat) const;
    std::vector<Cell> cells() const;

    std::size_t flat_index(const std::vector<std::size_t> &index) const;
    std::vector<std::size_t> grid_index(std::size_t flat) const;

    friend bool operator==(const Partition &a, const Partition &b)
    {
        return a._axes == b._axes && a._counts == b._counts;
    }

private:
    std::vector<Axis> _axes;
    std::vector<std::size_t> _counts;
    std::vector<std::vector<double>> _bounds;
    std::size_t _size = 0;
};

Partition build_partition(std::vector<Axis> domain, std::vector<std::size_t> counts);

/// Parses `name=[lo,hi];name=[lo,hi]`. Axes whose name starts with 'z' are
/// latent. Decimal parsing ignores the locale.
std::vector<Axis> parse_ranges(const std::string &text);

/// Parses `20x20` or `11x11x2`.
std::vector<std::size_t> parse_grid(const std::string &text);

double parse_number(const std::string &text);

} // namespace gv
