#pragma once

#include "genverify/tensor.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace gv {

inline double next_down(double x) noexcept
{
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

inline double next_up(double x) noexcept
{
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}

/// Closed interval [lo, hi]. Arithmetic helpers round every computed endpoint
/// one ulp outward, so results enclose the exact real result.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static Interval point(double v) noexcept { return {v, v}; }

    double width() const noexcept { return hi - lo; }
    double mid() const noexcept { return lo + 0.5 * (hi - lo); }
    double magnitude() const noexcept { return std::max(std::abs(lo), std::abs(hi)); }
    bool contains(double v) const noexcept { return lo <= v && v <= hi; }
    bool contains(const Interval &o) const noexcept { return lo <= o.lo && o.hi <= hi; }
    bool is_finite() const noexcept { return std::isfinite(lo) && std::isfinite(hi); }

    friend bool operator==(const Interval &, const Interval &) = default;
};

/// [a.lo + b.lo, a.hi + b.hi], rounded outward.
inline Interval add(const Interval &a, const Interval &b) noexcept
{
    return {next_down(a.lo + b.lo), next_up(a.hi + b.hi)};
}

inline Interval sub(const Interval &a, const Interval &b) noexcept
{
    return {next_down(a.lo - b.hi), next_up(a.hi - b.lo)};
}

/// Interval times an exact scalar.
inline Interval scale(const Interval &a, double w) noexcept
{
    if (w == 0.0)
        return {0.0, 0.0};
    if (w > 0.0)
        return {next_down(a.lo * w), next_up(a.hi * w)};
    return {next_down(a.hi * w), next_up(a.lo * w)};
}

std::string to_string(const Interval &iv);

/// Tensor of intervals with the same shape rules as Tensor.
class IntervalTensor {
public:
    IntervalTensor() = default;
    explicit IntervalTensor(Shape shape, Interval fill = {});
    IntervalTensor(Shape shape, std::vector<Interval> data);

    static IntervalTensor from_point(const Tensor &t);
    static IntervalTensor from_bounds(const Tensor &lo, const Tensor &hi);

    const Shape &shape() const noexcept { return _shape; }
    std::size_t size() const noexcept { return _data.size(); }

    Interval &operator[](std::size_t i) { return _data[i]; }
    const Interval &operator[](std::size_t i) const { return _data[i]; }
    Interval &at(std::size_t row, std::size_t col) { return _data[row * _shape[1] + col]; }
    const Interval &at(std::size_t row, std::size_t col) const
    {
        return _data[row * _shape[1] + col];
    }

    std::span<const Interval> data() const noexcept { return _data; }
    std::span<Interval> data() noexcept { return _data; }

    IntervalTensor reshaped(Shape shape) const;

    /// Element-wise membership of a point tensor.
    bool contains(const Tensor &t) const noexcept;
    bool contains(const IntervalTensor &o) const noexcept;

private:
    Shape _shape;
    std::vector<Interval> _data;
};

} // namespace gv
