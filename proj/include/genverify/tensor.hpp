#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace gv {

using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape &shape);
std::string shape_str(const Shape &shape);

/// Dense row-major tensor of doubles. Images are rank-2 {rows, cols}, flat
/// vectors are rank-1.
class Tensor {
public:
    Tensor() = default;
    explicit Tensor(Shape shape, double fill = 0.0);
    Tensor(Shape shape, std::vector<double> data);

    static Tensor vector(std::initializer_list<double> values);
    static Tensor vector(std::span<const double> values);

    const Shape &shape() const noexcept { return _shape; }
    std::size_t size() const noexcept { return _data.size(); }
    std::size_t rank() const noexcept { return _shape.size(); }

    std::span<double> data() noexcept { return _data; }
    std::span<const double> data() const noexcept { return _data; }

    double &operator[](std::size_t i) { return _data[i]; }
    double operator[](std::size_t i) const { return _data[i]; }

    double &at(std::size_t row, std::size_t col) { return _data[row * _shape[1] + col]; }
    double at(std::size_t row, std::size_t col) const { return _data[row * _shape[1] + col]; }

    /// Same data viewed under a new shape of equal size.
    Tensor reshaped(Shape shape) const;

    bool all_finite() const noexcept;

    friend bool operator==(const Tensor &, const Tensor &) = default;

private:
    Shape _shape;
    std::vector<double> _data;
};

} // namespace gv
