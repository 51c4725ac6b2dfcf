#include "genverify/tensor.hpp"

#include "genverify/error.hpp"

#include <cmath>
#include <functional>
#include <numeric>

namespace gv {

std::size_t shape_size(const Shape &shape)
{
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

std::string shape_str(const Shape &shape)
{
    std::string out;
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i > 0)
            out += "x";
        out += std::to_string(shape[i]);
    }
    return out.empty() ? "scalar" : out;
}

Tensor::Tensor(Shape shape, double fill)
    : _shape(std::move(shape)), _data(shape_size(_shape), fill)
{
    for (auto extent : _shape)
        if (extent == 0)
            throw ShapeError("tensor extents must be positive, got " + shape_str(_shape));
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : _shape(std::move(shape)), _data(std::move(data))
{
    for (auto extent : _shape)
        if (extent == 0)
            throw ShapeError("tensor extents must be positive, got " + shape_str(_shape));
    if (_data.size() != shape_size(_shape))
        throw ShapeError("tensor data length " + std::to_string(_data.size())
                         + " does not match shape " + shape_str(_shape));
}

Tensor Tensor::vector(std::initializer_list<double> values)
{
    return Tensor({values.size()}, std::vector<double>(values));
}

Tensor Tensor::vector(std::span<const double> values)
{
    return Tensor({values.size()}, std::vector<double>(values.begin(), values.end()));
}

Tensor Tensor::reshaped(Shape shape) const
{
    return Tensor(std::move(shape), _data);
}

bool Tensor::all_finite() const noexcept
{
    for (double v : _data)
        if (!std::isfinite(v))
            return false;
    return true;
}

} // namespace gv
