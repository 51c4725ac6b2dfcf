#include "genverify/interval.hpp"

#include "genverify/error.hpp"

#include <charconv>

namespace gv {

std::string to_string(const Interval &iv)
{
    char buf[64];
    std::string out = "[";
    auto res = std::to_chars(buf, buf + sizeof buf, iv.lo);
    out.append(buf, res.ptr);
    out += ", ";
    res = std::to_chars(buf, buf + sizeof buf, iv.hi);
    out.append(buf, res.ptr);
    return out + "]";
}

IntervalTensor::IntervalTensor(Shape shape, Interval fill)
    : _shape(std::move(shape)), _data(shape_size(_shape), fill)
{
}

IntervalTensor::IntervalTensor(Shape shape, std::vector<Interval> data)
    : _shape(std::move(shape)), _data(std::move(data))
{
    if (_data.size() != shape_size(_shape))
        throw ShapeError("interval tensor data length does not match shape " + shape_str(_shape));
    for (const auto &iv : _data)
        if (!(iv.lo <= iv.hi))
            throw Error("interval with lo > hi: " + to_string(iv));
}

IntervalTensor IntervalTensor::from_point(const Tensor &t)
{
    std::vector<Interval> data;
    data.reserve(t.size());
    for (double v : t.data())
        data.push_back(Interval::point(v));
    return IntervalTensor(t.shape(), std::move(data));
}

IntervalTensor IntervalTensor::from_bounds(const Tensor &lo, const Tensor &hi)
{
    if (lo.shape() != hi.shape())
        throw ShapeError("bound tensors differ in shape");
    std::vector<Interval> data;
    data.reserve(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i)
        data.push_back({lo[i], hi[i]});
    return IntervalTensor(lo.shape(), std::move(data));
}

IntervalTensor IntervalTensor::reshaped(Shape shape) const
{
    return IntervalTensor(std::move(shape), _data);
}

bool IntervalTensor::contains(const Tensor &t) const noexcept
{
    if (t.shape() != _shape)
        return false;
    for (std::size_t i = 0; i < _data.size(); ++i)
        if (!_data[i].contains(t[i]))
            return false;
    return true;
}

bool IntervalTensor::contains(const IntervalTensor &o) const noexcept
{
    if (o._shape != _shape)
        return false;
    for (std::size_t i = 0; i < _data.size(); ++i)
        if (!_data[i].contains(o._data[i]))
            return false;
    return true;
}

} // namespace gv
