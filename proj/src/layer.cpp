#include "genverify/layer.hpp"

#include "genverify/error.hpp"

#include <algorithm>
#include <cmath>

namespace gv {

namespace {

template <class... Ts> struct Overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> Overloaded(Ts...) -> Overloaded<Ts...>;

void require_image(const Shape &in, const char *kind)
{
    if (in.size() != 2)
        throw ShapeError(std::string(kind) + " expects a rank-2 image, got " + shape_str(in));
}

std::size_t strided_extent(std::size_t span, std::size_t window, std::size_t stride,
                           const char *kind)
{
    if (stride == 0 || window == 0)
        throw ShapeError(std::string(kind) + " requires positive window and stride");
    if (span < window)
        throw ShapeError(std::string(kind) + " window " + std::to_string(window)
                         + " exceeds input extent " + std::to_string(span));
    if ((span - window) % stride != 0)
        throw ShapeError(std::string(kind) + " extent " + std::to_string(span)
                         + " is not reachable with window " + std::to_string(window)
                         + " and stride " + std::to_string(stride));
    return (span - window) / stride + 1;
}

} // namespace

std::string layer_kind(const Layer &layer)
{
    return std::visit(Overloaded{
                          [](const Dense &) { return std::string("dense"); },
                          [](const Conv2D &) { return std::string("conv2d"); },
                          [](const TransposedConv2D &) { return std::string("tconv2d"); },
                          [](const AvgPool2D &) { return std::string("avgpool2d"); },
                          [](const Activation &) { return std::string("activation"); },
                          [](const Reshape &) { return std::string("reshape"); },
                      },
                      layer);
}

std::string activation_name(ActivationFn fn)
{
    switch (fn) {
    case ActivationFn::ReLU: return "relu";
    case ActivationFn::Tanh: return "tanh";
    case ActivationFn::Sigmoid: return "sigmoid";
    }
    return "?";
}

ActivationFn parse_activation(const std::string &name)
{
    if (name == "relu")
        return ActivationFn::ReLU;
    if (name == "tanh")
        return ActivationFn::Tanh;
    if (name == "sigmoid")
        return ActivationFn::Sigmoid;
    throw FormatError("unknown activation '" + name + "'");
}

std::size_t parameter_count(const Layer &layer)
{
    return std::visit(Overloaded{
                          [](const Dense &l) { return l.in * l.out + l.out; },
                          [](const Conv2D &l) { return l.kernel * l.kernel + 1; },
                          [](const TransposedConv2D &l) { return l.kernel * l.kernel + 1; },
                          [](const auto &) { return std::size_t{0}; },
                      },
                      layer);
}

bool is_affine(const Layer &layer)
{
    return !std::holds_alternative<Activation>(layer);
}

Shape output_shape(const Layer &layer, const Shape &in)
{
    return std::visit(
        Overloaded{
            [&](const Dense &l) -> Shape {
                if (l.weights.size() != l.in * l.out || l.bias.size() != l.out)
                    throw ShapeError("dense parameter arrays do not match " + std::to_string(l.out)
                                     + "x" + std::to_string(l.in));
                if (shape_size(in) != l.in)
                    throw ShapeError("dense expects " + std::to_string(l.in) + " inputs, got "
                                     + shape_str(in));
                return {l.out};
            },
            [&](const Conv2D &l) -> Shape {
                require_image(in, "conv2d");
                if (l.weights.size() != l.kernel * l.kernel)
                    throw ShapeError("conv2d kernel array has wrong length");
                return {strided_extent(in[0] + 2 * l.padding, l.kernel, l.stride, "conv2d"),
                        strided_extent(in[1] + 2 * l.padding, l.kernel, l.stride, "conv2d")};
            },
            [&](const TransposedConv2D &l) -> Shape {
                require_image(in, "tconv2d");
                if (l.kernel == 0 || l.stride == 0)
                    throw ShapeError("tconv2d requires positive kernel and stride");
                if (l.weights.size() != l.kernel * l.kernel)
                    throw ShapeError("tconv2d kernel array has wrong length");
                return {(in[0] - 1) * l.stride + l.kernel, (in[1] - 1) * l.stride + l.kernel};
            },
            [&](const AvgPool2D &l) -> Shape {
                require_image(in, "avgpool2d");
                return {strided_extent(in[0], l.window, l.stride, "avgpool2d"),
                        strided_extent(in[1], l.window, l.stride, "avgpool2d")};
            },
            [&](const Activation &) -> Shape { return in; },
            [&](const Reshape &l) -> Shape {
                if (l.target.empty() || shape_size(l.target) != shape_size(in))
                    throw ShapeError("cannot reshape " + shape_str(in) + " to "
                                     + shape_str(l.target));
                for (auto e : l.target)
                    if (e == 0)
                        throw ShapeError("reshape target has a zero extent");
                return l.target;
            },
        },
        layer);
}

double sigmoid(double x) noexcept
{
    return 1.0 / (1.0 + std::exp(-x));
}

double activate(ActivationFn fn, double x) noexcept
{
    switch (fn) {
    case ActivationFn::ReLU: return x > 0.0 ? x : 0.0;
    case ActivationFn::Tanh: return std::tanh(x);
    case ActivationFn::Sigmoid: return sigmoid(x);
    }
    return x;
}

Tensor apply_layer(const Layer &layer, const Tensor &x)
{
    const Shape out_shape = output_shape(layer, x.shape());
    return std::visit(
        Overloaded{
            [&](const Dense &l) {
                Tensor y(out_shape);
                for (std::size_t o = 0; o < l.out; ++o) {
                    double acc = l.bias[o];
                    for (std::size_t i = 0; i < l.in; ++i)
                        acc += l.w(o, i) * x[i];
                    y[o] = acc;
                }
                return y;
            },
            [&](const Conv2D &l) {
                Tensor y(out_shape);
                const auto rows = static_cast<long>(x.shape()[0]);
                const auto cols = static_cast<long>(x.shape()[1]);
                const auto pad = static_cast<long>(l.padding);
                for (std::size_t r = 0; r < out_shape[0]; ++r) {
                    for (std::size_t c = 0; c < out_shape[1]; ++c) {
                        double acc = l.bias;
                        for (std::size_t a = 0; a < l.kernel; ++a) {
                            const long src_r = static_cast<long>(r * l.stride + a) - pad;
                            if (src_r < 0 || src_r >= rows)
                                continue;
                            for (std::size_t b = 0; b < l.kernel; ++b) {
                                const long src_c = static_cast<long>(c * l.stride + b) - pad;
                                if (src_c < 0 || src_c >= cols)
                                    continue;
                                acc += l.weights[a * l.kernel + b]
                                       * x.at(static_cast<std::size_t>(src_r),
                                              static_cast<std::size_t>(src_c));
                            }
                        }
                        y.at(r, c) = acc;
                    }
                }
                return y;
            },
            [&](const TransposedConv2D &l) {
                Tensor y(out_shape, l.bias);
                for (std::size_t r = 0; r < x.shape()[0]; ++r)
                    for (std::size_t c = 0; c < x.shape()[1]; ++c)
                        for (std::size_t a = 0; a < l.kernel; ++a)
                            for (std::size_t b = 0; b < l.kernel; ++b)
                                y.at(r * l.stride + a, c * l.stride + b)
                                    += x.at(r, c) * l.weights[a * l.kernel + b];
                return y;
            },
            [&](const AvgPool2D &l) {
                Tensor y(out_shape);
                const auto count = static_cast<double>(l.window * l.window);
                for (std::size_t r = 0; r < out_shape[0]; ++r) {
                    for (std::size_t c = 0; c < out_shape[1]; ++c) {
                        double acc = 0.0;
                        for (std::size_t a = 0; a < l.window; ++a)
                            for (std::size_t b = 0; b < l.window; ++b)
                                acc += x.at(r * l.stride + a, c * l.stride + b);
                        y.at(r, c) = acc / count;
                    }
                }
                return y;
            },
            [&](const Activation &l) {
                Tensor y = x;
                for (auto &v : y.data())
                    v = activate(l.fn, v);
                return y;
            },
            [&](const Reshape &l) { return x.reshaped(l.target); },
        },
        layer);
}

} // namespace gv
