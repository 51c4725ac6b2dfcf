#include "genverify/interval_prop.hpp"

#include "genverify/error.hpp"

#include <algorithm>

namespace gv {

namespace {

template <class... Ts> struct Overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> Overloaded(Ts...) -> Overloaded<Ts...>;

// acc += w * x with outward rounding on both the product and the sum.
inline void accumulate(Interval &acc, const Interval &x, double w) noexcept
{
    if (w == 0.0)
        return;
    const Interval term = scale(x, w);
    acc.lo = next_down(acc.lo + term.lo);
    acc.hi = next_up(acc.hi + term.hi);
}

double widen_down(double v, int ulps) noexcept
{
    for (int i = 0; i < ulps; ++i)
        v = next_down(v);
    return v;
}

double widen_up(double v, int ulps) noexcept
{
    for (int i = 0; i < ulps; ++i)
        v = next_up(v);
    return v;
}

Interval activate(ActivationFn fn, const Interval &x) noexcept
{
    switch (fn) {
    case ActivationFn::ReLU:
        return {std::max(x.lo, 0.0), std::max(x.hi, 0.0)};
    case ActivationFn::Tanh:
        return {std::max(widen_down(std::tanh(x.lo), kTranscendentalUlps), -1.0),
                std::min(widen_up(std::tanh(x.hi), kTranscendentalUlps), 1.0)};
    case ActivationFn::Sigmoid:
        return {std::max(widen_down(sigmoid(x.lo), kTranscendentalUlps), 0.0),
                std::min(widen_up(sigmoid(x.hi), kTranscendentalUlps), 1.0)};
    }
    return x;
}

} // namespace

IntervalTensor propagate_layer(const Layer &layer, const IntervalTensor &x)
{
    const Shape out_shape = output_shape(layer, x.shape());
    return std::visit(
        Overloaded{
            [&](const Dense &l) {
                IntervalTensor y(out_shape);
                for (std::size_t o = 0; o < l.out; ++o) {
                    Interval acc = Interval::point(l.bias[o]);
                    for (std::size_t i = 0; i < l.in; ++i)
                        accumulate(acc, x[i], l.w(o, i));
                    y[o] = acc;
                }
                return y;
            },
            [&](const Conv2D &l) {
                IntervalTensor y(out_shape);
                const auto rows = static_cast<long>(x.shape()[0]);
                const auto cols = static_cast<long>(x.shape()[1]);
                const auto pad = static_cast<long>(l.padding);
                for (std::size_t r = 0; r < out_shape[0]; ++r) {
                    for (std::size_t c = 0; c < out_shape[1]; ++c) {
                        Interval acc = Interval::point(l.bias);
                        for (std::size_t a = 0; a < l.kernel; ++a) {
                            const long src_r = static_cast<long>(r * l.stride + a) - pad;
                            if (src_r < 0 || src_r >= rows)
                                continue;
                            for (std::size_t b = 0; b < l.kernel; ++b) {
                                const long src_c = static_cast<long>(c * l.stride + b) - pad;
                                if (src_c < 0 || src_c >= cols)
                                    continue;
                                accumulate(acc,
                                           x.at(static_cast<std::size_t>(src_r),
                                                static_cast<std::size_t>(src_c)),
                                           l.weights[a * l.kernel + b]);
                            }
                        }
                        y.at(r, c) = acc;
                    }
                }
                return y;
            },
            [&](const TransposedConv2D &l) {
                IntervalTensor y(out_shape, Interval::point(l.bias));
                for (std::size_t r = 0; r < x.shape()[0]; ++r)
                    for (std::size_t c = 0; c < x.shape()[1]; ++c)
                        for (std::size_t a = 0; a < l.kernel; ++a)
                            for (std::size_t b = 0; b < l.kernel; ++b)
                                accumulate(y.at(r * l.stride + a, c * l.stride + b), x.at(r, c),
                                           l.weights[a * l.kernel + b]);
                return y;
            },
            [&](const AvgPool2D &l) {
                IntervalTensor y(out_shape);
                const auto count = static_cast<double>(l.window * l.window);
                for (std::size_t r = 0; r < out_shape[0]; ++r) {
                    for (std::size_t c = 0; c < out_shape[1]; ++c) {
                        Interval acc = Interval::point(0.0);
                        for (std::size_t a = 0; a < l.window; ++a)
                            for (std::size_t b = 0; b < l.window; ++b)
                                acc = add(acc, x.at(r * l.stride + a, c * l.stride + b));
                        y.at(r, c) = {next_down(acc.lo / count), next_up(acc.hi / count)};
                    }
                }
                return y;
            },
            [&](const Activation &l) {
                IntervalTensor y = x;
                for (auto &iv : y.data())
                    iv = activate(l.fn, iv);
                return y;
            },
            [&](const Reshape &l) { return x.reshaped(l.target); },
        },
        layer);
}

IntervalTensor propagate(const NetworkSpec &net, const IntervalTensor &box)
{
    if (box.shape() != net.input_shape())
        throw ShapeError("network '" + net.name() + "' expects input " + shape_str(net.input_shape())
                         + ", got " + shape_str(box.shape()));
    IntervalTensor x = box;
    for (std::size_t i = 0; i < net.layers().size(); ++i) {
        try {
            x = propagate_layer(net.layers()[i], x);
        } catch (const ShapeError &e) {
            throw ShapeError(e.what(), i);
        }
    }
    if (const auto &ds = net.descale())
        for (auto &iv : x.data())
            iv = add(scale(iv, ds->scale), Interval::point(ds->offset));
    return x;
}

Interval propagate_composed(const ComposedNetwork &net, const IntervalTensor &box)
{
    return propagate(net.regressor(), propagate(net.decoder(), box))[0];
}

Interval error_interval(const ComposedNetwork &net, const IntervalTensor &box,
                        std::size_t ground_truth_coord)
{
    if (ground_truth_coord >= box.size())
        throw Error("ground-truth coordinate " + std::to_string(ground_truth_coord)
                    + " is outside a " + std::to_string(box.size()) + "-dimensional box");
    return sub(propagate_composed(net, box), box[ground_truth_coord]);
}

} // namespace gv
