#pragma once

#include "genverify/tensor.hpp"

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace gv {

/// Fully connected layer. Accepts any input whose element count equals
/// `in` (rank-2 images are consumed row-major) and produces a {out} vector.
struct Dense {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weights; // out x in, row-major
    std::vector<double> bias;    // out

    double w(std::size_t row, std::size_t col) const { return weights[row * in + col]; }
};

/// Single-channel 2D cross-correlation with zero padding.
struct Conv2D {
    std::size_t kernel = 0;
    std::size_t stride = 1;
    std::size_t padding = 0;
    std::vector<double> weights; // kernel x kernel
    double bias = 0.0;
};

/// Single-channel transposed convolution: every input pixel scatters a
/// stride-spaced copy of the kernel into the output.
struct TransposedConv2D {
    std::size_t kernel = 0;
    std::size_t stride = 1;
    std::vector<double> weights; // kernel x kernel
    double bias = 0.0;
};

struct AvgPool2D {
    std::size_t window = 0;
    std::size_t stride = 1;
};

enum class ActivationFn { ReLU, Tanh, Sigmoid };

struct Activation {
    ActivationFn fn = ActivationFn::ReLU;
};

struct Reshape {
    Shape target;
};

using Layer = std::variant<Dense, Conv2D, TransposedConv2D, AvgPool2D, Activation, Reshape>;

std::string layer_kind(const Layer &layer);
std::string activation_name(ActivationFn fn);
ActivationFn parse_activation(const std::string &name);

/// Number of trainable scalars (weights then bias) stored for the layer.
std::size_t parameter_count(const Layer &layer);

/// True for layers computing an affine map of their input.
bool is_affine(const Layer &layer);

Shape output_shape(const Layer &layer, const Shape &in_shape);

/// Exact layer evaluation in double precision.
Tensor apply_layer(const Layer &layer, const Tensor &input);

double sigmoid(double x) noexcept;
double activate(ActivationFn fn, double x) noexcept;

} // namespace gv
