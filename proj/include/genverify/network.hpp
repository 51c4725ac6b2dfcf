#pragma once

#include "genverify/layer.hpp"
#include "genverify/tensor.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gv {

enum class NetworkRole { Decoder, Regressor };

std::string role_name(NetworkRole role);
NetworkRole parse_role(const std::string &name);

/// Affine map `scale * o + offset` applied to the final layer output. Turns a
/// sigmoid-squashed regressor output back into meters.
struct Descale {
    double scale = 1.0;
    double offset = 0.0;

    friend bool operator==(const Descale &, const Descale &) = default;
};

/// A sequential chain of layers with its input shape. Immutable once
/// constructed; the constructor checks shape compatibility, finiteness of
/// every parameter and the de-scaling rule.
class NetworkSpec {
public:
    NetworkSpec(std::string name, NetworkRole role, Shape input_shape, std::vector<Layer> layers,
                std::optional<Descale> descale = std::nullopt, std::string param_set = {});

    const std::string &name() const noexcept { return _name; }
    NetworkRole role() const noexcept { return _role; }
    const std::string &param_set() const noexcept { return _param_set; }
    const Shape &input_shape() const noexcept { return _input_shape; }
    const Shape &output_shape() const noexcept { return _shapes.back(); }
    const std::vector<Layer> &layers() const noexcept { return _layers; }
    const std::optional<Descale> &descale() const noexcept { return _descale; }

    /// Shape entering layer i; entry layers().size() is the final output.
    const std::vector<Shape> &shape_trace() const noexcept { return _shapes; }

    std::size_t parameter_count() const;

private:
    std::string _name;
    NetworkRole _role;
    std::string _param_set;
    Shape _input_shape;
    std::vector<Layer> _layers;
    std::optional<Descale> _descale;
    std::vector<Shape> _shapes;
};

/// Layer-by-layer evaluation followed by de-scaling when present.
Tensor forward(const NetworkSpec &net, const Tensor &input);

/// Decoder feeding a scalar regressor.
class ComposedNetwork {
public:
    ComposedNetwork(NetworkSpec decoder, NetworkSpec regressor);

    const NetworkSpec &decoder() const noexcept { return _decoder; }
    const NetworkSpec &regressor() const noexcept { return _regressor; }

    /// Number of configuration (and latent) coordinates taken by the decoder.
    std::size_t input_dim() const noexcept { return shape_size(_decoder.input_shape()); }

private:
    NetworkSpec _decoder;
    NetworkSpec _regressor;
};

double forward_composed(const ComposedNetwork &net, const Tensor &config);
double forward_composed(const ComposedNetwork &net, std::span<const double> config);

} // namespace gv
