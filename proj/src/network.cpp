#include "genverify/network.hpp"

#include "genverify/error.hpp"

#include <cmath>

namespace gv {

namespace {

bool finite_all(const std::vector<double> &values)
{
    for (double v : values)
        if (!std::isfinite(v))
            return false;
    return true;
}

bool finite_params(const Layer &layer)
{
    if (const auto *d = std::get_if<Dense>(&layer))
        return finite_all(d->weights) && finite_all(d->bias);
    if (const auto *c = std::get_if<Conv2D>(&layer))
        return finite_all(c->weights) && std::isfinite(c->bias);
    if (const auto *t = std::get_if<TransposedConv2D>(&layer))
        return finite_all(t->weights) && std::isfinite(t->bias);
    return true;
}

} // namespace

std::string role_name(NetworkRole role)
{
    return role == NetworkRole::Decoder ? "decoder" : "regressor";
}

NetworkRole parse_role(const std::string &name)
{
    if (name == "decoder")
        return NetworkRole::Decoder;
    if (name == "regressor")
        return NetworkRole::Regressor;
    throw FormatError("unknown network role '" + name + "'");
}

NetworkSpec::NetworkSpec(std::string name, NetworkRole role, Shape input_shape,
                         std::vector<Layer> layers, std::optional<Descale> descale,
                         std::string param_set)
    : _name(std::move(name)),
      _role(role),
      _param_set(std::move(param_set)),
      _input_shape(std::move(input_shape)),
      _layers(std::move(layers)),
      _descale(descale)
{
    if (_param_set.empty())
        _param_set = role == NetworkRole::Decoder ? "psi" : "phi";
    if (_input_shape.empty())
        throw ShapeError("network '" + _name + "' has an empty input shape");
    for (auto e : _input_shape)
        if (e == 0)
            throw ShapeError("network '" + _name + "' has a zero input extent");

    _shapes.reserve(_layers.size() + 1);
    _shapes.push_back(_input_shape);
    for (std::size_t i = 0; i < _layers.size(); ++i) {
        try {
            _shapes.push_back(gv::output_shape(_layers[i], _shapes.back()));
        } catch (const ShapeError &e) {
            throw ShapeError(e.what(), i);
        }
        if (!finite_params(_layers[i]))
            throw ShapeError("non-finite parameter", i);
    }

    const bool ends_in_sigmoid = !_layers.empty()
                                 && std::holds_alternative<Activation>(_layers.back())
                                 && std::get<Activation>(_layers.back()).fn
                                        == ActivationFn::Sigmoid;
    const bool wants_descale = ends_in_sigmoid && _role == NetworkRole::Regressor;
    if (wants_descale != _descale.has_value())
        throw ShapeError(wants_descale
                             ? "sigmoid regressor '" + _name + "' needs de-scaling constants"
                             : "de-scaling is only allowed on sigmoid-terminated regressors");
    if (_descale && (!std::isfinite(_descale->scale) || !std::isfinite(_descale->offset)))
        throw ShapeError("non-finite de-scaling constants");
}

std::size_t NetworkSpec::parameter_count() const
{
    std::size_t total = 0;
    for (const auto &layer : _layers)
        total += gv::parameter_count(layer);
    return total;
}

Tensor forward(const NetworkSpec &net, const Tensor &input)
{
    if (input.shape() != net.input_shape())
        throw ShapeError("network '" + net.name() + "' expects input " + shape_str(net.input_shape())
                         + ", got " + shape_str(input.shape()));
    Tensor x = input;
    for (std::size_t i = 0; i < net.layers().size(); ++i) {
        try {
            x = apply_layer(net.layers()[i], x);
        } catch (const ShapeError &e) {
            throw ShapeError(e.what(), i);
        }
    }
    if (const auto &ds = net.descale())
        for (auto &v : x.data())
            v = ds->scale * v + ds->offset;
    return x;
}

ComposedNetwork::ComposedNetwork(NetworkSpec decoder, NetworkSpec regressor)
    : _decoder(std::move(decoder)), _regressor(std::move(regressor))
{
    if (_decoder.output_shape() != _regressor.input_shape())
        throw ShapeError("decoder output " + shape_str(_decoder.output_shape())
                         + " does not match regressor input " + shape_str(_regressor.input_shape()));
    if (shape_size(_regressor.output_shape()) != 1)
        throw ShapeError("regressor must produce a scalar, got "
                         + shape_str(_regressor.output_shape()));
}

double forward_composed(const ComposedNetwork &net, const Tensor &config)
{
    return forward(net.regressor(), forward(net.decoder(), config))[0];
}

double forward_composed(const ComposedNetwork &net, std::span<const double> config)
{
    return forward_composed(net, Tensor(net.decoder().input_shape(),
                                        std::vector<double>(config.begin(), config.end())));
}

} // namespace gv
