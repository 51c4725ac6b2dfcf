#include "genverify/fixtures.hpp"

#include "genverify/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace gv::fixtures {

namespace {

class Init {
public:
    explicit Init(std::uint64_t seed) : _rng(seed) {}

    double uniform(double bound)
    {
        const double u = static_cast<double>(_rng() >> 11) * 0x1.0p-53;
        return (2.0 * u - 1.0) * bound;
    }

    Dense dense(std::size_t in, std::size_t out)
    {
        const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
        Dense d{in, out, std::vector<double>(in * out), std::vector<double>(out)};
        for (auto &w : d.weights)
            w = uniform(bound);
        for (auto &b : d.bias)
            b = uniform(0.1);
        return d;
    }

    std::vector<double> kernel(std::size_t k, std::size_t fan)
    {
        const double bound = std::sqrt(3.0 / static_cast<double>(fan));
        std::vector<double> w(k * k);
        for (auto &v : w)
            v = uniform(bound);
        return w;
    }

private:
    std::mt19937_64 _rng;
};

Dense pick_pixel(std::size_t input_dim, std::size_t pixels)
{
    Dense d{input_dim, pixels, std::vector<double>(input_dim * pixels, 0.0),
            std::vector<double>(pixels, 0.0)};
    d.weights[0] = 1.0; // pixel 0 <- c[0]
    return d;
}

} // namespace

ComposedNetwork identity(std::size_t input_dim)
{
    return constant_bias(0.0, input_dim);
}

ComposedNetwork constant_bias(double bias, std::size_t input_dim)
{
    NetworkSpec decoder(bias == 0.0 ? "identity-decoder" : "bias-decoder", NetworkRole::Decoder,
                        {input_dim}, {pick_pixel(input_dim, 256), Reshape{{16, 16}}});
    Dense read{256, 1, std::vector<double>(256, 0.0), {bias}};
    read.weights[0] = 1.0;
    NetworkSpec regressor(bias == 0.0 ? "identity-regressor" : "bias-regressor",
                          NetworkRole::Regressor, {16, 16}, {read});
    return ComposedNetwork(std::move(decoder), std::move(regressor));
}

NetworkSpec decoder_exp1(std::uint64_t seed, std::size_t input_dim)
{
    Init init(seed);
    TransposedConv2D up{2, 2, init.kernel(2, 4), init.uniform(0.1)};
    return NetworkSpec("exp1-decoder", NetworkRole::Decoder, {input_dim},
                       {init.dense(input_dim, 64), Activation{ActivationFn::ReLU},
                        init.dense(64, 64), Activation{ActivationFn::ReLU}, Reshape{{8, 8}},
                        std::move(up), Activation{ActivationFn::Sigmoid}});
}

NetworkSpec regressor_exp1(std::uint64_t seed)
{
    Init init(seed);
    return NetworkSpec("exp1-regressor", NetworkRole::Regressor, {16, 16},
                       {AvgPool2D{2, 2}, Reshape{{64}}, init.dense(64, 64),
                        Activation{ActivationFn::Tanh}, init.dense(64, 1)});
}

NetworkSpec regressor_exp2(std::uint64_t seed, Descale descale)
{
    Init init(seed);
    Conv2D conv{3, 1, 0, init.kernel(3, 9), init.uniform(0.1)};
    return NetworkSpec("exp2-regressor", NetworkRole::Regressor, {16, 16},
                       {AvgPool2D{2, 2}, std::move(conv), Activation{ActivationFn::Tanh},
                        Reshape{{36}}, init.dense(36, 32), Activation{ActivationFn::Tanh},
                        init.dense(32, 1), Activation{ActivationFn::Sigmoid}},
                       descale);
}

NetworkSpec cvae_encoder(std::uint64_t seed, std::size_t config_dim)
{
    Init init(seed);
    const std::size_t in = 16 * 16 + config_dim;
    return NetworkSpec("cvae-encoder", NetworkRole::Decoder, {in},
                       {init.dense(in, 8), Activation{ActivationFn::ReLU}, init.dense(8, 2),
                        Activation{ActivationFn::ReLU}, init.dense(2, 2)},
                       std::nullopt, "phi");
}

ComposedNetwork random_tiny(std::uint64_t seed, std::size_t input_dim)
{
    Init init(seed);
    NetworkSpec decoder("tiny-decoder", NetworkRole::Decoder, {input_dim},
                        {init.dense(input_dim, 8), Activation{ActivationFn::ReLU},
                         init.dense(8, 16), Activation{ActivationFn::Sigmoid}});
    NetworkSpec regressor("tiny-regressor", NetworkRole::Regressor, {16},
                          {init.dense(16, 4), Activation{ActivationFn::Tanh}, init.dense(4, 1)});
    return ComposedNetwork(std::move(decoder), std::move(regressor));
}

ComposedNetwork fit_readout(const ComposedNetwork &net, const std::vector<Axis> &domain,
                            std::size_t target, std::size_t samples, std::uint64_t seed,
                            double ridge)
{
    const auto &reg = net.regressor();
    if (reg.layers().empty() || !std::holds_alternative<Dense>(reg.layers().back())
        || reg.descale())
        throw Error("fit_readout needs a regressor ending in a dense layer");
    if (domain.size() != net.input_dim() || target >= domain.size())
        throw Error("fit_readout domain does not match the network input");

    std::vector<Layer> body(reg.layers().begin(), reg.layers().end() - 1);
    const NetworkSpec features(reg.name() + "-body", NetworkRole::Decoder, reg.input_shape(), body);
    const auto &last = std::get<Dense>(reg.layers().back());
    const std::size_t width = last.in + 1;

    std::mt19937_64 rng(seed);
    Eigen::MatrixXd a(samples, width);
    Eigen::VectorXd y(samples);
    std::vector<double> c(domain.size());
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::size_t i = 0; i < domain.size(); ++i) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            c[i] = domain[i].range.lo + u * domain[i].range.width();
        }
        const Tensor h = forward(features, forward(net.decoder(), Tensor(net.decoder().input_shape(), c)));
        for (std::size_t j = 0; j < last.in; ++j)
            a(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(j)) = h[j];
        a(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(last.in)) = 1.0;
        y(static_cast<Eigen::Index>(s)) = c[target];
    }
    Eigen::MatrixXd gram = a.transpose() * a;
    gram.diagonal().array() += ridge * static_cast<double>(samples);
    const Eigen::VectorXd sol = gram.ldlt().solve(a.transpose() * y);

    Dense fitted{last.in, 1, std::vector<double>(last.in), {sol(static_cast<Eigen::Index>(last.in))}};
    for (std::size_t j = 0; j < last.in; ++j)
        fitted.weights[j] = sol(static_cast<Eigen::Index>(j));
    body.push_back(std::move(fitted));
    return ComposedNetwork(net.decoder(), NetworkSpec(reg.name(), NetworkRole::Regressor,
                                                      reg.input_shape(), std::move(body),
                                                      std::nullopt, reg.param_set()));
}

ComposedNetwork tracking_tiny(std::uint64_t seed, const std::vector<Axis> &domain)
{
    return fit_readout(random_tiny(seed, domain.size()), domain, 0, 2000, seed + 1);
}

ComposedNetwork tracking_exp1(std::uint64_t seed, const std::vector<Axis> &domain)
{
    ComposedNetwork raw(decoder_exp1(seed, domain.size()), regressor_exp1(seed + 1));
    return fit_readout(raw, domain, 0, 4000, seed + 2);
}

} // namespace gv::fixtures
