#pragma once

#include "genverify/network.hpp"
#include "genverify/partition.hpp"

#include <cstdint>

namespace gv::fixtures {

// Hand-built composed networks with known behaviour.

/// Decoder writes c[0] into pixel (0, 0) of a 16x16 image; the regressor
/// reads it back, so P(G(c)) = c[0].
ComposedNetwork identity(std::size_t input_dim = 2);

/// Same as identity, regressor output shifted: P(G(c)) = c[0] + bias.
ComposedNetwork constant_bias(double bias = 1.0, std::size_t input_dim = 2);

// Architectures with seeded random initialization.

/// input_dim -> dense 64 relu -> dense 64 relu -> 8x8 -> tconv 2x2/2 -> sigmoid -> 16x16
NetworkSpec decoder_exp1(std::uint64_t seed, std::size_t input_dim = 2);

/// 16x16 -> avgpool 2x2/2 -> 64 -> dense 64 tanh -> dense 1
NetworkSpec regressor_exp1(std::uint64_t seed);

/// 16x16 -> avgpool 2x2/2 -> conv 3x3 tanh -> 36 -> dense 32 tanh -> dense 1 sigmoid -> descale
NetworkSpec regressor_exp2(std::uint64_t seed, Descale descale = {3.0, -3.0});

/// (16x16 + dim C) -> dense 8 relu -> dense 2 relu -> dense 2 (mu, log sigma)
NetworkSpec cvae_encoder(std::uint64_t seed, std::size_t config_dim = 2);

/// Tiny composed network: decoder 2 -> 8 relu -> 16 sigmoid, regressor
/// 16 -> 4 tanh -> 1.
ComposedNetwork random_tiny(std::uint64_t seed, std::size_t input_dim = 2);

/// Refits the regressor's final dense layer by ridge least squares so the
/// composed network estimates coordinate `target` over uniformly sampled
/// points of `domain`. Requires a regressor ending in a Dense layer without
/// de-scaling.
ComposedNetwork fit_readout(const ComposedNetwork &net, const std::vector<Axis> &domain,
                            std::size_t target, std::size_t samples, std::uint64_t seed,
                            double ridge = 1e-6);

/// Random tiny network with a fitted readout over `domain`; gives a mix of
/// provable and violating cells at moderate epsilon.
ComposedNetwork tracking_tiny(std::uint64_t seed, const std::vector<Axis> &domain);

/// Experiment-1 style decoder and regressor with a fitted readout.
ComposedNetwork tracking_exp1(std::uint64_t seed, const std::vector<Axis> &domain);

} // namespace gv::fixtures
