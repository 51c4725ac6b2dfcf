#pragma once

#include "genverify/interval.hpp"
#include "genverify/layer.hpp"
#include "genverify/network.hpp"

namespace gv {

/// Number of ulps a sigmoid/tanh endpoint is widened by after evaluation with
/// the platform transcendental functions.
inline constexpr int kTranscendentalUlps = 4;

/// Sound interval image of one layer. Affine layers split each weight by
/// sign and round every product and partial sum one ulp outward; monotone
/// activations are applied endpoint-wise.
IntervalTensor propagate_layer(const Layer &layer, const IntervalTensor &x);

/// Interval image of a whole network, de-scaling included.
IntervalTensor propagate(const NetworkSpec &net, const IntervalTensor &box);

/// Enclosure of { P(G(c)) : c in box }.
Interval propagate_composed(const ComposedNetwork &net, const IntervalTensor &box);

/// Enclosure of { P(G(c)) - c[k] : c in box }, computed as the composed
/// enclosure minus box[k].
Interval error_interval(const ComposedNetwork &net, const IntervalTensor &box,
                        std::size_t ground_truth_coord);

} // namespace gv
