#pragma once

// Shared helpers for the test suites: random generators, temp dirs and
// independent oracles that do not route through the library's evaluator.

#include "genverify/fixtures.hpp"
#include "genverify/interval_prop.hpp"
#include "genverify/manifest.hpp"
#include "genverify/partition.hpp"
#include "genverify/proofmap.hpp"
#include "genverify/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

namespace gvtest {

using namespace gv;

inline std::vector<Axis> exp1_domain()
{
    return {{"d", {-3.0, -0.37}, false}, {"theta", {-0.03, 0.17}, false}};
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : _gen(seed) {}
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(_gen); }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(_gen); }
    std::vector<double> vec(std::size_t n, double lo, double hi)
    {
        std::vector<double> v(n);
        for (auto &x : v)
            x = uniform(lo, hi);
        return v;
    }
    std::mt19937_64 &gen() { return _gen; }

private:
    std::mt19937_64 _gen;
};

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string &tag)
    {
        static int counter = 0;
        _path = std::filesystem::temp_directory_path()
                / ("gvtest-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(_path);
        std::filesystem::create_directories(_path);
    }
    ~TempDir() { std::filesystem::remove_all(_path); }
    TempDir(const TempDir &) = delete;
    TempDir &operator=(const TempDir &) = delete;
    const std::filesystem::path &path() const { return _path; }
    std::filesystem::path operator/(const std::string &name) const { return _path / name; }

private:
    std::filesystem::path _path;
};

/// Random box of the given shape: centres in [-c, c], half widths in [0, w].
inline IntervalTensor random_box(Rng &rng, const Shape &shape, double c, double w)
{
    IntervalTensor box(shape);
    for (std::size_t i = 0; i < box.size(); ++i) {
        const double mid = rng.uniform(-c, c);
        const double half = rng.uniform(0.0, w);
        box[i] = {mid - half, mid + half};
    }
    return box;
}

inline Tensor random_point_in(Rng &rng, const IntervalTensor &box)
{
    Tensor t(box.shape());
    for (std::size_t i = 0; i < box.size(); ++i) {
        // Endpoints are hit deliberately some of the time.
        const auto pick = rng.index(8);
        if (pick == 0)
            t[i] = box[i].lo;
        else if (pick == 1)
            t[i] = box[i].hi;
        else
            t[i] = rng.uniform(box[i].lo, box[i].hi);
        t[i] = std::clamp(t[i], box[i].lo, box[i].hi);
    }
    return t;
}

inline IntervalTensor cell_box(const Box &bounds)
{
    return IntervalTensor({bounds.size()}, bounds);
}

struct LayerCase {
    Layer layer;
    Shape in;
};

/// Random layer of the given kind together with a compatible input shape.
inline LayerCase random_layer(Rng &rng, const std::string &kind)
{
    if (kind == "dense") {
        const std::size_t in = 1 + rng.index(12), out = 1 + rng.index(8);
        return {Dense{in, out, rng.vec(in * out, -2, 2), rng.vec(out, -1, 1)}, {in}};
    }
    if (kind == "conv2d") {
        const std::size_t k = 1 + rng.index(3), s = 1 + rng.index(2), p = rng.index(2);
        std::size_t n = 6 + rng.index(4);
        while ((n + 2 * p - k) % s != 0)
            ++n;
        return {Conv2D{k, s, p, rng.vec(k * k, -2, 2), rng.uniform(-1, 1)}, {n, n}};
    }
    if (kind == "tconv2d") {
        const std::size_t k = 1 + rng.index(3), s = 1 + rng.index(2);
        return {TransposedConv2D{k, s, rng.vec(k * k, -2, 2), rng.uniform(-1, 1)},
                {2 + rng.index(5), 2 + rng.index(5)}};
    }
    if (kind == "avgpool2d") {
        const std::size_t w = 1 + rng.index(3);
        return {AvgPool2D{w, w}, {w * (2 + rng.index(3)), w * (2 + rng.index(3))}};
    }
    if (kind == "relu")
        return {Activation{ActivationFn::ReLU}, {1 + rng.index(20)}};
    if (kind == "tanh")
        return {Activation{ActivationFn::Tanh}, {1 + rng.index(20)}};
    if (kind == "sigmoid")
        return {Activation{ActivationFn::Sigmoid}, {1 + rng.index(20)}};
    return {Reshape{{2, 6}}, {12}};
}

inline const std::vector<std::string> kLayerKinds{"dense", "conv2d", "tconv2d", "avgpool2d",
                                                 "relu", "tanh", "sigmoid", "reshape"};

// ---------------------------------------------------------------------------
// Straight-line re-implementation of the layer math, written in "gather"
// form (each output element collects its inputs) independently of
// apply_layer's scatter formulation.

inline std::vector<double> ref_dense(const Dense &l, const std::vector<double> &x)
{
    std::vector<double> y(l.out);
    for (std::size_t o = 0; o < l.out; ++o) {
        long double acc = 0.0L;
        for (std::size_t i = 0; i < l.in; ++i)
            acc += static_cast<long double>(l.weights[o * l.in + i]) * x[i];
        y[o] = static_cast<double>(acc + l.bias[o]);
    }
    return y;
}

inline std::vector<double> ref_tconv(const TransposedConv2D &l, const std::vector<double> &x,
                                     std::size_t n)
{
    const std::size_t m = (n - 1) * l.stride + l.kernel;
    std::vector<double> y(m * m);
    for (std::size_t R = 0; R < m; ++R)
        for (std::size_t C = 0; C < m; ++C) {
            long double acc = l.bias;
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c) {
                    const long a = static_cast<long>(R) - static_cast<long>(r * l.stride);
                    const long b = static_cast<long>(C) - static_cast<long>(c * l.stride);
                    if (a >= 0 && b >= 0 && a < static_cast<long>(l.kernel) && b < static_cast<long>(l.kernel))
                        acc += static_cast<long double>(x[r * n + c]) * l.weights[a * l.kernel + b];
                }
            y[R * m + C] = static_cast<double>(acc);
        }
    return y;
}

inline std::vector<double> ref_avgpool(std::size_t window, std::size_t stride,
                                       const std::vector<double> &x, std::size_t n)
{
    const std::size_t m = (n - window) / stride + 1;
    std::vector<double> y(m * m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) {
            long double acc = 0.0L;
            for (std::size_t a = 0; a < window; ++a)
                for (std::size_t b = 0; b < window; ++b)
                    acc += x[(r * stride + a) * n + c * stride + b];
            y[r * m + c] = static_cast<double>(acc / (window * window));
        }
    return y;
}

/// Exp-1 composed network (dense relu, dense relu, 8x8, tconv 2/2, sigmoid;
/// avgpool 2/2, dense tanh, dense) evaluated without the library evaluator.
inline double ref_exp1(const ComposedNetwork &net, double d, double theta)
{
    const auto &dl = net.decoder().layers();
    const auto &rl = net.regressor().layers();
    auto h = ref_dense(std::get<Dense>(dl[0]), {d, theta});
    for (auto &v : h)
        v = v > 0.0 ? v : 0.0;
    h = ref_dense(std::get<Dense>(dl[2]), h);
    for (auto &v : h)
        v = v > 0.0 ? v : 0.0;
    auto img = ref_tconv(std::get<TransposedConv2D>(dl[5]), h, 8);
    for (auto &v : img)
        v = 1.0 / (1.0 + std::exp(-v));
    auto p = ref_avgpool(2, 2, img, 16);
    auto g = ref_dense(std::get<Dense>(rl[2]), p);
    for (auto &v : g)
        v = std::tanh(v);
    return ref_dense(std::get<Dense>(rl[4]), g)[0];
}

// ---------------------------------------------------------------------------
// Dense-grid brute-force oracle for one cell.

struct OracleResult {
    double max_error = 0.0;        // max |f(c) - c[k]| over the grid
    std::vector<double> worst;     // where it was attained
};

inline OracleResult brute_force(const ComposedNetwork &net, const Box &cell, std::size_t k,
                                std::size_t per_axis = 200)
{
    OracleResult res;
    std::vector<double> c(cell.size());
    std::vector<std::size_t> idx(cell.size(), 0);
    while (true) {
        for (std::size_t i = 0; i < cell.size(); ++i)
            c[i] = cell[i].lo + cell[i].width() * static_cast<double>(idx[i])
                                    / static_cast<double>(per_axis - 1);
        const double err = std::abs(forward_composed(net, c) - c[k]);
        if (err > res.max_error || res.worst.empty()) {
            res.max_error = err;
            res.worst = c;
        }
        std::size_t i = cell.size();
        while (i > 0) {
            --i;
            if (++idx[i] < per_axis)
                break;
            idx[i] = 0;
            if (i == 0)
                return res;
        }
    }
}

/// Proof map with the given results (row-major over a 2D grid) and
/// synthetic timing.
inline ProofMap synthetic_map(std::size_t rows, std::size_t cols, const std::vector<int> &results,
                              const std::vector<double> &times = {})
{
    Partition p({{"d", {-3.0, -0.37}, false}, {"theta", {-0.03, 0.17}, false}}, {rows, cols});
    ProofMap map{p, {}, {}, 1, {}};
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Cell cell = p.cell(i);
        CellEntry e;
        e.index = cell.index;
        e.bounds = cell.bounds;
        e.result = results[i];
        e.time_s = times.empty() ? 0.5 : times[i];
        if (e.result == 1) {
            std::vector<double> pt;
            for (const auto &iv : cell.bounds)
                pt.push_back(iv.mid());
            e.witness = Witness{pt, pt[0] + 1.0, 1.0};
        }
        map.entries.push_back(std::move(e));
    }
    return map;
}

} // namespace gvtest
