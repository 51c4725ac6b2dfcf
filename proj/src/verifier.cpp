#include "genverify/verifier.hpp"

#include "genverify/error.hpp"
#include "genverify/interval_prop.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace gv {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double unit_uniform(std::mt19937_64 &rng) noexcept
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

IntervalTensor to_interval_tensor(const Box &box, const Shape &shape)
{
    return IntervalTensor(shape, std::vector<Interval>(box.begin(), box.end()));
}

struct Node {
    Box box;
    Interval error;
};

} // namespace

std::mt19937_64 cell_rng(std::uint64_t seed, const std::vector<std::size_t> &index)
{
    std::uint64_t h = splitmix64(seed);
    for (auto i : index)
        h = splitmix64(h ^ static_cast<std::uint64_t>(i));
    return std::mt19937_64(h);
}

void validate(const CorrectnessProperty &prop)
{
    if (!(prop.epsilon > 0.0) || !std::isfinite(prop.epsilon))
        throw Error("epsilon must be positive and finite");
}

void validate(const SolverConfig &cfg)
{
    if (!(cfg.delta > 0.0))
        throw Error("delta must be positive");
    if (cfg.max_splits < 1)
        throw Error("max_splits must be at least 1");
    if (cfg.candidate_points_per_box < 1)
        throw Error("candidate_points_per_box must be at least 1");
    if (cfg.time_limit_s < 0.0)
        throw Error("time limit must be non-negative");
}

std::string verdict_name(Verdict v)
{
    switch (v) {
    case Verdict::Proved: return "Proved";
    case Verdict::Counterexample: return "Counterexample";
    case Verdict::Unknown: return "Unknown";
    }
    return "?";
}

int verdict_code(Verdict v) noexcept
{
    switch (v) {
    case Verdict::Proved: return -1;
    case Verdict::Counterexample: return 1;
    case Verdict::Unknown: return 0;
    }
    return 0;
}

Verdict verdict_from_code(int code)
{
    switch (code) {
    case -1: return Verdict::Proved;
    case 1: return Verdict::Counterexample;
    case 0: return Verdict::Unknown;
    }
    throw FormatError("invalid cell result code " + std::to_string(code));
}

std::optional<Violation> check_candidate(const ComposedNetwork &net, std::span<const double> point,
                                         const CorrectnessProperty &prop)
{
    const double output = forward_composed(net, point);
    const double magnitude = std::abs(output - point[prop.ground_truth_coord]);
    if (magnitude >= prop.epsilon)
        return Violation{output, magnitude};
    return std::nullopt;
}

std::pair<Box, Box> split_box(const Box &box, std::size_t dim)
{
    if (dim >= box.size())
        throw Error("split dimension " + std::to_string(dim) + " out of range");
    const Interval &iv = box[dim];
    if (!(iv.hi > iv.lo))
        throw Error("cannot split zero-width dimension " + std::to_string(dim));
    const double mid = iv.mid();
    Box lower = box;
    Box upper = box;
    lower[dim].hi = mid;
    upper[dim].lo = mid;
    return {std::move(lower), std::move(upper)};
}

std::size_t widest_dimension(const Box &box)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < box.size(); ++i)
        if (box[i].width() > box[best].width())
            best = i;
    return best;
}

std::vector<std::vector<double>> probe_points(const Box &box, std::size_t count,
                                              std::mt19937_64 &rng)
{
    std::vector<std::vector<double>> points;
    points.reserve(count);
    if (count == 0)
        return points;

    std::vector<double> center(box.size());
    for (std::size_t i = 0; i < box.size(); ++i)
        center[i] = box[i].mid();
    points.push_back(std::move(center));

    if (box.size() <= 3) {
        const std::size_t corners = std::size_t{1} << box.size();
        for (std::size_t mask = 0; mask < corners && points.size() < count; ++mask) {
            std::vector<double> corner(box.size());
            for (std::size_t i = 0; i < box.size(); ++i)
                corner[i] = (mask >> i) & 1U ? box[i].hi : box[i].lo;
            points.push_back(std::move(corner));
        }
    }

    while (points.size() < count) {
        std::vector<double> p(box.size());
        for (std::size_t i = 0; i < box.size(); ++i)
            p[i] = std::min(box[i].lo + unit_uniform(rng) * box[i].width(), box[i].hi);
        points.push_back(std::move(p));
    }
    return points;
}

std::string describe_cell(const Cell &cell)
{
    std::string out = "cell (";
    for (std::size_t i = 0; i < cell.index.size(); ++i)
        out += (i ? "," : "") + std::to_string(cell.index[i]);
    out += ") ";
    for (std::size_t i = 0; i < cell.bounds.size(); ++i)
        out += (i ? "x" : "") + to_string(cell.bounds[i]);
    return out;
}

CellResult prove_cell(const ComposedNetwork &net, const Cell &cell,
                      const CorrectnessProperty &prop, const SolverConfig &cfg,
                      const SearchObserver &observer)
{
    validate(prop);
    validate(cfg);
    if (cell.bounds.size() != net.input_dim())
        throw Error(describe_cell(cell) + " has " + std::to_string(cell.bounds.size())
                    + " dimensions, network takes " + std::to_string(net.input_dim()));
    if (prop.ground_truth_coord >= cell.bounds.size())
        throw Error("ground-truth coordinate out of range for " + describe_cell(cell));
    for (const auto &iv : cell.bounds)
        if (!(iv.lo <= iv.hi) || !iv.is_finite())
            throw Error(describe_cell(cell) + " has invalid bounds");

    const auto started = std::chrono::steady_clock::now();
    const auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };
    const Shape &in_shape = net.decoder().input_shape();
    std::mt19937_64 rng = cell_rng(cfg.seed, cell.index);

    CellResult result;
    auto &stats = result.stats;

    const auto bound = [&](const Box &box) {
        const Interval err = error_interval(net, to_interval_tensor(box, in_shape),
                                            prop.ground_truth_coord);
        if (std::isnan(err.lo) || std::isnan(err.hi))
            throw VerifierError("non-finite error bound in " + describe_cell(cell));
        return err;
    };

    std::vector<Node> stack;
    stack.push_back({cell.bounds, bound(cell.bounds)});

    std::vector<Box> pruned;
    std::vector<Box> unresolved;
    std::vector<Box> pending_view;
    const auto notify = [&] {
        if (!observer)
            return;
        pending_view.clear();
        for (const auto &n : stack)
            pending_view.push_back(n.box);
        observer(SearchSnapshot{pruned, pending_view, unresolved});
    };

    while (!stack.empty()) {
        if (stats.boxes_explored >= cfg.max_splits) {
            stats.budget_exhausted = true;
            break;
        }
        if (cfg.time_limit_s > 0.0 && elapsed() > cfg.time_limit_s) {
            stats.timed_out = true;
            break;
        }

        Node node = std::move(stack.back());
        stack.pop_back();
        ++stats.boxes_explored;

        if (-prop.epsilon < node.error.lo && node.error.hi < prop.epsilon) {
            ++stats.boxes_pruned;
            if (observer)
                pruned.push_back(std::move(node.box));
            notify();
            continue;
        }

        for (auto &point : probe_points(node.box, cfg.candidate_points_per_box, rng)) {
            ++stats.probes;
            const Tensor config(in_shape, point);
            const Tensor image = forward(net.decoder(), config);
            const double output = forward(net.regressor(), image)[0];
            if (!std::isfinite(output))
                throw VerifierError("non-finite network output in " + describe_cell(cell));
            const double magnitude = std::abs(output - point[prop.ground_truth_coord]);
            if (magnitude >= prop.epsilon) {
                result.verdict = Verdict::Counterexample;
                result.counterexample = Counterexample{std::move(point), image, output, magnitude};
                stats.wall_time_s = elapsed();
                return result;
            }
        }

        const std::size_t dim = widest_dimension(node.box);
        const bool resolved = std::all_of(node.box.begin(), node.box.end(),
                                          [&](const Interval &iv) { return iv.width() < cfg.delta; });
        if (resolved || !(node.box[dim].hi > node.box[dim].lo)) {
            ++stats.boxes_unresolved;
            if (observer)
                unresolved.push_back(std::move(node.box));
            notify();
            continue;
        }

        auto [lower, upper] = split_box(node.box, dim);
        Node lo_node{std::move(lower), {}};
        Node hi_node{std::move(upper), {}};
        lo_node.error = bound(lo_node.box);
        hi_node.error = bound(hi_node.box);
        // The child with the larger |error midpoint| is popped first; ties go
        // to the lower half.
        if (std::abs(hi_node.error.mid()) > std::abs(lo_node.error.mid())) {
            stack.push_back(std::move(lo_node));
            stack.push_back(std::move(hi_node));
        } else {
            stack.push_back(std::move(hi_node));
            stack.push_back(std::move(lo_node));
        }
        notify();
    }

    stats.wall_time_s = elapsed();
    if (stack.empty() && stats.boxes_unresolved == 0) {
        result.verdict = Verdict::Proved;
    } else {
        result.verdict = Verdict::Unknown;
        if (stats.timed_out)
            result.note = "time limit reached";
        else if (stats.budget_exhausted)
            result.note = "box budget exhausted";
        else
            result.note = std::to_string(stats.boxes_unresolved) + " boxes unresolved at delta";
    }
    return result;
}

} // namespace gv
