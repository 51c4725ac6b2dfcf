#pragma once

#include "genverify/interval.hpp"
#include "genverify/network.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gv {

using Box = std::vector<Interval>;

/// One element of a partition: a product of closed intervals plus its grid
/// coordinates.
struct Cell {
    Box bounds;
    std::vector<std::size_t> index;
};

/// |P(G(c)) - c[k]| < epsilon, with k = ground_truth_coord.
struct CorrectnessProperty {
    double epsilon = 0.25;
    std::size_t ground_truth_coord = 0;
};

struct SolverConfig {
    /// Boxes narrower than this in every dimension are not split further.
    double delta = 1e-3;
    /// Budget on explored boxes per cell.
    std::uint64_t max_splits = 200000;
    /// Concrete probes per box: center, then corners (up to 3 dims), then
    /// uniform points.
    std::size_t candidate_points_per_box = 6;
    std::uint64_t seed = 0x5eed;
    /// Wall-clock limit per cell in seconds; 0 disables it.
    double time_limit_s = 300.0;
};

void validate(const CorrectnessProperty &prop);
void validate(const SolverConfig &cfg);

enum class Verdict { Proved, Counterexample, Unknown };

std::string verdict_name(Verdict v);

/// Proof-map encoding: 1 counterexample, -1 proved, 0 unknown.
int verdict_code(Verdict v) noexcept;
Verdict verdict_from_code(int code);

struct Violation {
    double output = 0.0;
    double magnitude = 0.0;
};

struct Counterexample {
    std::vector<double> point;
    Tensor image; // decoder output at `point`
    double output = 0.0;
    double violation = 0.0;
};

struct SearchStats {
    std::uint64_t boxes_explored = 0;
    std::uint64_t boxes_pruned = 0;
    std::uint64_t boxes_unresolved = 0;
    std::uint64_t probes = 0;
    bool budget_exhausted = false;
    bool timed_out = false;
    double wall_time_s = 0.0;
};

struct CellResult {
    Verdict verdict = Verdict::Unknown;
    std::optional<Counterexample> counterexample;
    SearchStats stats;
    std::string note;
};

/// State of the worklist after each explored box, for instrumented runs.
struct SearchSnapshot {
    std::span<const Box> pruned;
    std::span<const Box> pending;
    std::span<const Box> unresolved;
};

using SearchObserver = std::function<void(const SearchSnapshot &)>;

/// Concrete check of one configuration. Returns the violation iff
/// |P(G(point)) - point[k]| >= epsilon.
std::optional<Violation> check_candidate(const ComposedNetwork &net, std::span<const double> point,
                                         const CorrectnessProperty &prop);

/// Halves `box` at the midpoint of `dim`.
std::pair<Box, Box> split_box(const Box &box, std::size_t dim);

/// Widest dimension, lowest index on ties.
std::size_t widest_dimension(const Box &box);

/// Deterministic generator for the probes of one cell.
std::mt19937_64 cell_rng(std::uint64_t seed, const std::vector<std::size_t> &index);

/// Probe points used for a box, in order: center, corners (n <= 3), then
/// uniform samples drawn from `rng`.
std::vector<std::vector<double>> probe_points(const Box &box, std::size_t count,
                                              std::mt19937_64 &rng);

/// Branch-and-prune search for a counterexample to the property inside the
/// cell. Proved means every leaf box was pruned by the interval bound;
/// Counterexample carries a concretely validated witness; anything else is
/// Unknown. Throws VerifierError if the network produces a non-finite value.
CellResult prove_cell(const ComposedNetwork &net, const Cell &cell,
                      const CorrectnessProperty &prop, const SolverConfig &cfg,
                      const SearchObserver &observer = {});

std::string describe_cell(const Cell &cell);

} // namespace gv
