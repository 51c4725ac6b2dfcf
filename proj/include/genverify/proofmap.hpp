#pragma once

#include "genverify/network.hpp"
#include "genverify/partition.hpp"
#include "genverify/verifier.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gv {

struct Witness {
    std::vector<double> point;
    double output = 0.0;
    double violation = 0.0;

    friend bool operator==(const Witness &, const Witness &) = default;
};

/// One proof-map record. `result` uses the map encoding: 1 SAT, -1 proved,
/// 0 unknown.
struct CellEntry {
    std::vector<std::size_t> index;
    Box bounds;
    int result = 0;
    std::optional<Witness> witness;
    double time_s = 0.0;
    std::uint64_t boxes_explored = 0;
    std::uint64_t boxes_pruned = 0;
    bool presampled = false;
    std::string note;

    friend bool operator==(const CellEntry &, const CellEntry &) = default;
};

struct ProofMap {
    Partition partition;
    CorrectnessProperty property;
    SolverConfig solver;
    std::size_t presample_points = 1;
    std::vector<CellEntry> entries; // ordered by flat cell index

    const CellEntry &at(const std::vector<std::size_t> &index) const
    {
        return entries[partition.flat_index(index)];
    }
};

struct ResultCounts {
    std::size_t proved = 0;
    std::size_t sat = 0;
    std::size_t unknown = 0;

    std::size_t total() const noexcept { return proved + sat + unknown; }
};

ResultCounts aggregate(const ProofMap &map);
ResultCounts aggregate(std::span<const int> results);

/// count / total as an integer percentage, halves rounded up.
int rounded_percent(std::size_t count, std::size_t total);

/// Count/percent table in the layout
///   Cell Result  Count  Percent
///   UNSAT          218      55%
std::string format_counts_table(const ResultCounts &counts);

/// Probes each cell at `points_per_cell` points (center first) and returns
/// the witness for every cell where a violation was found, keyed by flat index.
std::map<std::size_t, Counterexample> presample(const Partition &partition,
                                                const ComposedNetwork &net,
                                                const CorrectnessProperty &prop,
                                                std::size_t points_per_cell,
                                                std::uint64_t seed = 0x5eed);

struct ProofMapOptions {
    std::size_t jobs = 5;
    std::size_t presample_points = 1;
    /// Entries already solved (e.g. loaded from a checkpoint); they are kept
    /// as-is and not re-solved.
    std::vector<CellEntry> completed;
    /// Called once per newly finished cell, serialized across workers.
    std::function<void(const CellEntry &)> on_cell;
};

/// Presamples, then solves the remaining cells on a pool of `jobs` workers.
/// A cell whose solve throws is recorded as unknown with the error as note.
ProofMap build_proofmap(const Partition &partition, const ComposedNetwork &net,
                        const CorrectnessProperty &prop, const SolverConfig &cfg,
                        ProofMapOptions options = {});

CellEntry make_entry(const Cell &cell, const CellResult &result);

// Proof-map file: JSON Lines. Line 1 is the header (domain, grid, epsilon,
// delta, coordinate order, solver budgets); every further line is one cell
// record. Records may appear in any order and a truncated final line is
// ignored, so a run can append records as cells finish and resume later.

std::string proofmap_header_line(const ProofMap &map);
std::string proofmap_entry_line(const CellEntry &entry);

/// Canonical text: header then records in cell order.
std::string serialize_proofmap(const ProofMap &map);

/// Same as serialize_proofmap with every timing field zeroed.
std::string serialize_proofmap_without_timing(const ProofMap &map);

struct LoadedProofMap {
    ProofMap map; // entries holds only the records present, in cell order
    bool complete = false;
};

LoadedProofMap parse_proofmap(const std::string &text);
LoadedProofMap load_proofmap(const std::filesystem::path &path);

/// Loads a file that must contain every cell.
ProofMap load_complete_proofmap(const std::filesystem::path &path);

void save_proofmap(const ProofMap &map, const std::filesystem::path &path);

/// True when two maps describe the same run setup (domain, grid, property,
/// solver settings), so records of one are valid for the other.
bool same_setup(const ProofMap &a, const ProofMap &b);

} // namespace gv
