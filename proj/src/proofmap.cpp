#include "genverify/proofmap.hpp"

#include "genverify/error.hpp"
#include "genverify/manifest.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace gv {

using json = nlohmann::ordered_json;

ResultCounts aggregate(std::span<const int> results)
{
    ResultCounts counts;
    for (int r : results) {
        switch (verdict_from_code(r)) {
        case Verdict::Proved: ++counts.proved; break;
        case Verdict::Counterexample: ++counts.sat; break;
        case Verdict::Unknown: ++counts.unknown; break;
        }
    }
    return counts;
}

ResultCounts aggregate(const ProofMap &map)
{
    std::vector<int> results;
    results.reserve(map.entries.size());
    for (const auto &e : map.entries)
        results.push_back(e.result);
    return aggregate(results);
}

int rounded_percent(std::size_t count, std::size_t total)
{
    if (total == 0)
        return 0;
    return static_cast<int>((200 * count + total) / (2 * total));
}

std::string format_counts_table(const ResultCounts &counts)
{
    const auto total = counts.total();
    char line[96];
    std::string out;
    std::snprintf(line, sizeof line, "%-12s %6s %8s\n", "Cell Result", "Count", "Percent");
    out += line;
    const auto row = [&](const char *label, std::size_t n) {
        std::snprintf(line, sizeof line, "%-12s %6zu %7d%%\n", label, n, rounded_percent(n, total));
        out += line;
    };
    row("UNSAT", counts.proved);
    row("SAT", counts.sat);
    row("Unknown", counts.unknown);
    std::snprintf(line, sizeof line, "%-12s %6zu\n", "Total", total);
    out += line;
    return out;
}

namespace {

struct Probe {
    std::vector<double> point;
    Violation violation;
};

std::optional<Probe> probe_cell(const ComposedNetwork &net, const Cell &cell,
                                const CorrectnessProperty &prop, std::size_t points,
                                std::uint64_t seed)
{
    auto rng = cell_rng(seed ^ 0x7072657361ULL, cell.index);
    for (auto &point : probe_points(cell.bounds, points, rng)) {
        auto v = check_candidate(net, point, prop);
        // Non-finite outputs are left to the solver, which reports them.
        if (v && std::isfinite(v->output))
            return Probe{std::move(point), *v};
    }
    return std::nullopt;
}

void check_dims(const Partition &partition, const ComposedNetwork &net)
{
    if (partition.dims() != net.input_dim())
        throw Error("partition has " + std::to_string(partition.dims())
                    + " axes, network takes " + std::to_string(net.input_dim()));
}

} // namespace

std::map<std::size_t, Counterexample> presample(const Partition &partition,
                                                const ComposedNetwork &net,
                                                const CorrectnessProperty &prop,
                                                std::size_t points_per_cell, std::uint64_t seed)
{
    validate(prop);
    if (points_per_cell < 1)
        throw Error("presampling needs at least one point per cell");
    check_dims(partition, net);

    std::map<std::size_t, Counterexample> marked;
    const Shape &in_shape = net.decoder().input_shape();
    for (std::size_t flat = 0; flat < partition.size(); ++flat) {
        if (auto hit = probe_cell(net, partition.cell(flat), prop, points_per_cell, seed)) {
            Tensor image = forward(net.decoder(), Tensor(in_shape, hit->point));
            marked.emplace(flat, Counterexample{std::move(hit->point), std::move(image),
                                                hit->violation.output, hit->violation.magnitude});
        }
    }
    return marked;
}

CellEntry make_entry(const Cell &cell, const CellResult &result)
{
    CellEntry e;
    e.index = cell.index;
    e.bounds = cell.bounds;
    e.result = verdict_code(result.verdict);
    if (result.counterexample)
        e.witness = Witness{result.counterexample->point, result.counterexample->output,
                            result.counterexample->violation};
    e.time_s = result.stats.wall_time_s;
    e.boxes_explored = result.stats.boxes_explored;
    e.boxes_pruned = result.stats.boxes_pruned;
    e.note = result.note;
    return e;
}

ProofMap build_proofmap(const Partition &partition, const ComposedNetwork &net,
                        const CorrectnessProperty &prop, const SolverConfig &cfg,
                        ProofMapOptions options)
{
    validate(prop);
    validate(cfg);
    if (options.jobs < 1)
        throw Error("jobs must be at least 1");
    check_dims(partition, net);
    if (prop.ground_truth_coord >= partition.dims())
        throw Error("ground-truth coordinate out of range");

    ProofMap map{partition, prop, cfg, options.presample_points, {}};
    std::vector<std::optional<CellEntry>> slots(partition.size());
    for (auto &e : options.completed) {
        const auto flat = partition.flat_index(e.index);
        slots[flat] = std::move(e);
    }

    std::mutex sink_mutex;
    const auto publish = [&](std::size_t flat, CellEntry entry) {
        std::lock_guard lock(sink_mutex);
        if (options.on_cell)
            options.on_cell(entry);
        slots[flat] = std::move(entry);
    };

    if (options.presample_points > 0) {
        for (std::size_t flat = 0; flat < partition.size(); ++flat) {
            if (slots[flat])
                continue;
            const Cell cell = partition.cell(flat);
            const auto started = std::chrono::steady_clock::now();
            if (auto hit = probe_cell(net, cell, prop, options.presample_points, cfg.seed)) {
                CellEntry e;
                e.index = cell.index;
                e.bounds = cell.bounds;
                e.result = verdict_code(Verdict::Counterexample);
                e.witness = Witness{std::move(hit->point), hit->violation.output,
                                    hit->violation.magnitude};
                e.presampled = true;
                e.time_s =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                        .count();
                publish(flat, std::move(e));
            }
        }
    }

    std::vector<std::size_t> todo;
    for (std::size_t flat = 0; flat < partition.size(); ++flat)
        if (!slots[flat])
            todo.push_back(flat);

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= todo.size())
                return;
            const std::size_t flat = todo[k];
            const Cell cell = partition.cell(flat);
            const auto started = std::chrono::steady_clock::now();
            CellEntry entry;
            try {
                entry = make_entry(cell, prove_cell(net, cell, prop, cfg));
            } catch (const std::exception &e) {
                entry = CellEntry{};
                entry.index = cell.index;
                entry.bounds = cell.bounds;
                entry.result = verdict_code(Verdict::Unknown);
                entry.note = std::string("error: ") + e.what();
                entry.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now()
                                                             - started)
                                   .count();
            }
            publish(flat, std::move(entry));
        }
    };

    const std::size_t workers = std::min(options.jobs, std::max<std::size_t>(todo.size(), 1));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t i = 0; i < workers; ++i)
            pool.emplace_back(worker);
    }

    map.entries.reserve(slots.size());
    for (auto &slot : slots)
        map.entries.push_back(std::move(*slot));
    return map;
}

// ---------------------------------------------------------------- file format

namespace {

json header_json(const ProofMap &map)
{
    json axes = json::array();
    json order = json::array();
    json grid = json::array();
    const auto &p = map.partition;
    for (std::size_t a = 0; a < p.dims(); ++a) {
        const auto &axis = p.axes()[a];
        axes.push_back(json{{"name", axis.name},
                            {"lo", axis.range.lo},
                            {"hi", axis.range.hi},
                            {"latent", axis.latent}});
        order.push_back(axis.name);
        grid.push_back(p.counts()[a]);
    }
    json h;
    h["format"] = "gv-proofmap";
    h["version"] = 1;
    h["domain"] = std::move(axes);
    h["grid"] = std::move(grid);
    h["coordinate_order"] = std::move(order);
    h["epsilon"] = map.property.epsilon;
    h["ground_truth_coord"] = map.property.ground_truth_coord;
    h["delta"] = map.solver.delta;
    h["max_splits"] = map.solver.max_splits;
    h["candidate_points_per_box"] = map.solver.candidate_points_per_box;
    h["seed"] = map.solver.seed;
    h["time_limit_s"] = map.solver.time_limit_s;
    h["presample_points"] = map.presample_points;
    return h;
}

json entry_json(const CellEntry &e)
{
    json j;
    j["index"] = e.index;
    json bounds = json::array();
    for (const auto &iv : e.bounds)
        bounds.push_back(json::array({iv.lo, iv.hi}));
    j["bounds"] = std::move(bounds);
    j["result"] = e.result;
    if (e.witness)
        j["witness"] = json{{"point", e.witness->point},
                            {"output", e.witness->output},
                            {"violation", e.witness->violation}};
    j["time_s"] = e.time_s;
    j["boxes_explored"] = e.boxes_explored;
    j["boxes_pruned"] = e.boxes_pruned;
    j["presampled"] = e.presampled;
    if (!e.note.empty())
        j["note"] = e.note;
    return j;
}

template <class T> T get(const json &j, const char *key)
{
    if (!j.contains(key))
        throw FormatError(std::string("proof map: missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw FormatError(std::string("proof map: bad field '") + key + "': " + e.what());
    }
}

ProofMap header_from_json(const json &h)
{
    if (get<std::string>(h, "format") != "gv-proofmap")
        throw FormatError("not a gv-proofmap file");
    if (get<int>(h, "version") != 1)
        throw FormatError("unsupported proof map version");
    std::vector<Axis> axes;
    for (const auto &a : h.at("domain"))
        axes.push_back(Axis{get<std::string>(a, "name"),
                            {get<double>(a, "lo"), get<double>(a, "hi")},
                            get<bool>(a, "latent")});
    auto grid = get<std::vector<std::size_t>>(h, "grid");
    CorrectnessProperty prop{get<double>(h, "epsilon"), get<std::size_t>(h, "ground_truth_coord")};
    SolverConfig cfg;
    cfg.delta = get<double>(h, "delta");
    cfg.max_splits = get<std::uint64_t>(h, "max_splits");
    cfg.candidate_points_per_box = get<std::size_t>(h, "candidate_points_per_box");
    cfg.seed = get<std::uint64_t>(h, "seed");
    cfg.time_limit_s = get<double>(h, "time_limit_s");
    try {
        return ProofMap{Partition(std::move(axes), std::move(grid)), prop, cfg,
                        get<std::size_t>(h, "presample_points"), {}};
    } catch (const FormatError &) {
        throw;
    } catch (const Error &e) {
        throw FormatError(std::string("proof map header: ") + e.what());
    }
}

CellEntry entry_from_json(const json &j)
{
    CellEntry e;
    e.index = get<std::vector<std::size_t>>(j, "index");
    for (const auto &b : j.at("bounds")) {
        if (!b.is_array() || b.size() != 2)
            throw FormatError("proof map: bounds must be [lo, hi] pairs");
        e.bounds.push_back({b[0].get<double>(), b[1].get<double>()});
    }
    e.result = get<int>(j, "result");
    verdict_from_code(e.result);
    if (j.contains("witness")) {
        const auto &w = j["witness"];
        e.witness = Witness{get<std::vector<double>>(w, "point"), get<double>(w, "output"),
                            get<double>(w, "violation")};
    }
    e.time_s = get<double>(j, "time_s");
    e.boxes_explored = get<std::uint64_t>(j, "boxes_explored");
    e.boxes_pruned = get<std::uint64_t>(j, "boxes_pruned");
    e.presampled = get<bool>(j, "presampled");
    if (j.contains("note"))
        e.note = get<std::string>(j, "note");
    return e;
}

} // namespace

std::string proofmap_header_line(const ProofMap &map)
{
    return header_json(map).dump() + "\n";
}

std::string proofmap_entry_line(const CellEntry &entry)
{
    return entry_json(entry).dump() + "\n";
}

std::string serialize_proofmap(const ProofMap &map)
{
    std::string out = proofmap_header_line(map);
    for (const auto &e : map.entries)
        out += proofmap_entry_line(e);
    return out;
}

std::string serialize_proofmap_without_timing(const ProofMap &map)
{
    ProofMap copy = map;
    for (auto &e : copy.entries)
        e.time_s = 0.0;
    return serialize_proofmap(copy);
}

LoadedProofMap parse_proofmap(const std::string &text)
{
    std::vector<std::string> lines;
    std::size_t pos = 0;
    bool last_terminated = true;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string::npos) {
            lines.push_back(text.substr(pos));
            last_terminated = false;
            break;
        }
        lines.push_back(text.substr(pos, end - pos));
        pos = end + 1;
    }
    if (lines.empty())
        throw FormatError("proof map file is empty");

    json header;
    try {
        header = json::parse(lines[0]);
    } catch (const json::parse_error &e) {
        throw FormatError(std::string("proof map header is not valid JSON: ") + e.what());
    }
    LoadedProofMap loaded{header_from_json(header), false};
    auto &map = loaded.map;

    std::vector<std::optional<CellEntry>> slots(map.partition.size());
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty())
            continue;
        json j;
        try {
            j = json::parse(lines[i]);
        } catch (const json::parse_error &e) {
            if (i + 1 == lines.size() && !last_terminated)
                break; // interrupted write
            throw FormatError("proof map line " + std::to_string(i + 1) + ": " + e.what());
        }
        CellEntry e = entry_from_json(j);
        std::size_t flat = 0;
        try {
            flat = map.partition.flat_index(e.index);
        } catch (const Error &err) {
            throw FormatError("proof map line " + std::to_string(i + 1) + ": " + err.what());
        }
        if (e.bounds != map.partition.cell(flat).bounds)
            throw FormatError("proof map line " + std::to_string(i + 1)
                              + ": bounds disagree with the header grid");
        if (slots[flat])
            throw FormatError("proof map line " + std::to_string(i + 1) + ": duplicate cell");
        slots[flat] = std::move(e);
    }
    loaded.complete = true;
    for (auto &slot : slots) {
        if (slot)
            map.entries.push_back(std::move(*slot));
        else
            loaded.complete = false;
    }
    return loaded;
}

LoadedProofMap load_proofmap(const std::filesystem::path &path)
{
    try {
        return parse_proofmap(read_file_text(path));
    } catch (const FormatError &e) {
        throw FormatError("'" + path.string() + "': " + e.what());
    }
}

ProofMap load_complete_proofmap(const std::filesystem::path &path)
{
    auto loaded = load_proofmap(path);
    if (!loaded.complete)
        throw FormatError("'" + path.string() + "' is missing cells ("
                          + std::to_string(loaded.map.entries.size()) + " of "
                          + std::to_string(loaded.map.partition.size()) + " present)");
    return std::move(loaded.map);
}

void save_proofmap(const ProofMap &map, const std::filesystem::path &path)
{
    auto tmp = path;
    tmp += ".tmp";
    write_file(tmp, serialize_proofmap(map));
    std::filesystem::rename(tmp, path);
}

bool same_setup(const ProofMap &a, const ProofMap &b)
{
    return proofmap_header_line(a) == proofmap_header_line(b);
}

} // namespace gv
