// gv: command-line driver for dataset generation, decoding, per-cell
// verification, proof-map construction and reporting.
//
// Exit codes: 0 success, 1 counterexample found (verify-cell), 2 usage or
// input validation error, 3 runtime failure.

#include "run_manifest.hpp"

#include "genverify/error.hpp"
#include "genverify/fixtures.hpp"
#include "genverify/heatmap.hpp"
#include "genverify/manifest.hpp"
#include "genverify/partition.hpp"
#include "genverify/pnm.hpp"
#include "genverify/proofmap.hpp"
#include "genverify/scene.hpp"
#include "genverify/verifier.hpp"
#include "genverify/version.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace gv::cli {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitSat = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

/// Bad argument or unusable input file, detected before any compute.
class UsageError : public Error {
public:
    UsageError(const std::string &flag, const std::string &what) : Error(flag + ": " + what) {}
};

std::optional<std::uint64_t> env_seed()
{
    const char *raw = std::getenv("GV_SEED");
    if (!raw || !*raw)
        return std::nullopt;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(raw, &used, 0);
        if (raw[used] != '\0')
            throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception &) {
        throw UsageError("GV_SEED", std::string("not an integer: '") + raw + "'");
    }
}

std::uint64_t resolve_seed(std::uint64_t flag_value)
{
    return env_seed().value_or(flag_value);
}

template <class F> auto checked(const std::string &flag, F &&f) -> decltype(f())
{
    try {
        return f();
    } catch (const UsageError &) {
        throw;
    } catch (const std::exception &e) {
        throw UsageError(flag, e.what());
    }
}

fs::path resolve_input(const std::string &flag, const std::string &value)
{
    if (fs::exists(value))
        return value;
    if (fs::exists(value + ".json"))
        return value + ".json";
    throw UsageError(flag, "cannot read '" + value + "'");
}

struct LoadedNet {
    ComposedNetwork net;
    std::vector<fs::path> files;
};

/// Composed network from a gv-composed manifest path (".json" optional) or
/// one of the built-in fixtures "identity" and "bias".
LoadedNet load_net(const std::string &flag, const std::string &value)
{
    if (value == "identity")
        return {fixtures::identity(), {}};
    if (value == "bias")
        return {fixtures::constant_bias(1.0), {}};
    const auto path = resolve_input(flag, value);
    return checked(flag, [&] {
        auto net = load_composed(path);
        return LoadedNet{std::move(net), {path}};
    });
}

std::size_t truth_coord(const std::vector<Axis> &axes, const std::string &name)
{
    for (std::size_t i = 0; i < axes.size(); ++i)
        if (axes[i].name == name)
            return i;
    throw UsageError("--truth", "no axis named '" + name + "'");
}

json axes_json(const std::vector<Axis> &axes)
{
    json out = json::array();
    for (const auto &a : axes)
        out.push_back({{"name", a.name}, {"lo", a.range.lo}, {"hi", a.range.hi}});
    return out;
}

fs::path manifest_path(const std::string &explicit_path, const std::string &primary_output,
                       const std::string &subcommand)
{
    if (!explicit_path.empty())
        return explicit_path;
    if (!primary_output.empty())
        return primary_output + ".run.json";
    return "gv-" + subcommand + ".run.json";
}

// ------------------------------------------------------------------ options

struct Common {
    std::string run_manifest;
};

struct DatasetOpts {
    std::string out;
    std::size_t n = 10000;
    std::string range = "d=[-3,0];theta=[-0.1,0.2]";
    double break_prob = 0.5;
    double break_min = 2.0;
    double break_max = 8.0;
    std::uint64_t seed = 0x5eed;
};

struct RenderOpts {
    double d = 0.0;
    double theta = 0.0;
    double break_w = 0.0;
    std::string out;
};

struct DecodeOpts {
    std::string net;
    std::optional<double> d;
    std::optional<double> theta;
    std::optional<double> z;
    std::string point;
    std::string out;
};

struct SolveOpts {
    std::string net;
    double epsilon = 0.25;
    double delta = 1e-3;
    std::uint64_t max_splits = 200000;
    std::size_t probes = 6;
    double timeout = 300.0;
    std::uint64_t seed = 0x5eed;
    std::string truth = "d";
};

struct VerifyOpts : SolveOpts {
    std::string cell;
    std::string out;
    std::string witness_image;
};

struct ProofmapOpts : SolveOpts {
    std::string grid;
    std::string range;
    std::size_t jobs = 5;
    std::size_t presample = 1;
    std::string out = "proofmap.jsonl";
    bool resume = false;
};

struct HeatmapOpts {
    std::string map;
    std::string mode = "results";
    std::size_t scale = 16;
    std::string out;
};

struct StatsOpts {
    std::string map;
};

struct FixtureOpts {
    std::string kind = "identity";
    std::string out;
    std::string range = "d=[-3,-0.37];theta=[-0.03,0.17]";
    std::uint64_t seed = 7;
};

void add_solver_flags(CLI::App *cmd, SolveOpts &o)
{
    cmd->add_option("--net", o.net, "Composed network manifest, or 'identity' / 'bias'")
        ->required();
    cmd->add_option("--epsilon", o.epsilon, "Correctness tolerance")->capture_default_str();
    cmd->add_option("--delta", o.delta, "Minimum box width per dimension")->capture_default_str();
    cmd->add_option("--max-splits", o.max_splits, "Explored-box budget per cell")
        ->capture_default_str();
    cmd->add_option("--probes", o.probes, "Concrete probe points per box")->capture_default_str();
    cmd->add_option("--timeout", o.timeout, "Per-cell time limit in seconds (0 = none)")
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "Probe seed (GV_SEED overrides)")->capture_default_str();
    cmd->add_option("--truth", o.truth, "Axis holding the ground truth")->capture_default_str();
}

std::pair<CorrectnessProperty, SolverConfig> solver_setup(const SolveOpts &o,
                                                          const std::vector<Axis> &axes)
{
    CorrectnessProperty prop{o.epsilon, truth_coord(axes, o.truth)};
    SolverConfig cfg;
    cfg.delta = o.delta;
    cfg.max_splits = o.max_splits;
    cfg.candidate_points_per_box = o.probes;
    cfg.time_limit_s = o.timeout;
    cfg.seed = resolve_seed(o.seed);
    checked("--epsilon", [&] { validate(prop); });
    checked("--delta/--max-splits/--probes/--timeout", [&] { validate(cfg); });
    return {prop, cfg};
}

json solver_json(const CorrectnessProperty &prop, const SolverConfig &cfg)
{
    return {{"epsilon", prop.epsilon},
            {"ground_truth_coord", prop.ground_truth_coord},
            {"delta", cfg.delta},
            {"max_splits", cfg.max_splits},
            {"candidate_points_per_box", cfg.candidate_points_per_box},
            {"time_limit_s", cfg.time_limit_s},
            {"seed", cfg.seed}};
}

// ---------------------------------------------------------------- commands

int cmd_dataset(const DatasetOpts &o, RunManifest &run)
{
    const auto axes = checked("--range", [&] { return parse_ranges(o.range); });
    DatasetSpec spec;
    spec.n = o.n;
    spec.break_prob = o.break_prob;
    spec.break_width = {o.break_min, o.break_max};
    spec.seed = resolve_seed(o.seed);
    bool have_d = false, have_theta = false;
    for (const auto &a : axes) {
        if (a.name == "d") {
            spec.d_range = a.range;
            have_d = true;
        } else if (a.name == "theta") {
            spec.theta_range = a.range;
            have_theta = true;
        } else {
            throw UsageError("--range", "unknown axis '" + a.name + "' (expected d, theta)");
        }
    }
    if (!have_d || !have_theta)
        throw UsageError("--range", "both d and theta ranges are required");
    checked("--n/--break-*", [&] { return sample_labels(DatasetSpec{1, spec.d_range, spec.theta_range, spec.break_prob, spec.break_width, spec.seed}); });

    run.parameters() = {{"out", o.out},
                        {"n", spec.n},
                        {"ranges", axes_json(axes)},
                        {"break_prob", spec.break_prob},
                        {"break_width", {spec.break_width.lo, spec.break_width.hi}},
                        {"seed", spec.seed}};
    const auto labels = generate_dataset(o.out, spec);
    run.add_output(fs::path(o.out) / "labels.csv");
    std::size_t broken = 0;
    for (const auto &l : labels)
        broken += l.break_w > 0.0;
    std::cout << "wrote " << labels.size() << " images (" << broken << " with breaks) to "
              << o.out << "\n";
    return kExitOk;
}

int cmd_render(const RenderOpts &o, RunManifest &run)
{
    if (!(o.break_w >= 0.0 && o.break_w <= kMaxBreakWidth))
        throw UsageError("--break-w", "must lie in [0, 16]");
    run.parameters() = {{"d", o.d}, {"theta", o.theta}, {"break_w", o.break_w}, {"out", o.out}};
    write_pgm(o.out, render_label(Label{0, o.d, o.theta, o.break_w}));
    run.add_output(o.out);
    return kExitOk;
}

int cmd_decode(const DecodeOpts &o, RunManifest &run)
{
    const auto path = resolve_input("--net", o.net);
    const NetworkSpec decoder = checked("--net", [&]() -> NetworkSpec {
        const auto text = read_file_text(path);
        if (text.find("\"gv-composed\"") != std::string::npos)
            return load_composed(path).decoder();
        return load_network(path);
    });
    if (decoder.role() != NetworkRole::Decoder)
        throw UsageError("--net", "'" + path.string() + "' is not a decoder");

    std::vector<double> point;
    if (!o.point.empty()) {
        if (o.d || o.theta || o.z)
            throw UsageError("--point", "cannot be combined with --d/--theta/--z");
        std::size_t pos = 0;
        while (pos <= o.point.size()) {
            auto end = o.point.find(',', pos);
            if (end == std::string::npos)
                end = o.point.size();
            point.push_back(
                checked("--point", [&] { return parse_number(o.point.substr(pos, end - pos)); }));
            pos = end + 1;
        }
    } else {
        if (!o.d || !o.theta)
            throw UsageError("--d/--theta", "a configuration needs both d and theta");
        point = {*o.d, *o.theta};
        if (o.z)
            point.push_back(*o.z);
    }
    const auto dim = shape_size(decoder.input_shape());
    if (point.size() != dim)
        throw UsageError(o.point.empty() ? "--z" : "--point",
                         "decoder takes " + std::to_string(dim) + " inputs, got "
                             + std::to_string(point.size()));

    run.add_input(path);
    run.parameters() = {{"net", o.net}, {"point", point}, {"out", o.out}};
    const Tensor image = forward(decoder, Tensor(decoder.input_shape(), point));
    if (image.rank() != 2)
        throw Error("decoder output " + shape_str(image.shape()) + " is not an image");
    write_pgm(o.out, image);
    run.add_output(o.out);
    return kExitOk;
}

int cmd_verify_cell(const VerifyOpts &o, RunManifest &run)
{
    const auto axes = checked("--cell", [&] { return parse_ranges(o.cell); });
    auto loaded = load_net("--net", o.net);
    if (axes.size() != loaded.net.input_dim())
        throw UsageError("--cell", "cell has " + std::to_string(axes.size())
                                       + " axes, network takes "
                                       + std::to_string(loaded.net.input_dim()));
    const auto [prop, cfg] = solver_setup(o, axes);
    for (const auto &f : loaded.files)
        run.add_input(f);

    Cell cell;
    for (const auto &a : axes) {
        cell.bounds.push_back(a.range);
        cell.index.push_back(0);
    }
    run.parameters() = {{"net", o.net}, {"cell", axes_json(axes)}, {"solver", solver_json(prop, cfg)}};

    const CellResult result = prove_cell(loaded.net, cell, prop, cfg);
    std::cout << "verdict: " << verdict_name(result.verdict) << "\n"
              << "boxes explored: " << result.stats.boxes_explored
              << ", pruned: " << result.stats.boxes_pruned
              << ", unresolved: " << result.stats.boxes_unresolved << "\n";
    std::printf("time: %.3f s\n", result.stats.wall_time_s);
    if (!result.note.empty())
        std::cout << "note: " << result.note << "\n";
    if (result.counterexample) {
        const auto &cx = *result.counterexample;
        std::cout << "counterexample:";
        for (std::size_t i = 0; i < axes.size(); ++i)
            std::printf(" %s=%.17g", axes[i].name.c_str(), cx.point[i]);
        std::printf("\noutput: %.17g, violation: %.17g\n", cx.output, cx.violation);
        if (!o.witness_image.empty()) {
            write_pgm(o.witness_image, cx.image);
            run.add_output(o.witness_image);
        }
    }
    if (!o.out.empty()) {
        json j;
        j["verdict"] = verdict_name(result.verdict);
        j["result"] = verdict_code(result.verdict);
        if (result.counterexample)
            j["witness"] = {{"point", result.counterexample->point},
                            {"output", result.counterexample->output},
                            {"violation", result.counterexample->violation}};
        j["boxes_explored"] = result.stats.boxes_explored;
        j["boxes_pruned"] = result.stats.boxes_pruned;
        j["boxes_unresolved"] = result.stats.boxes_unresolved;
        j["time_s"] = result.stats.wall_time_s;
        if (!result.note.empty())
            j["note"] = result.note;
        write_file(o.out, j.dump(2) + "\n");
        run.add_output(o.out);
    }
    return result.verdict == Verdict::Counterexample ? kExitSat : kExitOk;
}

int cmd_proofmap(const ProofmapOpts &o, RunManifest &run)
{
    const auto axes = checked("--range", [&] { return parse_ranges(o.range); });
    const auto grid = checked("--grid", [&] { return parse_grid(o.grid); });
    if (grid.size() != axes.size())
        throw UsageError("--grid", "grid has " + std::to_string(grid.size()) + " counts for "
                                       + std::to_string(axes.size()) + " ranges");
    if (o.jobs < 1)
        throw UsageError("--jobs", "must be at least 1");
    auto loaded = load_net("--net", o.net);
    if (axes.size() != loaded.net.input_dim())
        throw UsageError("--range", "domain has " + std::to_string(axes.size())
                                        + " axes, network takes "
                                        + std::to_string(loaded.net.input_dim()));
    const auto [prop, cfg] = solver_setup(o, axes);
    const Partition partition = checked("--range", [&] { return build_partition(axes, grid); });
    for (const auto &f : loaded.files)
        run.add_input(f);

    ProofMap shell{partition, prop, cfg, o.presample, {}};
    ProofMapOptions options;
    options.jobs = o.jobs;
    options.presample_points = o.presample;

    if (o.resume && fs::exists(o.out)) {
        auto previous = checked("--resume", [&] { return load_proofmap(o.out); });
        if (!same_setup(previous.map, shell))
            throw UsageError("--resume", "'" + o.out + "' was produced with different settings");
        options.completed = previous.map.entries;
        std::cerr << "resuming: " << options.completed.size() << " of " << partition.size()
                  << " cells already solved\n";
    }

    run.parameters() = {{"net", o.net},
                        {"range", axes_json(axes)},
                        {"grid", grid},
                        {"solver", solver_json(prop, cfg)},
                        {"jobs", o.jobs},
                        {"presample_points", o.presample},
                        {"out", o.out}};

    // Checkpoint: header plus finished records, then append as cells finish.
    {
        ProofMap checkpoint = shell;
        checkpoint.entries = options.completed;
        write_file(o.out, serialize_proofmap(checkpoint));
    }
    std::ofstream sink(o.out, std::ios::app | std::ios::binary);
    if (!sink)
        throw Error("cannot append to '" + o.out + "'");
    std::size_t done = options.completed.size();
    options.on_cell = [&](const CellEntry &e) {
        sink << proofmap_entry_line(e);
        sink.flush();
        ++done;
        if (done % 25 == 0 || done == partition.size())
            std::cerr << "\r" << done << "/" << partition.size() << " cells" << std::flush;
    };

    const ProofMap map = build_proofmap(partition, loaded.net, prop, cfg, std::move(options));
    std::cerr << "\n";
    sink.close();
    save_proofmap(map, o.out);
    run.add_output(o.out);
    std::cout << format_counts_table(aggregate(map));
    return kExitOk;
}

int cmd_heatmap(const HeatmapOpts &o, RunManifest &run)
{
    HeatmapMode mode;
    if (o.mode == "results")
        mode = HeatmapMode::Results;
    else if (o.mode == "timing")
        mode = HeatmapMode::Timing;
    else
        throw UsageError("--mode", "expected 'results' or 'timing'");
    if (o.scale < 1)
        throw UsageError("--scale", "must be at least 1");
    const auto path = resolve_input("--map", o.map);
    const ProofMap map = checked("--map", [&] { return load_complete_proofmap(path); });
    checked("--map", [&] { return render_heatmap(map, mode, 1); });
    run.add_input(path);
    run.parameters() = {{"map", o.map}, {"mode", o.mode}, {"scale", o.scale}, {"out", o.out}};
    for (const auto &written : emit_heatmap(map, mode, o.out, o.scale)) {
        run.add_output(written);
        std::cout << written << "\n";
    }
    const auto counts = aggregate(map);
    std::cout << "cells: " << counts.total() << " (UNSAT " << counts.proved << ", SAT "
              << counts.sat << ", Unknown " << counts.unknown << ")\n";
    return kExitOk;
}

int cmd_stats(const StatsOpts &o, RunManifest &run)
{
    const auto path = resolve_input("--map", o.map);
    const ProofMap map = checked("--map", [&] { return load_complete_proofmap(path); });
    run.add_input(path);
    run.parameters() = {{"map", o.map}};
    std::cout << format_counts_table(aggregate(map));
    double total_time = 0.0;
    for (const auto &e : map.entries)
        total_time += e.time_s;
    std::printf("Solve time   %.3f s\n", total_time);
    return kExitOk;
}

int cmd_fixture(const FixtureOpts &o, RunManifest &run)
{
    const auto axes = checked("--range", [&] { return parse_ranges(o.range); });
    const auto seed = resolve_seed(o.seed);
    std::optional<ComposedNetwork> net;
    if (o.kind == "identity")
        net = fixtures::identity(axes.size());
    else if (o.kind == "bias")
        net = fixtures::constant_bias(1.0, axes.size());
    else if (o.kind == "tiny")
        net = fixtures::tracking_tiny(seed, axes);
    else if (o.kind == "exp1")
        net = fixtures::tracking_exp1(seed, axes);
    else
        throw UsageError("--kind", "expected identity, bias, tiny or exp1");
    run.parameters() = {{"kind", o.kind}, {"range", axes_json(axes)}, {"seed", seed}, {"out", o.out}};
    save_composed(*net, o.out);
    run.add_output(o.out);
    std::cout << "wrote " << o.out << "\n";
    return kExitOk;
}

} // namespace
} // namespace gv::cli

int main(int argc, char **argv)
{
    using namespace gv::cli;

    CLI::App app{"gv: verify perception regressors against generative decoders, cell by cell"};
    app.set_version_flag("--version", gv::kVersion);
    app.require_subcommand(1);
    Common common;
    app.add_option("--run-manifest", common.run_manifest,
                   "Where to write the run manifest (default: <output>.run.json)");

    DatasetOpts dataset;
    auto *c_dataset = app.add_subcommand("dataset", "Render a labeled synthetic dataset");
    c_dataset->add_option("--out", dataset.out, "Output directory")->required();
    c_dataset->add_option("--n", dataset.n, "Number of images")->capture_default_str();
    c_dataset->add_option("--range", dataset.range, "Sampling ranges")->capture_default_str();
    c_dataset->add_option("--break-prob", dataset.break_prob, "Probability of a line break")
        ->capture_default_str();
    c_dataset->add_option("--break-min", dataset.break_min, "Smallest break width")
        ->capture_default_str();
    c_dataset->add_option("--break-max", dataset.break_max, "Largest break width")
        ->capture_default_str();
    c_dataset->add_option("--seed", dataset.seed, "Sampling seed (GV_SEED overrides)")
        ->capture_default_str();

    RenderOpts render;
    auto *c_render = app.add_subcommand("render", "Render one scene to PGM");
    c_render->add_option("--d", render.d, "Lateral distance (m)")->required();
    c_render->add_option("--theta", render.theta, "Yaw (rad)")->required();
    c_render->add_option("--break-w", render.break_w, "Line break width")->capture_default_str();
    c_render->add_option("--out", render.out, "Output PGM")->required();

    DecodeOpts decode;
    auto *c_decode = app.add_subcommand("decode", "Decode a configuration into an image");
    c_decode->add_option("--net", decode.net, "Decoder or composed manifest")->required();
    c_decode->add_option("--d", decode.d, "Lateral distance (m)");
    c_decode->add_option("--theta", decode.theta, "Yaw (rad)");
    c_decode->add_option("--z", decode.z, "Latent coordinate");
    c_decode->add_option("--point", decode.point, "Comma-separated decoder input");
    c_decode->add_option("--out", decode.out, "Output PGM")->required();

    VerifyOpts verify;
    auto *c_verify = app.add_subcommand("verify-cell", "Prove or refute the property on one cell");
    add_solver_flags(c_verify, verify);
    c_verify->add_option("--cell", verify.cell, "Cell bounds, e.g. \"d=[-1,-0.5];theta=[0,0.1]\"")
        ->required();
    c_verify->add_option("--out", verify.out, "Write the result as JSON");
    c_verify->add_option("--witness-image", verify.witness_image,
                         "Write the decoded counterexample image (PGM)");

    ProofmapOpts proofmap;
    auto *c_proofmap = app.add_subcommand("proofmap", "Solve every cell of a grid");
    add_solver_flags(c_proofmap, proofmap);
    c_proofmap->add_option("--grid", proofmap.grid, "Cells per axis, e.g. 20x20")->required();
    c_proofmap->add_option("--range", proofmap.range, "Domain, e.g. \"d=[-3,-0.37];theta=[-0.03,0.17]\"")
        ->required();
    c_proofmap->add_option("--jobs", proofmap.jobs, "Cells solved simultaneously")
        ->capture_default_str();
    c_proofmap->add_option("--presample", proofmap.presample,
                           "Probe points per cell before solving (0 disables)")
        ->capture_default_str();
    c_proofmap->add_option("--out", proofmap.out, "Proof-map file")->capture_default_str();
    c_proofmap->add_flag("--resume", proofmap.resume, "Keep finished cells of an existing file");

    HeatmapOpts heatmap;
    auto *c_heatmap = app.add_subcommand("heatmap", "Render a proof map as PPM");
    c_heatmap->add_option("--map", heatmap.map, "Proof-map file")->required();
    c_heatmap->add_option("--mode", heatmap.mode, "results or timing")->capture_default_str();
    c_heatmap->add_option("--scale", heatmap.scale, "Pixels per cell")->capture_default_str();
    c_heatmap->add_option("--out", heatmap.out, "Output PPM")->required();

    StatsOpts stats;
    auto *c_stats = app.add_subcommand("stats", "Print the cell result table of a proof map");
    c_stats->add_option("--map", stats.map, "Proof-map file")->required();

    FixtureOpts fixture;
    auto *c_fixture = app.add_subcommand("fixture", "Write a reference composed network");
    c_fixture->add_option("--kind", fixture.kind, "identity, bias, tiny or exp1")
        ->capture_default_str();
    c_fixture->add_option("--out", fixture.out, "Composed manifest path")->required();
    c_fixture->add_option("--range", fixture.range, "Domain the readout is fitted on")
        ->capture_default_str();
    c_fixture->add_option("--seed", fixture.seed, "Initialization seed (GV_SEED overrides)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    CLI::App *sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    std::string primary;
    if (sub == c_dataset)
        primary = (fs::path(dataset.out) / "dataset").string();
    else if (sub == c_render)
        primary = render.out;
    else if (sub == c_decode)
        primary = decode.out;
    else if (sub == c_verify)
        primary = verify.out;
    else if (sub == c_proofmap)
        primary = proofmap.out;
    else if (sub == c_heatmap)
        primary = heatmap.out;
    else if (sub == c_fixture)
        primary = fixture.out;

    RunManifest run(name);
    int code = kExitOk;
    try {
        if (sub == c_dataset)
            code = cmd_dataset(dataset, run);
        else if (sub == c_render)
            code = cmd_render(render, run);
        else if (sub == c_decode)
            code = cmd_decode(decode, run);
        else if (sub == c_verify)
            code = cmd_verify_cell(verify, run);
        else if (sub == c_proofmap)
            code = cmd_proofmap(proofmap, run);
        else if (sub == c_heatmap)
            code = cmd_heatmap(heatmap, run);
        else if (sub == c_stats)
            code = cmd_stats(stats, run);
        else if (sub == c_fixture)
            code = cmd_fixture(fixture, run);
    } catch (const UsageError &e) {
        std::cerr << "gv " << name << ": " << e.what() << "\n";
        code = kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "gv " << name << ": " << e.what() << "\n";
        code = kExitRuntime;
    }

    try {
        run.write(manifest_path(common.run_manifest, primary, name), code);
    } catch (const std::exception &e) {
        std::cerr << "gv " << name << ": could not write run manifest: " << e.what() << "\n";
        if (code == kExitOk)
            code = kExitRuntime;
    }
    return code;
}
