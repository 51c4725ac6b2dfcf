// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include "support.hpp"

#include "genverify/heatmap.hpp"
#include "genverify/manifest.hpp"
#include "genverify/pnm.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#ifndef GV_TEST_DATA_DIR
#error "GV_TEST_DATA_DIR must point at tests/data"
#endif

using namespace gv;
using gvtest::Rng;
using gvtest::TempDir;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void require(bool cond, const std::string &what)
    {
        if (!cond) {
            if (ok)
                detail << "failed: ";
            else
                detail << "; ";
            detail << what;
            ok = false;
        }
    }
};

using Criterion = std::function<void(Outcome &)>;

bool run(const std::string &name, double budget_s, const Criterion &body)
{
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception &e) {
        out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs >= budget_s) {
        std::ostringstream msg;
        msg << "runtime " << secs << " s exceeds " << budget_s << " s";
        out.require(false, msg.str());
    }
    std::printf("%s %-28s %9.2f s  %s\n", out.ok ? "PASS" : "FAIL", name.c_str(), secs,
                out.detail.str().c_str());
    std::fflush(stdout);
    return out.ok;
}

void interval_soundness(Outcome &out)
{
    std::size_t checks = 0, violations = 0;
    for (const auto &kind : gvtest::kLayerKinds) {
        Rng rng(std::hash<std::string>{}(kind) ^ 0xacce97);
        for (int trial = 0; trial < 1000; ++trial) {
            const auto lc = gvtest::random_layer(rng, kind);
            const double spread = trial % 10 == 0 ? 1e-9 : 1.0;
            const auto box = gvtest::random_box(rng, lc.in, 3.0, spread);
            const auto pt = gvtest::random_point_in(rng, box);
            ++checks;
            if (!propagate_layer(lc.layer, box).contains(apply_layer(lc.layer, pt))) {
                ++violations;
                out.require(false, kind + " enclosure misses its point image");
            }
        }
    }
    for (std::uint64_t seed : {11u, 12u, 13u}) {
        const auto net = fixtures::random_tiny(seed);
        Rng rng(seed);
        for (int trial = 0; trial < 1000; ++trial) {
            const auto box = gvtest::random_box(rng, {2}, 3.0, trial % 2 ? 0.5 : 1e-3);
            const auto pt = gvtest::random_point_in(rng, box);
            ++checks;
            if (!propagate_composed(net, box).contains(forward_composed(net, pt))) {
                ++violations;
                out.require(false, "composed seed " + std::to_string(seed));
            }
        }
    }
    out.detail << checks << " checks, " << violations << " violations";
}

void oracle_equivalence(Outcome &out)
{
    const auto p = build_partition(gvtest::exp1_domain(), {20, 20});
    const auto id = aggregate(build_proofmap(p, fixtures::identity(), {0.25, 0}, {}));
    out.require(id.proved == 400 && id.sat == 0 && id.unknown == 0, "identity is not 400/0/0");

    const auto bias_net = fixtures::constant_bias(1.0);
    const CorrectnessProperty prop{0.5, 0};
    const auto bias_map = build_proofmap(p, bias_net, prop, {});
    const auto bias = aggregate(bias_map);
    out.require(bias.proved == 0 && bias.sat == 400 && bias.unknown == 0, "bias is not 0/400/0");
    std::size_t replayed = 0;
    for (const auto &e : bias_map.entries)
        if (e.witness && check_candidate(bias_net, e.witness->point, prop))
            ++replayed;
    out.require(replayed == 400, "not every bias witness replays");
    out.detail << "identity " << id.proved << "/" << id.sat << "/" << id.unknown << ", bias "
               << bias.proved << "/" << bias.sat << "/" << bias.unknown << ", " << replayed
               << " witnesses replayed";
}

void brute_force_agreement(Outcome &out)
{
    const auto domain = gvtest::exp1_domain();
    const Partition part(domain, {5, 5});
    SolverConfig cfg;
    cfg.delta = 1e-3;
    std::size_t decided = 0, skipped = 0, proved = 0, sat = 0, unknown = 0;

    const auto check_net = [&](const ComposedNetwork &net, const std::string &label, double eps) {
        const CorrectnessProperty prop{eps, 0};
        for (const auto &cell : part.cells()) {
            const auto oracle = gvtest::brute_force(net, cell.bounds, 0, 200);
            const auto r = prove_cell(net, cell, prop, cfg);
            const std::string where = label + " eps " + std::to_string(eps) + " " + describe_cell(cell);
            if (r.verdict == Verdict::Counterexample) {
                ++sat;
                out.require(r.counterexample && check_candidate(net, r.counterexample->point, prop),
                            where + " witness does not replay");
            } else if (r.verdict == Verdict::Proved) {
                ++proved;
                out.require(oracle.max_error < prop.epsilon, where + " proved but oracle violates");
            } else {
                ++unknown;
            }
            if (std::abs(oracle.max_error - prop.epsilon) <= 0.02) {
                ++skipped;
                continue;
            }
            ++decided;
            const Verdict expected =
                oracle.max_error >= prop.epsilon ? Verdict::Counterexample : Verdict::Proved;
            out.require(r.verdict == expected, where + " verdict " + verdict_name(r.verdict)
                                                   + " vs oracle " + verdict_name(expected));
        }
    };
    // Same 2 -> 8 -> 16 -> 4 -> 1 architecture throughout: a raw random
    // network (violating everywhere), and a fitted readout at a loose and a
    // tight tolerance (mixed verdicts, cells near the boundary).
    check_net(fixtures::random_tiny(7), "random_tiny(7)", 0.25);
    check_net(fixtures::tracking_tiny(7, domain), "tracking_tiny(7)", 0.25);
    check_net(fixtures::tracking_tiny(1, domain), "tracking_tiny(1)", 0.03);
    out.require(proved > 0 && sat > 0, "expected both verdicts to occur");
    out.detail << decided << " decided cells agree, " << skipped << " within margin; " << proved
               << " proved, " << sat << " SAT, " << unknown << " unknown";
}

std::string table_line(const ResultCounts &c)
{
    return std::to_string(rounded_percent(c.proved, c.total())) + "/"
           + std::to_string(rounded_percent(c.sat, c.total())) + "/"
           + std::to_string(rounded_percent(c.unknown, c.total()));
}

void table_math(Outcome &out)
{
    const auto counts = [](std::size_t a, std::size_t b, std::size_t c) {
        std::vector<int> r;
        r.insert(r.end(), a, -1);
        r.insert(r.end(), b, 1);
        r.insert(r.end(), c, 0);
        return aggregate(r);
    };
    const auto t3 = counts(218, 56, 126);
    const auto t4 = counts(89, 88, 65);
    out.require(table_line(t3) == "55/14/32", "218/56/126 gives " + table_line(t3));
    out.require(table_line(t4) == "37/36/27", "89/88/65 gives " + table_line(t4));
    const auto text = format_counts_table(t3);
    out.require(text.find("55%") != std::string::npos && text.find("14%") != std::string::npos
                    && text.find("32%") != std::string::npos,
                "formatted table lacks 55%/14%/32%");
    out.detail << "218/56/126 -> " << table_line(t3) << ", 89/88/65 -> " << table_line(t4);
}

void order_independence(Outcome &out)
{
    const auto domain = gvtest::exp1_domain();
    const auto net = fixtures::tracking_exp1(3, domain);
    const auto p = build_partition(domain, {20, 20});
    // Tight enough that the map mixes proved, SAT and budget-limited cells.
    const CorrectnessProperty prop{0.1, 0};
    SolverConfig cfg;
    cfg.max_splits = 20000;
    ProofMapOptions one;
    one.jobs = 1;
    ProofMapOptions eight;
    eight.jobs = 8;
    const auto a = build_proofmap(p, net, prop, cfg, one);
    const auto b = build_proofmap(p, net, prop, cfg, eight);
    const auto sa = serialize_proofmap_without_timing(a);
    const auto sb = serialize_proofmap_without_timing(b);
    out.require(sa == sb, "jobs=1 and jobs=8 maps differ");
    const auto c = aggregate(a);
    out.require(c.proved > 0 && c.sat > 0 && c.unknown > 0, "map does not mix all three results");
    out.detail << "20x20 map " << c.proved << "/" << c.sat << "/" << c.unknown << ", " << sa.size()
               << " bytes identical";
}

void format_round_trips(Outcome &out)
{
    TempDir dir("acceptance");

    std::size_t networks = 0;
    for (const auto &net : {fixtures::decoder_exp1(1), fixtures::regressor_exp1(2),
                            fixtures::regressor_exp2(3), fixtures::cvae_encoder(4)}) {
        save_network(net, dir / "a.json");
        save_network(load_network(dir / "a.json"), dir / "b.json");
        out.require(read_file_bytes(dir / "a.bin") == read_file_bytes(dir / "b.bin"),
                    net.name() + " blob changed");
        // Manifests differ only in the blob file name they reference.
        auto text_b = read_file_text(dir / "b.json");
        const auto pos = text_b.find("\"b.bin\"");
        if (pos != std::string::npos)
            text_b.replace(pos, 7, "\"a.bin\"");
        out.require(read_file_text(dir / "a.json") == text_b, net.name() + " manifest changed");
        ++networks;
    }

    const auto domain = gvtest::exp1_domain();
    SolverConfig cfg;
    cfg.max_splits = 2000;
    const auto map = build_proofmap(build_partition(domain, {4, 4}),
                                    fixtures::tracking_tiny(3, domain), {0.1, 0}, cfg);
    save_proofmap(map, dir / "a.jsonl");
    save_proofmap(load_complete_proofmap(dir / "a.jsonl"), dir / "b.jsonl");
    out.require(read_file_bytes(dir / "a.jsonl") == read_file_bytes(dir / "b.jsonl"),
                "proof map changed");

    const auto heat = gvtest::synthetic_map(2, 2, {-1, 1, 0, -1});
    const auto written = emit_heatmap(heat, HeatmapMode::Results, (dir / "h.ppm").string(), 4);
    out.require(written.size() == 1
                    && read_file_bytes(written.front())
                           == read_file_bytes(std::filesystem::path(GV_TEST_DATA_DIR) / "heatmap_2x2.ppm"),
                "2x2 heatmap differs from golden file");
    out.detail << networks << " networks, proof map, golden PPM";
}

} // namespace

int main()
{
    int failures = 0;
    failures += !run("interval-soundness", 60, interval_soundness);
    failures += !run("oracle-equivalence", 300, oracle_equivalence);
    failures += !run("brute-force-agreement", 900, brute_force_agreement);
    failures += !run("table-math", 1, table_math);
    failures += !run("order-independence", 600, order_independence);
    failures += !run("format-round-trips", 10, format_round_trips);
    std::printf("%d of 6 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
