#include "support.hpp"

#include "genverify/error.hpp"
#include "genverify/verifier.hpp"

#include <gtest/gtest.h>

#include <bit>

using namespace gv;
using gvtest::Rng;

namespace {

Cell make_cell(Box bounds)
{
    return Cell{std::move(bounds), {0, 0}};
}

const Box kCell{{-1.0, -0.5}, {0.0, 0.1}};

double volume(const Box &b)
{
    double v = 1.0;
    for (const auto &iv : b)
        v *= iv.width();
    return v;
}

bool interiors_overlap(const Box &a, const Box &b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i].lo < b[i].hi && b[i].lo < a[i].hi))
            return false;
    return true;
}

bool inside(const Box &inner, const Box &outer)
{
    for (std::size_t i = 0; i < inner.size(); ++i)
        if (!outer[i].contains(inner[i]))
            return false;
    return true;
}

} // namespace

TEST(ProveCell, IdentityIsProved)
{
    const auto r = prove_cell(fixtures::identity(), make_cell(kCell), {0.25, 0}, {});
    EXPECT_EQ(r.verdict, Verdict::Proved);
    EXPECT_FALSE(r.counterexample);
    EXPECT_EQ(r.stats.boxes_unresolved, 0u);
    EXPECT_GE(r.stats.boxes_pruned, 1u);
}

TEST(ProveCell, ConstantBiasFailsAtFirstProbe)
{
    const auto r = prove_cell(fixtures::constant_bias(1.0), make_cell(kCell), {0.5, 0}, {});
    ASSERT_EQ(r.verdict, Verdict::Counterexample);
    ASSERT_TRUE(r.counterexample);
    EXPECT_EQ(r.stats.probes, 1u);
    EXPECT_EQ(r.counterexample->point, (std::vector<double>{-0.75, 0.05}));
    EXPECT_DOUBLE_EQ(r.counterexample->violation, 1.0);
    EXPECT_DOUBLE_EQ(r.counterexample->output, 0.25);
    EXPECT_EQ(r.counterexample->image.shape(), (Shape{16, 16}));
    EXPECT_EQ(r.counterexample->image.at(0, 0), -0.75);
}

TEST(ProveCell, RejectsBadInputs)
{
    EXPECT_THROW(prove_cell(fixtures::identity(), make_cell({{-1, 0}}), {0.25, 0}, {}), Error);
    EXPECT_THROW(prove_cell(fixtures::identity(), make_cell(kCell), {0.0, 0}, {}), Error);
    EXPECT_THROW(prove_cell(fixtures::identity(), make_cell(kCell), {0.25, 2}, {}), Error);
    SolverConfig bad;
    bad.delta = 0.0;
    EXPECT_THROW(prove_cell(fixtures::identity(), make_cell(kCell), {0.25, 0}, bad), Error);
    bad = {};
    bad.max_splits = 0;
    EXPECT_THROW(prove_cell(fixtures::identity(), make_cell(kCell), {0.25, 0}, bad), Error);
}

TEST(ProveCell, NonFiniteOutputNamesTheCell)
{
    const NetworkSpec dec("d", NetworkRole::Decoder, {2}, {Dense{2, 1, {1e308, 0.0}, {0.0}}});
    const NetworkSpec reg("r", NetworkRole::Regressor, {1}, {Dense{1, 1, {1e308}, {0.0}}});
    const ComposedNetwork net(dec, reg);
    Cell cell{kCell, {3, 4}};
    try {
        prove_cell(net, cell, {0.25, 0}, {});
        FAIL() << "no error raised";
    } catch (const VerifierError &e) {
        EXPECT_NE(std::string(e.what()).find("cell (3,4)"), std::string::npos) << e.what();
    }
}

TEST(ProveCell, BudgetExhaustionIsUnknown)
{
    const auto net = fixtures::tracking_tiny(3, gvtest::exp1_domain());
    SolverConfig cfg;
    cfg.max_splits = 3;
    // A tolerance the readout meets everywhere but not by a wide margin.
    const auto r = prove_cell(net, make_cell({{-3.0, -0.37}, {-0.03, 0.17}}), {10.0, 0}, cfg);
    if (r.verdict == Verdict::Unknown) {
        EXPECT_TRUE(r.stats.budget_exhausted);
        EXPECT_EQ(r.stats.boxes_explored, 3u);
        EXPECT_FALSE(r.note.empty());
    } else {
        EXPECT_EQ(r.verdict, Verdict::Proved);
    }
    SolverConfig tight;
    tight.max_splits = 1;
    const auto u = prove_cell(fixtures::identity(), make_cell(kCell), {0.01, 0}, tight);
    EXPECT_EQ(u.verdict, Verdict::Unknown);
    EXPECT_TRUE(u.stats.budget_exhausted);
}

TEST(ProveCell, UnresolvedAtDeltaIsUnknown)
{
    // Identity: error enclosure is [-w, w] while the true error is 0, so
    // boxes of width >= epsilon never prune; with delta above epsilon the
    // search stops at unresolved boxes.
    SolverConfig cfg;
    cfg.delta = 0.3;
    const auto r = prove_cell(fixtures::identity(), make_cell({{-1.0, -0.5}, {0.0, 0.1}}), {0.1, 0}, cfg);
    EXPECT_EQ(r.verdict, Verdict::Unknown);
    EXPECT_GT(r.stats.boxes_unresolved, 0u);
    EXPECT_FALSE(r.counterexample);
}

TEST(SplitBox, Midpoint)
{
    const auto [a, b] = split_box({{0.0, 1.0}}, 0);
    EXPECT_EQ(a[0], (Interval{0.0, 0.5}));
    EXPECT_EQ(b[0], (Interval{0.5, 1.0}));
    EXPECT_THROW(split_box({{0.5, 0.5}}, 0), Error);
    EXPECT_THROW(split_box({{0.0, 1.0}}, 1), Error);
}

TEST(SplitBox, WidestDimension)
{
    EXPECT_EQ(widest_dimension({{0, 4}, {0, 1}}), 0u);
    EXPECT_EQ(widest_dimension({{0, 1}, {0, 4}}), 1u);
    EXPECT_EQ(widest_dimension({{0, 1}, {0, 1}}), 0u);
}

TEST(SplitBox, TenSplitsReachDelta)
{
    Box b{{0.0, 1.0}};
    int splits = 0;
    while (b[0].width() >= 1e-3) {
        b = split_box(b, 0).first;
        ++splits;
    }
    EXPECT_EQ(splits, 10);
}

TEST(ProbePoints, CenterThenCornersThenRandom)
{
    std::mt19937_64 rng(1);
    const Box box{{0.0, 2.0}, {10.0, 11.0}};
    const auto pts = probe_points(box, 7, rng);
    ASSERT_EQ(pts.size(), 7u);
    EXPECT_EQ(pts[0], (std::vector<double>{1.0, 10.5}));
    EXPECT_EQ(pts[1], (std::vector<double>{0.0, 10.0}));
    EXPECT_EQ(pts[2], (std::vector<double>{2.0, 10.0}));
    EXPECT_EQ(pts[3], (std::vector<double>{0.0, 11.0}));
    EXPECT_EQ(pts[4], (std::vector<double>{2.0, 11.0}));
    for (std::size_t i = 5; i < 7; ++i)
        for (std::size_t d = 0; d < 2; ++d)
            EXPECT_TRUE(box[d].contains(pts[i][d]));
    // Corners are skipped above three dimensions.
    const Box wide{{0, 1}, {0, 1}, {0, 1}, {0, 1}};
    const auto q = probe_points(wide, 2, rng);
    EXPECT_EQ(q[0], (std::vector<double>{0.5, 0.5, 0.5, 0.5}));
}

TEST(CheckCandidate, FixtureExamples)
{
    Rng rng(2);
    for (int i = 0; i < 100; ++i) {
        const std::vector<double> c{rng.uniform(-3, 0), rng.uniform(-0.1, 0.2)};
        EXPECT_FALSE(check_candidate(fixtures::identity(), c, {0.25, 0}));
        const auto v = check_candidate(fixtures::constant_bias(1.0), c, {0.5, 0});
        ASSERT_TRUE(v);
        EXPECT_NEAR(v->magnitude, 1.0, 1e-15);
    }
    // The boundary |error| == epsilon counts as a violation.
    EXPECT_TRUE(check_candidate(fixtures::constant_bias(1.0), std::vector<double>{-2.0, 0.0}, {1.0, 0}));
}

TEST(Soundness, ProvedCellsHaveNoSampledViolation)
{
    std::size_t proved = 0, sat = 0;
    const auto domain = gvtest::exp1_domain();
    for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
        const auto net = fixtures::tracking_tiny(seed, domain);
        const Partition part(domain, {3, 2});
        for (double eps : {0.15, 0.3}) {
            for (const auto &cell : part.cells()) {
                SolverConfig cfg;
                cfg.max_splits = 20000;
                const CorrectnessProperty prop{eps, 0};
                const auto r = prove_cell(net, cell, prop, cfg);
                if (r.verdict == Verdict::Counterexample) {
                    ++sat;
                    const auto v = check_candidate(net, r.counterexample->point, prop);
                    ASSERT_TRUE(v);
                    EXPECT_EQ(std::bit_cast<std::uint64_t>(v->output),
                              std::bit_cast<std::uint64_t>(r.counterexample->output));
                    EXPECT_EQ(v->magnitude, r.counterexample->violation);
                    const Tensor img = forward(net.decoder(), Tensor::vector(r.counterexample->point));
                    EXPECT_EQ(img, r.counterexample->image);
                    for (std::size_t d = 0; d < 2; ++d)
                        EXPECT_TRUE(cell.bounds[d].contains(r.counterexample->point[d]));
                }
                if (r.verdict != Verdict::Proved)
                    continue;
                ++proved;
                Rng rng(seed * 1000 + proved);
                for (int i = 0; i < 100000; ++i) {
                    const std::vector<double> c{rng.uniform(cell.bounds[0].lo, cell.bounds[0].hi),
                                                rng.uniform(cell.bounds[1].lo, cell.bounds[1].hi)};
                    ASSERT_FALSE(check_candidate(net, c, prop))
                        << "violation inside a proved cell at (" << c[0] << "," << c[1] << ")";
                }
            }
        }
    }
    EXPECT_GT(proved, 0u);
    EXPECT_GT(sat, 0u);
}

TEST(Monotonicity, EpsilonOrdering)
{
    const auto domain = gvtest::exp1_domain();
    const auto net = fixtures::tracking_tiny(2, domain);
    const Partition part(domain, {4, 2});
    SolverConfig cfg;
    cfg.max_splits = 50000;
    const double eps = 0.2;
    for (const auto &cell : part.cells()) {
        const auto r = prove_cell(net, cell, {eps, 0}, cfg);
        if (r.verdict == Verdict::Proved) {
            for (double larger : {0.25, 0.5, 1.0})
                EXPECT_EQ(prove_cell(net, cell, {larger, 0}, cfg).verdict, Verdict::Proved);
        } else if (r.verdict == Verdict::Counterexample) {
            for (double smaller : {0.15, 0.1}) {
                // The same witness still violates the tighter tolerance...
                EXPECT_TRUE(check_candidate(net, r.counterexample->point, {smaller, 0}));
                // ...so the search must also refute it.
                EXPECT_EQ(prove_cell(net, cell, {smaller, 0}, cfg).verdict, Verdict::Counterexample);
            }
        }
    }
}

TEST(CoverInvariant, UnionOfBoxesIsTheCellAtEveryStep)
{
    const auto domain = gvtest::exp1_domain();
    const auto net = fixtures::tracking_tiny(1, domain);
    const Box cell_box{{-2.0, -1.5}, {0.0, 0.08}};
    const double cell_volume = volume(cell_box);
    std::size_t steps = 0;
    bool ok = true;
    const SearchObserver observer = [&](const SearchSnapshot &snap) {
        ++steps;
        std::vector<const Box *> all;
        for (const auto &b : snap.pruned)
            all.push_back(&b);
        for (const auto &b : snap.pending)
            all.push_back(&b);
        for (const auto &b : snap.unresolved)
            all.push_back(&b);
        // Pending excludes the box currently being processed, which is
        // always split or retired before the next snapshot.
        double total = 0.0;
        for (const auto *b : all) {
            total += volume(*b);
            if (!inside(*b, cell_box))
                ok = false;
        }
        if (std::abs(total - cell_volume) > 1e-12 * cell_volume)
            ok = false;
        if (steps % 16 == 0 || all.size() < 64)
            for (std::size_t i = 0; i < all.size(); ++i)
                for (std::size_t j = i + 1; j < all.size(); ++j)
                    if (interiors_overlap(*all[i], *all[j]))
                        ok = false;
    };
    SolverConfig cfg;
    cfg.max_splits = 3000;
    cfg.delta = 1e-3;
    for (double eps : {0.05, 0.1, 0.3}) {
        steps = 0;
        const auto r = prove_cell(net, make_cell(cell_box), {eps, 0}, cfg, observer);
        EXPECT_TRUE(ok) << "eps " << eps;
        if (r.verdict != Verdict::Counterexample)
            EXPECT_GT(steps, 0u);
    }
}

TEST(Determinism, SameSeedSameAnswer)
{
    const auto domain = gvtest::exp1_domain();
    const auto net = fixtures::tracking_tiny(4, domain);
    const Partition part(domain, {3, 3});
    SolverConfig cfg;
    cfg.max_splits = 5000;
    for (const auto &cell : part.cells()) {
        const auto a = prove_cell(net, cell, {0.1, 0}, cfg);
        const auto b = prove_cell(net, cell, {0.1, 0}, cfg);
        EXPECT_EQ(a.verdict, b.verdict);
        EXPECT_EQ(a.stats.boxes_explored, b.stats.boxes_explored);
        EXPECT_EQ(a.stats.boxes_pruned, b.stats.boxes_pruned);
        ASSERT_EQ(a.counterexample.has_value(), b.counterexample.has_value());
        if (a.counterexample) {
            EXPECT_EQ(a.counterexample->point, b.counterexample->point);
            EXPECT_EQ(a.counterexample->output, b.counterexample->output);
        }
    }
    EXPECT_EQ(cell_rng(7, {1, 2})(), cell_rng(7, {1, 2})());
    EXPECT_NE(cell_rng(7, {1, 2})(), cell_rng(7, {2, 1})());
}

TEST(BruteForce, Exp1CoarseGridAgreesWithDenseSampling)
{
    const auto domain = gvtest::exp1_domain();
    const auto net = fixtures::tracking_exp1(3, domain);
    const Partition part(domain, {5, 5});
    const CorrectnessProperty prop{0.25, 0};
    SolverConfig cfg;
    cfg.delta = 1e-3;
    std::size_t decided = 0;
    for (const auto &cell : part.cells()) {
        const auto oracle = gvtest::brute_force(net, cell.bounds, 0, 200);
        const auto r = prove_cell(net, cell, prop, cfg);
        const double margin = std::abs(oracle.max_error - prop.epsilon);
        SCOPED_TRACE(describe_cell(cell) + " oracle max error " + std::to_string(oracle.max_error)
                     + " verdict " + verdict_name(r.verdict));
        if (r.verdict == Verdict::Counterexample)
            EXPECT_TRUE(check_candidate(net, r.counterexample->point, prop));
        if (r.verdict == Verdict::Proved)
            EXPECT_LT(oracle.max_error, prop.epsilon);
        if (margin <= 0.02)
            continue;
        ++decided;
        EXPECT_EQ(r.verdict, oracle.max_error >= prop.epsilon ? Verdict::Counterexample : Verdict::Proved);
    }
    EXPECT_GT(decided, 0u);
}
