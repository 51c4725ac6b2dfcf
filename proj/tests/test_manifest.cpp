#include "support.hpp"

#include "genverify/error.hpp"
#include "genverify/manifest.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

using namespace gv;
using gvtest::TempDir;

namespace {

NetworkSpec conv_network()
{
    return NetworkSpec("mixed", NetworkRole::Regressor, {6, 6},
                       {Conv2D{3, 1, 1, {0.125, -0.25, 0.375, 0.5, 0.625, -0.75, 0.875, 1.0, 1.125}, 0.25},
                        TransposedConv2D{2, 2, {1, -1, 0.5, 2}, -0.125}, AvgPool2D{2, 2},
                        Activation{ActivationFn::Tanh}, Reshape{{36}},
                        Dense{36, 1, std::vector<double>(36, 0.03125), {0.5}},
                        Activation{ActivationFn::Sigmoid}},
                       Descale{3.0, -3.0});
}

} // namespace

TEST(Manifest, SaveLoadSaveIsByteIdentical)
{
    TempDir dir("manifest");
    for (const auto &net : {fixtures::decoder_exp1(1), fixtures::regressor_exp2(2), conv_network(),
                            fixtures::cvae_encoder(3)}) {
        save_network(net, dir / "a.json");
        const NetworkSpec loaded = load_network(dir / "a.json");
        save_network(loaded, dir / "b.json");
        EXPECT_EQ(read_file_bytes(dir / "a.bin"), read_file_bytes(dir / "b.bin")) << net.name();
        auto ma = nlohmann::json::parse(read_file_text(dir / "a.json"));
        auto mb = nlohmann::json::parse(read_file_text(dir / "b.json"));
        EXPECT_EQ(ma["blob"], "a.bin");
        ma.erase("blob");
        mb.erase("blob");
        EXPECT_EQ(ma, mb);

        // Re-saving a loaded network under the same name reproduces both files.
        save_network(loaded, dir / "c.json");
        const auto text_c = read_file_text(dir / "c.json");
        save_network(load_network(dir / "c.json"), dir / "c.json");
        EXPECT_EQ(read_file_text(dir / "c.json"), text_c);

        EXPECT_EQ(loaded.shape_trace(), net.shape_trace());
        EXPECT_EQ(loaded.descale(), net.descale());
        EXPECT_EQ(loaded.param_set(), net.param_set());
    }
}

TEST(Manifest, Float32ValuesSurviveExactly)
{
    const NetworkSpec net = conv_network();
    const auto s = serialize_network(net, "x.bin");
    const NetworkSpec back = deserialize_network(s.manifest, s.blob);
    Tensor x({6, 6});
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = 0.05 * static_cast<double>(i);
    // All weights above are float32-representable, so evaluation is unchanged.
    EXPECT_EQ(forward(back, x), forward(net, x));
}

TEST(Manifest, BlobLayoutIsLittleEndianWeightsThenBias)
{
    const NetworkSpec net("d", NetworkRole::Decoder, {2}, {Dense{2, 1, {1.0, -2.0}, {0.5}}});
    const auto s = serialize_network(net, "d.bin");
    ASSERT_EQ(s.blob.size(), 12u);
    const std::vector<std::uint8_t> expected{0x00, 0x00, 0x80, 0x3f, 0x00, 0x00, 0x00, 0xc0,
                                             0x00, 0x00, 0x00, 0x3f};
    EXPECT_EQ(s.blob, expected);
    const auto doc = nlohmann::json::parse(s.manifest);
    EXPECT_EQ(doc["layers"][0]["offset"], 0);
    EXPECT_EQ(doc["layers"][0]["length"], 12);
    EXPECT_EQ(doc["blob_bytes"], 12);
}

TEST(Manifest, RejectsOffsetsThatDisagreeWithBlob)
{
    const auto s = serialize_network(conv_network(), "m.bin");
    const auto base = nlohmann::ordered_json::parse(s.manifest);

    auto shorter = s.blob;
    shorter.pop_back();
    EXPECT_THROW(deserialize_network(s.manifest, shorter), FormatError);
    auto longer = s.blob;
    longer.push_back(0);
    EXPECT_THROW(deserialize_network(s.manifest, longer), FormatError);

    auto gap = base;
    gap["layers"][1]["offset"] = gap["layers"][1]["offset"].get<std::size_t>() + 4;
    EXPECT_THROW(deserialize_network(gap.dump(), s.blob), FormatError);

    auto bad_len = base;
    bad_len["layers"][0]["length"] = 8;
    EXPECT_THROW(deserialize_network(bad_len.dump(), s.blob), FormatError);

    auto bad_total = base;
    bad_total["blob_bytes"] = 4;
    EXPECT_THROW(deserialize_network(bad_total.dump(), s.blob), FormatError);
}

TEST(Manifest, RejectsMalformedDocuments)
{
    const auto s = serialize_network(conv_network(), "m.bin");
    const auto base = nlohmann::ordered_json::parse(s.manifest);
    EXPECT_THROW(deserialize_network("{not json", s.blob), FormatError);

    auto wrong_format = base;
    wrong_format["format"] = "something-else";
    EXPECT_THROW(deserialize_network(wrong_format.dump(), s.blob), FormatError);

    auto wrong_version = base;
    wrong_version["version"] = 99;
    EXPECT_THROW(deserialize_network(wrong_version.dump(), s.blob), FormatError);

    auto unknown_kind = base;
    unknown_kind["layers"][3]["kind"] = "softmax";
    EXPECT_THROW(deserialize_network(unknown_kind.dump(), s.blob), Error);

    auto no_descale = base;
    no_descale["descale"] = nullptr;
    EXPECT_THROW(deserialize_network(no_descale.dump(), s.blob), FormatError);
}

TEST(Manifest, ComposedRoundTrip)
{
    TempDir dir("composed");
    const auto net = fixtures::tracking_tiny(4, gvtest::exp1_domain());
    save_composed(net, dir / "net.json");
    EXPECT_TRUE(std::filesystem::exists(dir / "net.decoder.json"));
    EXPECT_TRUE(std::filesystem::exists(dir / "net.regressor.bin"));
    const auto back = load_composed(dir / "net.json");
    const auto text = read_file_text(dir / "net.decoder.json");
    save_composed(back, dir / "net.json");
    EXPECT_EQ(read_file_text(dir / "net.decoder.json"), text);
    const std::vector<double> c{-1.0, 0.05};
    EXPECT_NEAR(forward_composed(back, c), forward_composed(net, c), 1e-4);
}

TEST(Manifest, MissingFilesAreReported)
{
    TempDir dir("missing");
    EXPECT_THROW(load_network(dir / "nope.json"), Error);
    save_network(fixtures::regressor_exp1(1), dir / "r.json");
    std::filesystem::remove(dir / "r.bin");
    EXPECT_THROW(load_network(dir / "r.json"), Error);
}
