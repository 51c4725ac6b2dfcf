#include "genverify/manifest.hpp"

#include "genverify/error.hpp"

#include <bit>
#include <fstream>
#include <iterator>
#include <json.hpp>

namespace gv {

using json = nlohmann::ordered_json;

namespace {

void put_f32(std::vector<std::uint8_t> &out, double value)
{
    const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(value));
    for (int shift = 0; shift < 32; shift += 8)
        out.push_back(static_cast<std::uint8_t>(bits >> shift));
}

double get_f32(std::span<const std::uint8_t> blob, std::size_t offset)
{
    std::uint32_t bits = 0;
    for (int i = 0; i < 4; ++i)
        bits |= static_cast<std::uint32_t>(blob[offset + static_cast<std::size_t>(i)]) << (8 * i);
    return static_cast<double>(std::bit_cast<float>(bits));
}

json shape_json(const Shape &shape)
{
    json arr = json::array();
    for (auto e : shape)
        arr.push_back(e);
    return arr;
}

Shape parse_shape(const json &j)
{
    if (!j.is_array() || j.empty())
        throw FormatError("shape must be a non-empty array");
    Shape shape;
    for (const auto &e : j) {
        if (!e.is_number_unsigned() || e.get<std::size_t>() == 0)
            throw FormatError("shape extents must be positive integers");
        shape.push_back(e.get<std::size_t>());
    }
    return shape;
}

template <class T> T field(const json &j, const char *key)
{
    if (!j.contains(key))
        throw FormatError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw FormatError(std::string("bad field '") + key + "': " + e.what());
    }
}

void append_params(std::vector<std::uint8_t> &blob, const Layer &layer)
{
    if (const auto *d = std::get_if<Dense>(&layer)) {
        for (double w : d->weights)
            put_f32(blob, w);
        for (double b : d->bias)
            put_f32(blob, b);
    } else if (const auto *c = std::get_if<Conv2D>(&layer)) {
        for (double w : c->weights)
            put_f32(blob, w);
        put_f32(blob, c->bias);
    } else if (const auto *t = std::get_if<TransposedConv2D>(&layer)) {
        for (double w : t->weights)
            put_f32(blob, w);
        put_f32(blob, t->bias);
    }
}

std::vector<double> read_params(std::span<const std::uint8_t> blob, std::size_t offset,
                                std::size_t count)
{
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i)
        values[i] = get_f32(blob, offset + 4 * i);
    return values;
}

} // namespace

SerializedNetwork serialize_network(const NetworkSpec &net, const std::string &blob_name)
{
    SerializedNetwork out;
    json layers = json::array();
    for (const auto &layer : net.layers()) {
        json j;
        j["kind"] = layer_kind(layer);
        if (const auto *d = std::get_if<Dense>(&layer)) {
            j["in"] = d->in;
            j["out"] = d->out;
        } else if (const auto *c = std::get_if<Conv2D>(&layer)) {
            j["kernel"] = c->kernel;
            j["stride"] = c->stride;
            j["padding"] = c->padding;
        } else if (const auto *t = std::get_if<TransposedConv2D>(&layer)) {
            j["kernel"] = t->kernel;
            j["stride"] = t->stride;
        } else if (const auto *p = std::get_if<AvgPool2D>(&layer)) {
            j["window"] = p->window;
            j["stride"] = p->stride;
        } else if (const auto *a = std::get_if<Activation>(&layer)) {
            j["fn"] = activation_name(a->fn);
        } else if (const auto *r = std::get_if<Reshape>(&layer)) {
            j["shape"] = shape_json(r->target);
        }
        j["offset"] = out.blob.size();
        append_params(out.blob, layer);
        j["length"] = out.blob.size() - j["offset"].get<std::size_t>();
        layers.push_back(std::move(j));
    }

    json doc;
    doc["format"] = "gv-network";
    doc["version"] = kManifestVersion;
    doc["name"] = net.name();
    doc["role"] = role_name(net.role());
    doc["param_set"] = net.param_set();
    doc["input_shape"] = shape_json(net.input_shape());
    doc["layers"] = std::move(layers);
    if (const auto &ds = net.descale())
        doc["descale"] = json{{"scale", ds->scale}, {"offset", ds->offset}};
    else
        doc["descale"] = nullptr;
    doc["blob"] = blob_name;
    doc["blob_bytes"] = out.blob.size();
    out.manifest = doc.dump(2) + "\n";
    return out;
}

NetworkSpec deserialize_network(const std::string &manifest, std::span<const std::uint8_t> blob)
{
    json doc;
    try {
        doc = json::parse(manifest);
    } catch (const json::parse_error &e) {
        throw FormatError(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (field<std::string>(doc, "format") != "gv-network")
        throw FormatError("not a gv-network manifest");
    if (field<int>(doc, "version") != kManifestVersion)
        throw FormatError("unsupported manifest version");
    const auto blob_bytes = field<std::size_t>(doc, "blob_bytes");
    if (blob_bytes != blob.size())
        throw FormatError("manifest declares " + std::to_string(blob_bytes) + " blob bytes, blob has "
                          + std::to_string(blob.size()));

    std::vector<Layer> layers;
    std::size_t cursor = 0;
    const auto &jl = doc.at("layers");
    if (!jl.is_array())
        throw FormatError("'layers' must be an array");
    for (std::size_t i = 0; i < jl.size(); ++i) {
        const auto &j = jl[i];
        const auto kind = field<std::string>(j, "kind");
        const auto offset = field<std::size_t>(j, "offset");
        const auto length = field<std::size_t>(j, "length");
        const std::string where = "layer " + std::to_string(i) + " (" + kind + ")";
        if (offset != cursor)
            throw FormatError(where + " offset " + std::to_string(offset) + " expected "
                              + std::to_string(cursor));
        if (length % 4 != 0 || offset + length > blob.size())
            throw FormatError(where + " byte range exceeds the blob");

        Layer layer;
        if (kind == "dense") {
            Dense d;
            d.in = field<std::size_t>(j, "in");
            d.out = field<std::size_t>(j, "out");
            layer = d;
        } else if (kind == "conv2d") {
            Conv2D c;
            c.kernel = field<std::size_t>(j, "kernel");
            c.stride = field<std::size_t>(j, "stride");
            c.padding = field<std::size_t>(j, "padding");
            layer = c;
        } else if (kind == "tconv2d") {
            TransposedConv2D t;
            t.kernel = field<std::size_t>(j, "kernel");
            t.stride = field<std::size_t>(j, "stride");
            layer = t;
        } else if (kind == "avgpool2d") {
            layer = AvgPool2D{field<std::size_t>(j, "window"), field<std::size_t>(j, "stride")};
        } else if (kind == "activation") {
            layer = Activation{parse_activation(field<std::string>(j, "fn"))};
        } else if (kind == "reshape") {
            layer = Reshape{parse_shape(j.at("shape"))};
        } else {
            throw FormatError(where + ": unknown layer kind");
        }

        const std::size_t expected = parameter_count(layer) * 4;
        if (length != expected)
            throw FormatError(where + " declares " + std::to_string(length) + " bytes, needs "
                              + std::to_string(expected));
        auto params = read_params(blob, offset, parameter_count(layer));
        if (auto *d = std::get_if<Dense>(&layer)) {
            const auto split = static_cast<std::ptrdiff_t>(d->in * d->out);
            d->weights.assign(params.begin(), params.begin() + split);
            d->bias.assign(params.begin() + split, params.end());
        } else if (auto *c = std::get_if<Conv2D>(&layer)) {
            c->bias = params.back();
            params.pop_back();
            c->weights = std::move(params);
        } else if (auto *t = std::get_if<TransposedConv2D>(&layer)) {
            t->bias = params.back();
            params.pop_back();
            t->weights = std::move(params);
        }
        layers.push_back(std::move(layer));
        cursor = offset + length;
    }
    if (cursor != blob.size())
        throw FormatError("layers cover " + std::to_string(cursor) + " bytes of a "
                          + std::to_string(blob.size()) + "-byte blob");

    std::optional<Descale> descale;
    if (doc.contains("descale") && !doc["descale"].is_null())
        descale = Descale{field<double>(doc["descale"], "scale"),
                          field<double>(doc["descale"], "offset")};

    try {
        return NetworkSpec(field<std::string>(doc, "name"),
                           parse_role(field<std::string>(doc, "role")),
                           parse_shape(doc.at("input_shape")), std::move(layers), descale,
                           field<std::string>(doc, "param_set"));
    } catch (const ShapeError &e) {
        throw FormatError(std::string("inconsistent network: ") + e.what());
    }
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_file_text(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot open '" + path.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path &path, std::span<const std::uint8_t> bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error("failed writing '" + path.string() + "'");
}

void write_file(const std::filesystem::path &path, const std::string &text)
{
    write_file(path, std::span(reinterpret_cast<const std::uint8_t *>(text.data()), text.size()));
}

void save_network(const NetworkSpec &net, const std::filesystem::path &path)
{
    auto blob_path = path;
    blob_path.replace_extension(".bin");
    const auto serialized = serialize_network(net, blob_path.filename().string());
    write_file(path, serialized.manifest);
    write_file(blob_path, serialized.blob);
}

NetworkSpec load_network(const std::filesystem::path &path)
{
    const auto text = read_file_text(path);
    std::string blob_name;
    try {
        blob_name = json::parse(text).at("blob").get<std::string>();
    } catch (const json::exception &e) {
        throw FormatError("'" + path.string() + "': " + e.what());
    }
    const auto blob = read_file_bytes(path.parent_path() / blob_name);
    try {
        return deserialize_network(text, blob);
    } catch (const FormatError &e) {
        throw FormatError("'" + path.string() + "': " + e.what());
    }
}

void save_composed(const ComposedNetwork &net, const std::filesystem::path &path)
{
    const auto stem = path.stem().string();
    const auto dir = path.parent_path();
    const auto decoder_name = stem + ".decoder.json";
    const auto regressor_name = stem + ".regressor.json";
    save_network(net.decoder(), dir / decoder_name);
    save_network(net.regressor(), dir / regressor_name);
    json doc;
    doc["format"] = "gv-composed";
    doc["version"] = kManifestVersion;
    doc["decoder"] = decoder_name;
    doc["regressor"] = regressor_name;
    write_file(path, doc.dump(2) + "\n");
}

ComposedNetwork load_composed(const std::filesystem::path &path)
{
    json doc;
    try {
        doc = json::parse(read_file_text(path));
    } catch (const json::parse_error &e) {
        throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
    if (field<std::string>(doc, "format") != "gv-composed")
        throw FormatError("'" + path.string() + "' is not a gv-composed manifest");
    const auto dir = path.parent_path();
    try {
        return ComposedNetwork(load_network(dir / field<std::string>(doc, "decoder")),
                               load_network(dir / field<std::string>(doc, "regressor")));
    } catch (const ShapeError &e) {
        throw FormatError("'" + path.string() + "': " + e.what());
    }
}

} // namespace gv
