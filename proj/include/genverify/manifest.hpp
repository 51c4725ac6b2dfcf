#pragma once

#include "genverify/network.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gv {

/// Network manifest: a JSON document describing the layer chain, plus a
/// companion blob of little-endian float32 parameters (per layer: weights
/// row-major, then bias). Every layer records the byte offset and byte
/// length of its slice of the blob.
inline constexpr int kManifestVersion = 1;

struct SerializedNetwork {
    std::string manifest; // JSON text, newline terminated
    std::vector<std::uint8_t> blob;
};

SerializedNetwork serialize_network(const NetworkSpec &net, const std::string &blob_name);

/// Rebuilds a network from manifest text and blob bytes. Rejects manifests
/// whose offsets are not contiguous or disagree with the blob length.
NetworkSpec deserialize_network(const std::string &manifest, std::span<const std::uint8_t> blob);

/// Writes `<path>` and the blob `<path stem>.bin` next to it.
void save_network(const NetworkSpec &net, const std::filesystem::path &path);
NetworkSpec load_network(const std::filesystem::path &path);

/// Composed manifest: {"format": "gv-composed", "decoder": ..., "regressor": ...}
/// with paths relative to the composed manifest's directory.
void save_composed(const ComposedNetwork &net, const std::filesystem::path &path);
ComposedNetwork load_composed(const std::filesystem::path &path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path &path);
std::string read_file_text(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::span<const std::uint8_t> bytes);
void write_file(const std::filesystem::path &path, const std::string &text);

} // namespace gv
