#include "run_manifest.hpp"

#include "genverify/error.hpp"
#include "genverify/manifest.hpp"
#include "genverify/version.hpp"

#include <openssl/evp.h>

#include <ctime>
#include <memory>

namespace gv::cli {

std::string sha256_file(const std::filesystem::path &path)
{
    const auto bytes = read_file_bytes(path);
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1
        || EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1
        || EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
        throw Error("sha256 failed for '" + path.string() + "'");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::string utc_timestamp(std::chrono::system_clock::time_point t)
{
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunManifest::RunManifest(std::string subcommand)
    : _subcommand(std::move(subcommand)), _started(utc_timestamp(std::chrono::system_clock::now()))
{
}

void RunManifest::add_input(const std::filesystem::path &path)
{
    _inputs.push_back({{"path", path.string()}, {"sha256", sha256_file(path)}});
}

void RunManifest::add_output(const std::filesystem::path &path)
{
    _outputs.push_back(path.string());
}

nlohmann::ordered_json RunManifest::stable_json() const
{
    nlohmann::ordered_json j;
    j["tool"] = "gv";
    j["version"] = kVersion;
    j["subcommand"] = _subcommand;
    j["parameters"] = _params;
    j["inputs"] = _inputs;
    j["outputs"] = _outputs;
    return j;
}

void RunManifest::write(const std::filesystem::path &path, int exit_code)
{
    auto j = stable_json();
    j["exit_code"] = exit_code;
    j["started_at"] = _started;
    j["finished_at"] = utc_timestamp(std::chrono::system_clock::now());
    write_file(path, j.dump(2) + "\n");
}

} // namespace gv::cli
