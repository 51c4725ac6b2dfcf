#pragma once

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

namespace gv::cli {

/// Record of one CLI invocation: resolved parameters, digests of the files
/// read, files written and wall-clock stamps.
class RunManifest {
public:
    explicit RunManifest(std::string subcommand);

    nlohmann::ordered_json &parameters() { return _params; }

    void add_input(const std::filesystem::path &path);
    void add_output(const std::filesystem::path &path);

    /// Stamps the finish time and writes the manifest as JSON.
    void write(const std::filesystem::path &path, int exit_code);

    /// The manifest without wall-clock stamps, for rerun comparisons.
    nlohmann::ordered_json stable_json() const;

private:
    std::string _subcommand;
    nlohmann::ordered_json _params = nlohmann::ordered_json::object();
    nlohmann::ordered_json _inputs = nlohmann::ordered_json::array();
    std::vector<std::string> _outputs;
    std::string _started;
};

std::string sha256_file(const std::filesystem::path &path);
std::string utc_timestamp(std::chrono::system_clock::time_point t);

} // namespace gv::cli
