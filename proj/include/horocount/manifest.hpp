#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace horocount {

/// Everything needed to reproduce one CLI run. Written next to every output
/// file as "<output>.manifest.json".
struct RunManifest {
    std::string subcommand;
    std::vector<std::string> argv;
    nlohmann::json parameters = nlohmann::json::object();
    std::optional<std::uint64_t> seed;
    std::string tool_version;
    std::string started;
    std::string finished;
    std::vector<std::string> outputs;

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);

    void write(const std::string& path) const;
    static RunManifest read(const std::string& path);
};

std::string manifest_path_for(const std::string& output_path);
/// UTC time in ISO 8601.
std::string utc_timestamp();
std::string tool_version();

} // namespace horocount
