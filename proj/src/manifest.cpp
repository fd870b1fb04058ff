#include "horocount/manifest.hpp"

#include "horocount/errors.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#ifndef HOROCOUNT_VERSION
#define HOROCOUNT_VERSION "unknown"
#endif

namespace horocount {

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j{{"subcommand", subcommand}, {"argv", argv},         {"parameters", parameters},
                     {"tool_version", tool_version}, {"started", started}, {"finished", finished},
                     {"outputs", outputs}};
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
    RunManifest m;
    m.subcommand = j.at("subcommand").get<std::string>();
    m.argv = j.at("argv").get<std::vector<std::string>>();
    m.parameters = j.value("parameters", nlohmann::json::object());
    if (j.contains("seed") && !j["seed"].is_null()) m.seed = j["seed"].get<std::uint64_t>();
    m.tool_version = j.value("tool_version", "");
    m.started = j.value("started", "");
    m.finished = j.value("finished", "");
    m.outputs = j.value("outputs", std::vector<std::string>{});
    return m;
}

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot write manifest " + path);
    out << to_json().dump(2) << '\n';
}

RunManifest RunManifest::read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read manifest " + path);
    return from_json(nlohmann::json::parse(in));
}

std::string manifest_path_for(const std::string& output_path) { return output_path + ".manifest.json"; }

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string tool_version() { return HOROCOUNT_VERSION; }

} // namespace horocount
