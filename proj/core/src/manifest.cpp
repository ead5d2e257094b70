#include "csrp/manifest.hpp"

#include <ctime>
#include <filesystem>
#include <fstream>

#include "csrp/errors.hpp"

namespace csrp {

nlohmann::json to_json(const ValidationReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name},
                          {"residual", c.residual},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    return {{"subject", report.subject}, {"pass", report.pass()}, {"checks", checks}};
}

bool RunManifest::all_pass() const {
    for (const auto& r : checks)
        if (!r.pass()) return false;
    return true;
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["schema_version"] = kManifestSchemaVersion;
    j["artifact_version"] = kArtifactVersion;
    j["config_hash"] = config_hash;
    j["command"] = command;
    j["seeds"] = seeds;
    j["timestamp"] = timestamp;
    j["outputs"] = outputs;
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& r : checks) reports.push_back(csrp::to_json(r));
    j["checks"] = reports;
    return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
    RunManifest m;
    m.config_hash = j.value("config_hash", "");
    m.command = j.value("command", "");
    m.timestamp = j.value("timestamp", "");
    if (j.contains("seeds")) m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("outputs")) m.outputs = j.at("outputs").get<std::vector<std::string>>();
    if (j.contains("checks"))
        for (const auto& rj : j.at("checks")) {
            ValidationReport r;
            r.subject = rj.value("subject", "");
            for (const auto& cj : rj.value("checks", nlohmann::json::array()))
                r.checks.push_back({cj.value("name", ""), cj.value("residual", 0.0),
                                    cj.value("tolerance", 0.0), cj.value("pass", false)});
            m.checks.push_back(std::move(r));
        }
    return m;
}

std::string iso_timestamp_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
}

void write_manifest(const RunManifest& m, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::ofstream out(std::filesystem::path(dir) / "manifest.json");
    if (!out) throw numeric_error("cannot write manifest in '" + dir + "'");
    out << m.to_json().dump(2) << "\n";
}

RunManifest read_manifest(const std::string& dir) {
    const auto path = std::filesystem::path(dir) / "manifest.json";
    std::ifstream in(path);
    if (!in) throw validation_error("missing manifest: " + path.string());
    nlohmann::json j;
    in >> j;
    return RunManifest::from_json(j);
}

}  // namespace csrp
