#ifndef CSRP_MANIFEST_HPP
#define CSRP_MANIFEST_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "csrp/validation.hpp"

namespace csrp {

inline constexpr int kManifestSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "0.1.0";

// Per-run provenance record written next to every output file. Timestamps
// live only here; the data files stay byte-reproducible.
struct RunManifest {
    std::string config_hash;
    std::string command;
    std::vector<std::uint64_t> seeds;
    std::string timestamp;  // ISO-8601, informational only
    std::vector<ValidationReport> checks;
    std::vector<std::string> outputs;

    bool all_pass() const;
    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
};

std::string iso_timestamp_now();
void write_manifest(const RunManifest& m, const std::string& dir);
RunManifest read_manifest(const std::string& dir);

}  // namespace csrp

#endif
