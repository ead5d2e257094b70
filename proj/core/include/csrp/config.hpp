#ifndef CSRP_CONFIG_HPP
#define CSRP_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "csrp/airy.hpp"
#include "csrp/lie_algebra.hpp"
#include "csrp/splitting.hpp"

namespace csrp {

struct ModelConfig {
    int null_modes = 0;
    std::uint64_t seed = 1;
};

struct FockConfig {
    int degree = 4;
};

struct PartitionConfig {
    double eps = 0.1;
    double lambda = 0.5;
    int n_max = 256;
    bool bf_order = true;  // "bf": O_B factor applied first (rightmost)
    bool compute_direct = true;
};

struct SweepConfig {
    std::vector<double> eps;
    std::vector<double> lambda;
    std::vector<int> degree;
    std::vector<std::uint64_t> seeds;
    std::vector<double> n_amplitude;
    int n_max = 64;
    bool compute_direct = false;
};

// Parsed, validated experiment configuration. Unknown keys anywhere are a
// parse error: silent misconfiguration would invalidate convergence studies.
struct ExperimentConfig {
    nlohmann::json raw;
    std::string hash;

    LieAlgebraSpec lie;
    SplittingSpec splitting;
    ModelConfig model;
    FockConfig fock;
    PartitionConfig partition;
    AiryConfig airy;
    std::optional<SweepConfig> sweep;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// FNV-1a 64 over the canonical (sorted-key) JSON dump, as a hex string.
std::string config_hash(const nlohmann::json& j);

// Shortest round-trip decimal formatting used in every CSV/JSON we write.
std::string format_double(double v);

}  // namespace csrp

#endif
