#include "csrp/config.hpp"

#include <charconv>
#include <fstream>
#include <set>

#include "csrp/errors.hpp"

namespace csrp {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, const std::string& block,
                         const std::set<std::string>& allowed) {
    if (!j.is_object()) throw parse_error("config: block '" + block + "' must be an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key))
            throw parse_error("config: unknown key '" + block + "." + key + "'");
    }
}

template <typename T>
T require(const json& j, const std::string& block, const std::string& key) {
    if (!j.contains(key))
        throw parse_error("config: missing required field '" + block + "." + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw parse_error("config: field '" + block + "." + key + "' has the wrong type");
    }
}

template <typename T>
T get_or(const json& j, const std::string& block, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw parse_error("config: field '" + block + "." + key + "' has the wrong type");
    }
}

Eigen::MatrixXd parse_matrix(const json& j, const std::string& where, int rows, int cols) {
    std::vector<double> flat;
    try {
        flat = j.get<std::vector<double>>();
    } catch (const json::exception&) {
        throw parse_error("config: field '" + where + "' must be a flat numeric array");
    }
    if (static_cast<int>(flat.size()) != rows * cols)
        throw parse_error("config: field '" + where + "' must have " +
                          std::to_string(rows * cols) + " entries (row-major " +
                          std::to_string(rows) + "x" + std::to_string(cols) + ")");
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = flat[r * cols + c];
    return m;
}

LieAlgebraSpec parse_lie(const json& j) {
    reject_unknown_keys(j, "lie_algebra", {"preset", "dim", "f", "rep_matrices"});
    if (j.contains("preset")) return load_preset(require<std::string>(j, "lie_algebra", "preset"));
    const int dim = require<int>(j, "lie_algebra", "dim");
    const auto f = require<std::vector<double>>(j, "lie_algebra", "f");
    std::vector<Eigen::MatrixXcd> rep;
    if (j.contains("rep_matrices")) {
        // one entry per basis element: row-major [re, im] pairs
        for (const auto& mj : j.at("rep_matrices")) {
            const auto flat = mj.get<std::vector<std::vector<double>>>();
            const int d = static_cast<int>(std::llround(std::sqrt(double(flat.size()))));
            if (d * d != static_cast<int>(flat.size()))
                throw parse_error("config: lie_algebra.rep_matrices entries must be square");
            Eigen::MatrixXcd m(d, d);
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) {
                    const auto& p = flat[r * d + c];
                    if (p.size() != 2)
                        throw parse_error(
                            "config: lie_algebra.rep_matrices entries are [re, im] pairs");
                    m(r, c) = std::complex<double>(p[0], p[1]);
                }
            rep.push_back(std::move(m));
        }
    }
    auto spec = make_lie_algebra(dim, f, std::move(rep));
    const auto report = validate_lie(spec);
    if (!report.pass())
        throw validation_error("config: lie_algebra fails validation: " + report.summary());
    return spec;
}

SplittingSpec parse_splitting(const json& j, const LieAlgebraSpec& lie) {
    reject_unknown_keys(j, "splitting",
                        {"preset", "genus", "n_amplitude", "omega", "s_star", "lambda_plus",
                         "lambda", "q_mat", "n_tensor", "v_vec", "vol", "airy_j", "airy_k",
                         "airy_b", "airy_f", "airy_m"});
    const int genus = require<int>(j, "splitting", "genus");
    if (genus < 1) throw parse_error("config: splitting.genus must be >= 1");
    const double amplitude = get_or<double>(j, "splitting", "n_amplitude", 1.0);
    const std::string preset = get_or<std::string>(j, "splitting", "preset", "canonical");
    SplittingSpec spec;
    if (preset == "canonical") {
        spec = canonical_preset(genus, lie, amplitude);
    } else {
        throw parse_error("config: unknown splitting.preset '" + preset + "'");
    }
    const int g = genus;
    if (j.contains("omega")) spec.omega = parse_matrix(j.at("omega"), "splitting.omega", 2 * g, 2 * g);
    if (j.contains("s_star"))
        spec.s_star = parse_matrix(j.at("s_star"), "splitting.s_star", 2 * g, 2 * g);
    if (j.contains("lambda_plus"))
        spec.lambda_plus = parse_matrix(j.at("lambda_plus"), "splitting.lambda_plus", 2 * g, g);
    if (j.contains("lambda")) {
        spec.lambda = parse_matrix(j.at("lambda"), "splitting.lambda", 2 * g, g);
    } else if (j.contains("s_star") || j.contains("lambda_plus")) {
        spec.lambda = spec.s_star * spec.lambda_plus;
    }
    if (j.contains("omega") || j.contains("s_star") || j.contains("lambda"))
        spec.q_mat = derive_Q(spec.omega, spec.s_star, spec.lambda);
    if (j.contains("q_mat")) spec.q_mat = parse_matrix(j.at("q_mat"), "splitting.q_mat", g, g);
    if (j.contains("n_tensor")) {
        const auto flat = require<std::vector<double>>(j, "splitting", "n_tensor");
        if (static_cast<int>(flat.size()) != g * g * g)
            throw parse_error("config: splitting.n_tensor must have genus^3 entries");
        spec.n_tensor = flat;
    }
    if (j.contains("v_vec")) {
        const auto v = require<std::vector<double>>(j, "splitting", "v_vec");
        if (static_cast<int>(v.size()) != g)
            throw parse_error("config: splitting.v_vec must have genus entries");
        spec.v_vec = Eigen::Map<const Eigen::VectorXd>(v.data(), g);
    }
    spec.vol = get_or<double>(j, "splitting", "vol", spec.vol);

    const int m = get_or<int>(j, "splitting", "airy_m", static_cast<int>(spec.airy_k.rows()));
    if (m != spec.airy_k.rows()) {
        spec.airy_k = Eigen::MatrixXd::Identity(m, m);
        // defaults for the new block size: keep B/F shapes consistent
        spec.airy_b.assign(g, Eigen::MatrixXd::Zero(m, m));
        for (int a = 0; a < g; ++a) spec.airy_b[a](a % m, a % m) = 1.0;
        spec.airy_f.assign(lie.dim, Eigen::MatrixXd::Zero(m, m));
    }
    if (j.contains("airy_j")) spec.airy_j = parse_matrix(j.at("airy_j"), "splitting.airy_j", g, g);
    if (j.contains("airy_k"))
        spec.airy_k = parse_matrix(j.at("airy_k"), "splitting.airy_k", m, m);
    if (j.contains("airy_b")) {
        spec.airy_b.clear();
        int idx = 0;
        for (const auto& mj : j.at("airy_b"))
            spec.airy_b.push_back(
                parse_matrix(mj, "splitting.airy_b[" + std::to_string(idx++) + "]", m, m));
    }
    if (j.contains("airy_f")) {
        spec.airy_f.clear();
        int idx = 0;
        for (const auto& mj : j.at("airy_f"))
            spec.airy_f.push_back(
                parse_matrix(mj, "splitting.airy_f[" + std::to_string(idx++) + "]", m, m));
    }

    const auto report = validate_splitting(spec);
    if (!report.pass())
        throw validation_error("config: splitting fails validation: " + report.summary());
    return spec;
}

AiryConfig parse_airy(const json& j) {
    reject_unknown_keys(j, "airy", {"lambda", "method", "samples", "order", "seed"});
    AiryConfig cfg;
    cfg.lambda = get_or<double>(j, "airy", "lambda", 0.0);
    const std::string method = get_or<std::string>(j, "airy", "method", "monte_carlo");
    if (method == "monte_carlo")
        cfg.method = AiryMethod::monte_carlo;
    else if (method == "gauss_quadrature")
        cfg.method = AiryMethod::gauss_quadrature;
    else
        throw parse_error("config: airy.method must be monte_carlo or gauss_quadrature");
    cfg.samples = get_or<std::int64_t>(j, "airy", "samples", cfg.samples);
    cfg.order = get_or<int>(j, "airy", "order", cfg.order);
    cfg.seed = get_or<std::uint64_t>(j, "airy", "seed", cfg.seed);
    return cfg;
}

}  // namespace

std::string config_hash(const nlohmann::json& j) {
    const std::string dump = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

ExperimentConfig parse_config(const nlohmann::json& j) {
    reject_unknown_keys(
        j, "<root>", {"lie_algebra", "splitting", "model", "fock", "partition", "airy", "sweep"});
    if (!j.contains("lie_algebra"))
        throw parse_error("config: missing required block 'lie_algebra'");
    if (!j.contains("splitting")) throw parse_error("config: missing required block 'splitting'");

    ExperimentConfig cfg;
    cfg.raw = j;
    cfg.hash = config_hash(j);
    cfg.lie = parse_lie(j.at("lie_algebra"));
    cfg.splitting = parse_splitting(j.at("splitting"), cfg.lie);

    if (j.contains("model")) {
        const auto& m = j.at("model");
        reject_unknown_keys(m, "model", {"null_modes", "seed"});
        cfg.model.null_modes = get_or<int>(m, "model", "null_modes", 0);
        if (cfg.model.null_modes < 0)
            throw parse_error("config: model.null_modes must be >= 0");
        cfg.model.seed = get_or<std::uint64_t>(m, "model", "seed", 1);
    }
    if (j.contains("fock")) {
        const auto& f = j.at("fock");
        reject_unknown_keys(f, "fock", {"degree"});
        cfg.fock.degree = get_or<int>(f, "fock", "degree", 4);
        if (cfg.fock.degree < 0) throw parse_error("config: fock.degree must be >= 0");
    }
    if (j.contains("partition")) {
        const auto& p = j.at("partition");
        reject_unknown_keys(p, "partition",
                            {"eps", "lambda", "n_max", "order", "compute_direct"});
        cfg.partition.eps = get_or<double>(p, "partition", "eps", cfg.partition.eps);
        cfg.partition.lambda = get_or<double>(p, "partition", "lambda", cfg.partition.lambda);
        cfg.partition.n_max = get_or<int>(p, "partition", "n_max", cfg.partition.n_max);
        if (cfg.partition.eps < 0) throw parse_error("config: partition.eps must be >= 0");
        if (cfg.partition.n_max < 1) throw parse_error("config: partition.n_max must be >= 1");
        const std::string order = get_or<std::string>(p, "partition", "order", "bf");
        if (order == "bf")
            cfg.partition.bf_order = true;
        else if (order == "fb")
            cfg.partition.bf_order = false;
        else
            throw parse_error("config: partition.order must be 'bf' or 'fb'");
        cfg.partition.compute_direct =
            get_or<bool>(p, "partition", "compute_direct", cfg.partition.compute_direct);
    }
    if (j.contains("airy")) cfg.airy = parse_airy(j.at("airy"));
    if (j.contains("sweep")) {
        const auto& s = j.at("sweep");
        reject_unknown_keys(s, "sweep",
                            {"eps", "lambda", "degree", "seeds", "n_amplitude", "n_max",
                             "compute_direct"});
        SweepConfig sw;
        sw.eps = get_or<std::vector<double>>(s, "sweep", "eps", {cfg.partition.eps});
        sw.lambda = get_or<std::vector<double>>(s, "sweep", "lambda", {cfg.partition.lambda});
        sw.degree = get_or<std::vector<int>>(s, "sweep", "degree", {cfg.fock.degree});
        sw.seeds = get_or<std::vector<std::uint64_t>>(s, "sweep", "seeds", {cfg.model.seed});
        sw.n_amplitude = get_or<std::vector<double>>(s, "sweep", "n_amplitude", {});
        sw.n_max = get_or<int>(s, "sweep", "n_max", 64);
        sw.compute_direct = get_or<bool>(s, "sweep", "compute_direct", false);
        cfg.sweep = sw;
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("config: ") + e.what());
    }
    return parse_config(j);
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace csrp
