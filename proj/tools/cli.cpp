#include "cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "csrp/airy.hpp"
#include "csrp/config.hpp"
#include "csrp/covariance.hpp"
#include "csrp/errors.hpp"
#include "csrp/interaction.hpp"
#include "csrp/manifest.hpp"
#include "csrp/partition.hpp"
#include "csrp/wick.hpp"

namespace csrp {

namespace {

namespace fs = std::filesystem;

int thread_cap() {
    if (const char* s = std::getenv("CSRP_THREADS")) {
        const int v = std::atoi(s);
        if (v >= 1) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void write_text(const fs::path& path, const std::string& text) {
    fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw numeric_error("cannot write '" + path.string() + "'");
    out << text;
}

std::string csv_complex_columns(const std::complex<double>& z) {
    return format_double(z.real()) + "," + format_double(z.imag());
}

// ---- polynomial description files --------------------------------------

BoseFactor parse_bose_factor(const nlohmann::json& j, int dim_side, int colors) {
    BoseFactor f;
    f.region = j.value("region", 0);
    if (f.region < 0 || f.region > 1) throw parse_error("poly: bose factor region must be 0 or 1");
    f.color = j.value("color", 0);
    if (f.color < 0 || f.color >= colors) throw parse_error("poly: factor color out of range");
    if (j.contains("vec")) {
        const auto v = j.at("vec").get<std::vector<double>>();
        if (static_cast<int>(v.size()) != dim_side)
            throw parse_error("poly: bose factor vec must have model dimension " +
                              std::to_string(dim_side));
        f.vec = Eigen::Map<const Eigen::VectorXd>(v.data(), dim_side);
    } else {
        const int idx = j.value("index", -1);
        if (idx < 0 || idx >= dim_side) throw parse_error("poly: bose factor index out of range");
        f.vec = Eigen::VectorXd::Unit(dim_side, idx);
    }
    return f;
}

FermiFactor parse_fermi_factor(const nlohmann::json& j, int sector_dim, int colors) {
    FermiFactor f;
    f.region = j.value("region", 0);
    if (f.region < 0 || f.region > 1)
        throw parse_error("poly: fermi factor region must be 0 or 1");
    f.sector = j.value("sector", 0);
    if (f.sector < 0 || f.sector > 1) throw parse_error("poly: fermi factor sector must be 0 or 1");
    f.color = j.value("color", 0);
    if (f.color < 0 || f.color >= colors) throw parse_error("poly: factor color out of range");
    if (j.contains("vec")) {
        const auto v = j.at("vec").get<std::vector<double>>();
        if (static_cast<int>(v.size()) != sector_dim)
            throw parse_error("poly: fermi factor vec must have sector dimension " +
                              std::to_string(sector_dim));
        f.vec = Eigen::Map<const Eigen::VectorXd>(v.data(), sector_dim);
    } else {
        const int idx = j.value("index", -1);
        if (idx < 0 || idx >= sector_dim)
            throw parse_error("poly: fermi factor index out of range");
        f.vec = Eigen::VectorXd::Unit(sector_dim, idx);
    }
    return f;
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("poly file: ") + e.what());
    }
}

BosePoly parse_bose_poly(const nlohmann::json& j, int dim_side, int colors) {
    BosePoly poly;
    for (const auto& mj : j.at("monomials")) {
        BoseMonomial m;
        m.coeff = mj.value("coeff", 1.0);
        for (const auto& fj : mj.value("factors", nlohmann::json::array()))
            m.factors.push_back(parse_bose_factor(fj, dim_side, colors));
        poly.push_back(std::move(m));
    }
    return poly;
}

FermiPoly parse_fermi_poly(const nlohmann::json& j, int sector_dim, int colors) {
    FermiPoly poly;
    for (const auto& mj : j.at("monomials")) {
        FermiMonomial m;
        m.coeff = mj.value("coeff", 1.0);
        for (const auto& fj : mj.value("factors", nlohmann::json::array()))
            m.factors.push_back(parse_fermi_factor(fj, sector_dim, colors));
        poly.push_back(std::move(m));
    }
    return poly;
}

// ---- subcommand payloads -------------------------------------------------

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "runs/latest";
};

RunManifest base_manifest(const ExperimentConfig& cfg, const std::string& command) {
    RunManifest m;
    m.config_hash = cfg.hash;
    m.command = command;
    m.seeds = {cfg.model.seed, cfg.airy.seed};
    m.timestamp = iso_timestamp_now();
    return m;
}

int cmd_validate(const CommonArgs& args) {
    const ExperimentConfig cfg = load_config(args.config_path);
    RunManifest manifest = base_manifest(cfg, "validate");
    manifest.checks.push_back(validate_lie(cfg.lie));
    manifest.checks.push_back(validate_splitting(cfg.splitting));
    const auto bose = build_bose_model(cfg.splitting, cfg.model.null_modes, cfg.model.seed);
    manifest.checks.push_back(bose.report);
    const auto fermi = build_fermi_model(cfg.splitting, cfg.model.null_modes, cfg.model.seed);
    manifest.checks.push_back(fermi.report);
    const auto three = build_three_region_model(cfg.splitting, cfg.model.null_modes,
                                                cfg.model.seed);
    manifest.checks.push_back(three.report);
    manifest.checks.push_back(verify_gluing(three, 25, cfg.model.seed));
    write_manifest(manifest, args.out_dir);
    for (const auto& r : manifest.checks) std::cout << r.summary() << "\n";
    if (!manifest.all_pass()) {
        std::cerr << "validate: FAILED\n";
        return 5;
    }
    std::cout << "validate: all reports pass\n";
    return 0;
}

int cmd_phi(const CommonArgs& args, const std::string& poly_path, double alpha) {
    const ExperimentConfig cfg = load_config(args.config_path);
    const auto model = build_bose_model(cfg.splitting, cfg.model.null_modes, cfg.model.seed);
    const auto poly = parse_bose_poly(load_json_file(poly_path), model.dim_side, cfg.lie.dim);
    const double value = phi(poly, bose_pairing(model, alpha));
    std::cout << format_double(value) << "\n";
    RunManifest manifest = base_manifest(cfg, "phi");
    write_manifest(manifest, args.out_dir);
    write_text(fs::path(args.out_dir) / "phi.json",
               nlohmann::json{{"value", value}, {"alpha", alpha}}.dump(2) + "\n");
    return 0;
}

int cmd_psi(const CommonArgs& args, const std::string& poly_path, double alpha) {
    const ExperimentConfig cfg = load_config(args.config_path);
    const auto model = build_fermi_model(cfg.splitting, cfg.model.null_modes, cfg.model.seed);
    const auto poly = parse_fermi_poly(load_json_file(poly_path), model.sector_dim, cfg.lie.dim);
    const double value = psi(poly, fermi_pairing(model, alpha));
    std::cout << format_double(value) << "\n";
    RunManifest manifest = base_manifest(cfg, "psi");
    write_manifest(manifest, args.out_dir);
    write_text(fs::path(args.out_dir) / "psi.json",
               nlohmann::json{{"value", value}, {"alpha", alpha}}.dump(2) + "\n");
    return 0;
}

int cmd_gram(const CommonArgs& args, const std::string& poly_path) {
    const ExperimentConfig cfg = load_config(args.config_path);
    const auto model = build_bose_model(cfg.splitting, cfg.model.null_modes, cfg.model.seed);
    const auto j = load_json_file(poly_path);
    std::vector<BosePoly> polys;
    for (const auto& pj : j.at("polys"))
        polys.push_back(parse_bose_poly(pj, model.dim_side, cfg.lie.dim));
    const Eigen::MatrixXd g = gram_q(polys, model);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    const double eigmin = es.eigenvalues().minCoeff();
    const double eigmax = es.eigenvalues().maxCoeff();

    std::ostringstream csv;
    for (int r = 0; r < g.rows(); ++r) {
        for (int c = 0; c < g.cols(); ++c) csv << (c ? "," : "") << format_double(g(r, c));
        csv << "\n";
    }
    write_text(fs::path(args.out_dir) / "gram.csv", csv.str());
    write_text(fs::path(args.out_dir) / "gram_eigs.json",
               nlohmann::json{{"eigmin", eigmin}, {"eigmax", eigmax}}.dump(2) + "\n");
    RunManifest manifest = base_manifest(cfg, "gram");
    ValidationReport rp;
    rp.subject = "gram_q";
    rp.add("eigmin_above_-1e-8*eigmax", std::max(0.0, -eigmin),
           1e-8 * std::max(1e-300, eigmax));
    manifest.checks.push_back(rp);
    manifest.outputs = {"gram.csv", "gram_eigs.json"};
    write_manifest(manifest, args.out_dir);
    std::cout << "eigmin=" << format_double(eigmin) << " eigmax=" << format_double(eigmax)
              << "\n";
    return manifest.all_pass() ? 0 : 5;
}

int cmd_gluing(const CommonArgs& args, int trials) {
    const ExperimentConfig cfg = load_config(args.config_path);
    const auto model =
        build_three_region_model(cfg.splitting, cfg.model.null_modes, cfg.model.seed);
    const auto report = verify_gluing(model, trials, cfg.model.seed);
    RunManifest manifest = base_manifest(cfg, "gluing");
    manifest.checks.push_back(model.report);
    manifest.checks.push_back(report);
    write_manifest(manifest, args.out_dir);
    std::cout << report.summary() << "\n";
    return report.pass() ? 0 : 5;
}

int cmd_interaction(const CommonArgs& args) {
    const ExperimentConfig cfg = load_config(args.config_path);
    if (cfg.fock.degree < 3)
        throw contract_error("interaction: fock.degree must be >= 3 for the cubic element");
    const BoseSpace bspace = build_bose_space(cfg.splitting, cfg.lie, cfg.fock.degree);
    const FermiSpace fspace = build_fermi_space(cfg.lie, cfg.splitting.vol);
    const ProductSpace pspace(bspace, fspace);
    const InteractionSet inter = build_interactions(cfg.splitting, cfg.lie, pspace);

    nlohmann::json xi_b = nlohmann::json::array();
    for (int i = 0; i < inter.xi_b.size(); ++i)
        if (inter.xi_b(i) != 0.0) xi_b.push_back({{"index", i}, {"coeff", inter.xi_b(i)}});
    nlohmann::json xi_bf = nlohmann::json::array();
    for (int i = 0; i < inter.xi_bf.size(); ++i)
        if (inter.xi_bf(i) != 0.0) xi_bf.push_back({{"index", i}, {"coeff", inter.xi_bf(i)}});

    // <Omega, O_B^3 Omega>-type moments, logged for inspection.
    Eigen::VectorXd v = bspace.vacuum();
    nlohmann::json moments = nlohmann::json::array();
    Eigen::VectorXd w = v;
    for (int k = 1; k <= 4; ++k) {
        w = inter.o_b.mat * w;
        moments.push_back(bspace.ip(v, w));
    }

    nlohmann::json growth = nlohmann::json::array();
    for (auto [n, c] : inter.bound.growth) growth.push_back({{"n", n}, {"c_n", c}});
    nlohmann::json out{{"xi_b", xi_b},
                       {"xi_bf", xi_bf},
                       {"xi_b_norm", std::sqrt(std::max(0.0, bspace.ip(inter.xi_b, inter.xi_b)))},
                       {"k1", inter.bound.k1},
                       {"k2", inter.bound.k2},
                       {"slack", inter.bound.slack},
                       {"norm_growth", growth},
                       {"c", inter.bound.c},
                       {"vacuum_moments_o_b", moments}};
    write_text(fs::path(args.out_dir) / "interaction.json", out.dump(2) + "\n");
    RunManifest manifest = base_manifest(cfg, "interaction");
    ValidationReport rp;
    rp.subject = "interaction_bound";
    rp.add("spectral_slack", std::max(0.0, -inter.bound.slack), 1e-8);
    manifest.checks.push_back(rp);
    manifest.outputs = {"interaction.json"};
    write_manifest(manifest, args.out_dir);
    std::cout << "k1=" << format_double(inter.bound.k1)
              << " k2=" << format_double(inter.bound.k2)
              << " slack=" << format_double(inter.bound.slack) << "\n";
    return manifest.all_pass() ? 0 : 5;
}

std::string partition_csv(const ExperimentConfig& cfg, const PartitionSequence& seq,
                          const std::vector<double>& wall_ms, bool timing) {
    std::ostringstream csv;
    csv << "config_hash,genus,lie,degree,eps,lambda,order,model_seed,n,re_z,im_z,cauchy,"
           "re_z_direct,im_z_direct";
    if (timing) csv << ",wall_ms";
    csv << "\n";
    for (std::size_t i = 0; i < seq.ns.size(); ++i) {
        csv << cfg.hash << "," << cfg.splitting.genus << "," << cfg.lie.name << ","
            << cfg.fock.degree << "," << format_double(cfg.partition.eps) << ","
            << format_double(cfg.partition.lambda) << ","
            << (cfg.partition.bf_order ? "bf" : "fb") << "," << cfg.model.seed << ","
            << seq.ns[i] << "," << csv_complex_columns(seq.z[i]) << ",";
        if (i < seq.cauchy.size()) csv << format_double(seq.cauchy[i]);
        csv << ",";
        if (seq.has_direct)
            csv << csv_complex_columns(seq.direct);
        else
            csv << ",";
        if (timing) csv << "," << format_double(wall_ms[i]);
        csv << "\n";
    }
    return csv.str();
}

int cmd_partition(const CommonArgs& args, bool timing) {
    const ExperimentConfig cfg = load_config(args.config_path);
    const BoseSpace bspace = build_bose_space(cfg.splitting, cfg.lie, cfg.fock.degree);
    const FermiSpace fspace = build_fermi_space(cfg.lie, cfg.splitting.vol);
    const ProductSpace pspace(bspace, fspace);
    const InteractionSet inter =
        build_interactions(cfg.splitting, cfg.lie, pspace, /*certify=*/false);

    TrotterOptions opt;
    opt.eps = cfg.partition.eps;
    opt.lambda = cfg.partition.lambda;
    opt.n_max = cfg.partition.n_max;
    opt.bf_order = cfg.partition.bf_order;
    opt.compute_direct = cfg.partition.compute_direct;

    PartitionSequence seq;
    std::vector<double> wall_ms;
    {
        // timings per n, kept out of the deterministic CSV unless asked for
        for (int n = 1; n <= opt.n_max; n *= 2) seq.ns.push_back(n);
        for (int n : seq.ns) {
            const auto t0 = std::chrono::steady_clock::now();
            seq.z.push_back(z_n(pspace, inter, opt.eps, opt.lambda, n, opt.bf_order));
            const auto t1 = std::chrono::steady_clock::now();
            wall_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
        for (std::size_t i = 0; i + 1 < seq.z.size(); ++i)
            seq.cauchy.push_back(std::abs(seq.z[i] - seq.z[i + 1]));
        if (opt.compute_direct) {
            seq.direct = z_direct(pspace, inter, opt.eps, opt.lambda);
            seq.has_direct = true;
        }
    }

    write_text(fs::path(args.out_dir) / "partition.csv",
               partition_csv(cfg, seq, wall_ms, timing));
    RunManifest manifest = base_manifest(cfg, "partition");
    manifest.outputs = {"partition.csv"};
    write_manifest(manifest, args.out_dir);
    std::cout << "Z_" << seq.ns.back() << " = " << format_double(seq.z.back().real()) << " + "
              << format_double(seq.z.back().imag()) << "i\n";
    return 0;
}

int cmd_airy(const CommonArgs& args, const std::string& grid_arg) {
    const ExperimentConfig cfg = load_config(args.config_path);
    std::vector<double> grid;
    if (grid_arg.empty()) {
        grid.push_back(cfg.airy.lambda);
    } else if (grid_arg != "none") {
        std::stringstream ss(grid_arg);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) grid.push_back(std::stod(tok));
    }
    const auto rows = airy_sweep(cfg.splitting, cfg.lie, grid, cfg.airy);
    std::ostringstream csv;
    csv << "config_hash,lambda,method,samples,seed,re,im,std_error,refine_delta\n";
    for (const auto& row : rows) {
        csv << cfg.hash << "," << format_double(row.lambda) << ","
            << (cfg.airy.method == AiryMethod::monte_carlo ? "monte_carlo" : "gauss_quadrature")
            << "," << row.result.samples << "," << cfg.airy.seed << ","
            << csv_complex_columns(row.result.value) << ","
            << format_double(row.result.std_error) << ","
            << format_double(row.result.refine_delta) << "\n";
    }
    write_text(fs::path(args.out_dir) / "airy.csv", csv.str());
    RunManifest manifest = base_manifest(cfg, "airy");
    manifest.outputs = {"airy.csv"};
    write_manifest(manifest, args.out_dir);
    for (const auto& row : rows)
        std::cout << "lambda=" << format_double(row.lambda) << " value=("
                  << format_double(row.result.value.real()) << ", "
                  << format_double(row.result.value.imag()) << ")\n";
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    const ExperimentConfig cfg = load_config(args.config_path);
    if (!cfg.sweep) throw parse_error("sweep: config has no 'sweep' block");
    const SweepConfig& sw = *cfg.sweep;

    struct GridPoint {
        double eps, lambda, n_amplitude;
        int degree;
        std::uint64_t seed;
        bool has_amplitude;
    };
    std::vector<GridPoint> grid;
    const std::vector<double> amps =
        sw.n_amplitude.empty() ? std::vector<double>{-1.0} : sw.n_amplitude;
    for (double eps : sw.eps)
        for (double lam : sw.lambda)
            for (int d : sw.degree)
                for (auto seed : sw.seeds)
                    for (double amp : amps)
                        grid.push_back({eps, lam, amp, d, seed, !sw.n_amplitude.empty()});

    struct RowResult {
        std::string text;
    };
    std::vector<RowResult> rows(grid.size());

    const auto worker = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < grid.size(); i += stride) {
            const auto& gp = grid[i];
            SplittingSpec split = gp.has_amplitude
                                      ? canonical_preset(cfg.splitting.genus, cfg.lie,
                                                         gp.n_amplitude)
                                      : cfg.splitting;
            const BoseSpace bspace = build_bose_space(split, cfg.lie, gp.degree);
            const FermiSpace fspace = build_fermi_space(cfg.lie, split.vol);
            const ProductSpace pspace(bspace, fspace);
            const InteractionSet inter =
                build_interactions(split, cfg.lie, pspace, /*certify=*/false);
            TrotterOptions opt;
            opt.eps = gp.eps;
            opt.lambda = gp.lambda;
            opt.n_max = sw.n_max;
            opt.compute_direct = sw.compute_direct;
            const PartitionSequence seq = z_limit(pspace, inter, opt);
            std::ostringstream line;
            for (std::size_t k = 0; k < seq.ns.size(); ++k) {
                line << cfg.hash << "," << cfg.splitting.genus << "," << cfg.lie.name << ","
                     << gp.degree << "," << format_double(gp.eps) << ","
                     << format_double(gp.lambda) << "," << gp.seed << ","
                     << (gp.has_amplitude ? format_double(gp.n_amplitude) : "") << ","
                     << seq.ns[k] << "," << csv_complex_columns(seq.z[k]) << ",";
                if (k < seq.cauchy.size()) line << format_double(seq.cauchy[k]);
                line << "," << format_double(seq.fitted_order) << ",";
                if (seq.has_direct) line << csv_complex_columns(seq.direct);
                else line << ",";
                line << "\n";
            }
            rows[i].text = line.str();
        }
    };

    const int threads = std::min<std::size_t>(thread_cap(), grid.size());
    if (threads <= 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t, threads);
        for (auto& th : pool) th.join();
    }

    std::ostringstream csv;
    csv << "config_hash,genus,lie,degree,eps,lambda,model_seed,n_amplitude,n,re_z,im_z,"
           "cauchy,fitted_order,re_z_direct,im_z_direct\n";
    for (const auto& row : rows) csv << row.text;
    write_text(fs::path(args.out_dir) / "sweep.csv", csv.str());
    RunManifest manifest = base_manifest(cfg, "sweep");
    manifest.outputs = {"sweep.csv"};
    write_manifest(manifest, args.out_dir);
    std::cout << "sweep: " << grid.size() << " grid points -> " << args.out_dir
              << "/sweep.csv\n";
    return 0;
}

int cmd_report(const std::string& run_dir) {
    const RunManifest manifest = read_manifest(run_dir);  // throws if missing
    std::ostringstream out;
    out << "run " << manifest.config_hash << " (" << manifest.command << ")\n";
    for (const auto& r : manifest.checks) out << "  " << r.summary() << "\n";

    const fs::path dir(run_dir);
    if (fs::exists(dir / "partition.csv")) {
        std::ifstream in(dir / "partition.csv");
        std::string line;
        std::getline(in, line);  // header
        std::ostringstream plot;
        out << "  n, Re Z, Im Z, |Z_n - Z_2n|\n";
        while (std::getline(in, line)) {
            std::vector<std::string> cols;
            std::stringstream ss(line);
            std::string tok;
            while (std::getline(ss, tok, ',')) cols.push_back(tok);
            if (cols.size() < 12) continue;
            out << "  " << cols[8] << ", " << cols[9] << ", " << cols[10] << ", " << cols[11]
                << "\n";
            if (!cols[11].empty()) plot << cols[8] << " " << cols[11] << "\n";
        }
        write_text(dir / "plot_trotter.dat", plot.str());
        out << "  plot data: plot_trotter.dat (n, |Z_n - Z_2n|)\n";
    }
    if (fs::exists(dir / "sweep.csv")) {
        std::ifstream in(dir / "sweep.csv");
        std::string line;
        std::getline(in, line);
        std::ostringstream plot;
        while (std::getline(in, line)) {
            std::vector<std::string> cols;
            std::stringstream ss(line);
            std::string tok;
            while (std::getline(ss, tok, ',')) cols.push_back(tok);
            if (cols.size() < 11) continue;
            plot << cols[5] << " " << cols[9] << "\n";  // lambda, re_z
        }
        write_text(dir / "plot_lambda_z.dat", plot.str());
        out << "  plot data: plot_lambda_z.dat (lambda, Re Z)\n";
    }
    if (fs::exists(dir / "airy.csv")) {
        std::ifstream in(dir / "airy.csv");
        std::string line;
        std::getline(in, line);
        std::ostringstream plot;
        while (std::getline(in, line)) {
            std::vector<std::string> cols;
            std::stringstream ss(line);
            std::string tok;
            while (std::getline(ss, tok, ',')) cols.push_back(tok);
            if (cols.size() < 8) continue;
            plot << cols[1] << " " << cols[5] << "\n";  // lambda, re
        }
        write_text(dir / "plot_lambda_airy.dat", plot.str());
        out << "  plot data: plot_lambda_airy.dat (lambda, Re Airy)\n";
    }
    std::cout << out.str();
    return 0;
}

}  // namespace

int cli_run(const std::vector<std::string>& args) {
    CLI::App app{"csrp: reflection-positive Chern-Simons functional-integral laboratory"};
    app.require_subcommand(1);

    CommonArgs common;
    int gluing_trials = 100;
    bool timing = false;
    double alpha = 1.0;
    std::string poly_path, grid_arg, report_dir;

    // flag overrides applied onto the config JSON before parsing
    std::optional<int> ov_genus, ov_degree, ov_nmax;
    std::optional<double> ov_eps, ov_lambda;
    std::optional<std::uint64_t> ov_seed;
    std::optional<std::string> ov_lie, ov_order;

    const auto add_common = [&](CLI::App* sub, bool needs_config = true) {
        auto* opt = sub->add_option("-c,--config", common.config_path, "experiment config JSON");
        if (needs_config) opt->required();
        sub->add_option("-o,--out", common.out_dir, "output directory");
    };
    const auto add_overrides = [&](CLI::App* sub) {
        sub->add_option("--genus", ov_genus);
        sub->add_option("--lie", ov_lie);
        sub->add_option("--degree", ov_degree);
        sub->add_option("--eps", ov_eps);
        sub->add_option("--lambda", ov_lambda);
        sub->add_option("--n-max", ov_nmax);
        sub->add_option("--seed", ov_seed);
        sub->add_option("--order", ov_order)->check(CLI::IsMember({"bf", "fb"}));
    };

    auto* validate = app.add_subcommand("validate", "run every validation report");
    add_common(validate);
    auto* phi_cmd = app.add_subcommand("phi", "evaluate the Bose moment functional");
    add_common(phi_cmd);
    phi_cmd->add_option("--poly", poly_path, "polynomial description JSON")->required();
    phi_cmd->add_option("--alpha", alpha, "free-term scaling");
    auto* psi_cmd = app.add_subcommand("psi", "evaluate the Fermi moment functional");
    add_common(psi_cmd);
    psi_cmd->add_option("--poly", poly_path, "polynomial description JSON")->required();
    psi_cmd->add_option("--alpha", alpha, "free-term scaling");
    auto* gram = app.add_subcommand("gram", "reflected Gram matrix of listed polynomials");
    add_common(gram);
    gram->add_option("--poly", poly_path, "polynomial list JSON")->required();
    auto* gluing = app.add_subcommand("gluing", "three-region gluing identities");
    add_common(gluing);
    gluing->add_option("--trials", gluing_trials);
    auto* interaction = app.add_subcommand("interaction", "interaction elements and bounds");
    add_common(interaction);
    auto* partition = app.add_subcommand("partition", "Trotter partition-function sequence");
    add_common(partition);
    add_overrides(partition);
    partition->add_flag("--timing", timing, "append a wall_ms column (non-reproducible)");
    auto* airy = app.add_subcommand("airy", "finite-dimensional companion integral");
    add_common(airy);
    airy->add_option("--lambda", ov_lambda);
    airy->add_option("--seed", ov_seed);
    airy->add_option("--grid", grid_arg,
                     "comma-separated lambda grid ('none' for an empty grid)");
    std::optional<std::string> ov_method;
    std::optional<std::int64_t> ov_samples;
    std::optional<int> ov_qorder;
    airy->add_option("--method", ov_method)->check(CLI::IsMember({"monte_carlo", "gauss_quadrature"}));
    airy->add_option("--samples", ov_samples);
    airy->add_option("--quad-order", ov_qorder);
    auto* sweep = app.add_subcommand("sweep", "grid sweep over the partition inputs");
    add_common(sweep);
    auto* report = app.add_subcommand("report", "summarize a run directory");
    report->add_option("run_dir", report_dir)->required();

    std::vector<const char*> argv;
    argv.push_back("csrp");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        // apply flag overrides by editing the raw config before the real parse
        const auto with_overrides = [&]() {
            nlohmann::json j;
            {
                std::ifstream in(common.config_path);
                if (!in) throw parse_error("config: cannot open '" + common.config_path + "'");
                try {
                    j = nlohmann::json::parse(in);
                } catch (const nlohmann::json::parse_error& e) {
                    throw parse_error(std::string("config: ") + e.what());
                }
            }
            if (ov_genus) j["splitting"]["genus"] = *ov_genus;
            if (ov_lie) j["lie_algebra"] = {{"preset", *ov_lie}};
            if (ov_degree) j["fock"]["degree"] = *ov_degree;
            if (ov_eps) j["partition"]["eps"] = *ov_eps;
            if (ov_lambda) {
                j["partition"]["lambda"] = *ov_lambda;
                j["airy"]["lambda"] = *ov_lambda;
            }
            if (ov_nmax) j["partition"]["n_max"] = *ov_nmax;
            if (ov_seed) {
                j["model"]["seed"] = *ov_seed;
                j["airy"]["seed"] = *ov_seed;
            }
            if (ov_order) j["partition"]["order"] = *ov_order;
            if (ov_method) j["airy"]["method"] = *ov_method;
            if (ov_samples) j["airy"]["samples"] = *ov_samples;
            if (ov_qorder) j["airy"]["order"] = *ov_qorder;
            return j;
        };

        if (app.got_subcommand(validate)) return cmd_validate(common);
        if (app.got_subcommand(phi_cmd)) return cmd_phi(common, poly_path, alpha);
        if (app.got_subcommand(psi_cmd)) return cmd_psi(common, poly_path, alpha);
        if (app.got_subcommand(gram)) return cmd_gram(common, poly_path);
        if (app.got_subcommand(gluing)) return cmd_gluing(common, gluing_trials);
        if (app.got_subcommand(interaction)) return cmd_interaction(common);
        if (app.got_subcommand(partition)) {
            const nlohmann::json j = with_overrides();
            const std::string tmp_path = common.out_dir + "/.effective_config.json";
            fs::create_directories(common.out_dir);
            std::ofstream(tmp_path) << j.dump(2);
            CommonArgs a = common;
            a.config_path = tmp_path;
            return cmd_partition(a, timing);
        }
        if (app.got_subcommand(airy)) {
            const nlohmann::json j = with_overrides();
            const std::string tmp_path = common.out_dir + "/.effective_config.json";
            fs::create_directories(common.out_dir);
            std::ofstream(tmp_path) << j.dump(2);
            CommonArgs a = common;
            a.config_path = tmp_path;
            return cmd_airy(a, grid_arg);
        }
        if (app.got_subcommand(sweep)) return cmd_sweep(common);
        if (app.got_subcommand(report)) return cmd_report(report_dir);
        return 2;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const contract_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const capacity_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const numeric_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return cli_run(args);
}

}  // namespace csrp
