#include "csrp/covariance.hpp"

#include <nlohmann/json.hpp>

#include "csrp/errors.hpp"
#include "csrp/rng.hpp"

namespace csrp {

namespace {

Eigen::MatrixXd random_gaussian(int rows, int cols, Rng& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
    return m;
}

Eigen::MatrixXd random_symmetric(int n, Rng& rng) {
    Eigen::MatrixXd a = random_gaussian(n, n, rng);
    return 0.5 * (a + a.transpose());
}

// Haar-ish orthogonal via QR with a deterministic sign fix.
Eigen::MatrixXd random_orthogonal(int n, Rng& rng) {
    const Eigen::MatrixXd a = random_gaussian(n, n, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return q;
}

// Class map with range span(basis columns), rank g, kernel dimension
// dim - g. The orthogonal mixers keep the pullback metric similar to Q.
Eigen::MatrixXd make_class_map(const Eigen::MatrixXd& basis, int dim, Rng& rng) {
    const int g = static_cast<int>(basis.cols());
    const Eigen::MatrixXd t = random_orthogonal(g, rng);
    Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(g, dim);
    sel.leftCols(g) = Eigen::MatrixXd::Identity(g, g);
    return basis * t * sel * random_orthogonal(dim, rng);
}

// Cross-region covariance forced through the class maps:
// C(x, y) = Q(pi_1 x, S* pi_2 y) = omega(pi_1 x, pi_2 y), with x supported on
// the side whose boundary orientation the cut carries.
Eigen::MatrixXd cohomological_block(const SplittingSpec& spec, const Eigen::MatrixXd& pi_1,
                                    const Eigen::MatrixXd& pi_2) {
    return pi_1.transpose() * spec.omega * pi_2;
}

}  // namespace

Eigen::MatrixXd BoseOneParticleModel::q_gram() const {
    Eigen::MatrixXd q(dim_side, dim_side);
    for (int i = 0; i < dim_side; ++i)
        for (int j = 0; j < dim_side; ++j) q(i, j) = cov(offset(1) + i, offset(0) + j);
    return 0.5 * (q + q.transpose());
}

BoseOneParticleModel build_bose_model(const SplittingSpec& spec, int null_modes,
                                      std::uint64_t seed) {
    if (null_modes < 0) throw validation_error("build_bose_model: null_modes must be >= 0");
    {
        const auto sr = validate_splitting(spec);
        if (!sr.pass()) throw validation_error("build_bose_model: " + sr.summary());
    }
    BoseOneParticleModel m;
    m.split = spec;
    m.null_modes = null_modes;
    m.dim_side = spec.genus + null_modes;
    m.seed = seed;

    Rng rng = Rng::stream(seed, 0x0b05e);
    m.pi_plus = make_class_map(spec.lambda, m.dim_side, rng);
    // Reflection acts as the identity block swap, so the intertwining
    // pi_minus o R* = S* o pi_plus pins pi_minus.
    m.pi_minus = spec.s_star * m.pi_plus;

    const int ds = m.dim_side;
    m.cov.setZero(2 * ds, 2 * ds);
    const Eigen::MatrixXd same = random_symmetric(ds, rng);
    m.cov.block(0, 0, ds, ds) = same;
    m.cov.block(ds, ds, ds, ds) = same;  // C(R*f, R*g) = C(f, g)
    const Eigen::MatrixXd cross = cohomological_block(spec, m.pi_plus, m.pi_minus);
    m.cov.block(0, ds, ds, ds) = cross;
    m.cov.block(ds, 0, ds, ds) = cross.transpose();

    m.report = validate_bose_model(m);
    if (!m.report.pass())
        throw numeric_error("build_bose_model: construction invariants failed: " +
                            m.report.summary());
    return m;
}

ValidationReport validate_bose_model(const BoseOneParticleModel& m, double tol) {
    ValidationReport report;
    report.subject = "bose_model(g=" + std::to_string(m.split.genus) +
                     ",null=" + std::to_string(m.null_modes) + ")";
    const int ds = m.dim_side;
    const int g = m.split.genus;

    report.add("cov_symmetric", (m.cov - m.cov.transpose()).cwiseAbs().maxCoeff(), tol);
    report.add("reflection_invariance",
               (m.cov.block(0, 0, ds, ds) - m.cov.block(ds, ds, ds, ds)).cwiseAbs().maxCoeff(),
               tol);
    report.add("intertwining",
               (m.pi_minus - m.split.s_star * m.pi_plus).cwiseAbs().maxCoeff(), tol);

    // Ranges: pi_plus lands in span(lambda), pi_minus in span(s_star lambda).
    const auto residual_outside = [](const Eigen::MatrixXd& basis, const Eigen::MatrixXd& pi) {
        const Eigen::MatrixXd proj =
            basis * (basis.transpose() * basis).ldlt().solve(basis.transpose());
        return (pi - proj * pi).cwiseAbs().maxCoeff();
    };
    report.add("range_pi_plus", residual_outside(m.split.lambda, m.pi_plus), 1e-10);
    report.add("range_pi_minus",
               residual_outside(m.split.s_star * m.split.lambda, m.pi_minus), 1e-10);
    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.pi_plus);
        int rank = 0;
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > 1e-10 * svd.singularValues()(0)) ++rank;
        report.add("pi_plus_rank", std::abs(rank - g), 0.5);
    }

    // Cross block factors through cohomology.
    report.add("cross_block_cohomological",
               (m.cov.block(0, ds, ds, ds) -
                m.pi_plus.transpose() * m.split.omega * m.pi_minus)
                   .cwiseAbs()
                   .maxCoeff(),
               tol);

    // Reflected Gram: PSD, kernel = null modes, equals the Q-pullback.
    const Eigen::MatrixXd q = m.q_gram();
    Eigen::MatrixXd qpull(ds, ds);
    for (int i = 0; i < ds; ++i)
        for (int j = 0; j < ds; ++j)
            qpull(i, j) = m.split.q_full(m.pi_plus.col(i), m.pi_plus.col(j));
    report.add("q_gram_equals_Q_pullback", (q - qpull).cwiseAbs().maxCoeff(), 1e-10);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    report.add("q_gram_psd", std::max(0.0, -es.eigenvalues().minCoeff()), 1e-10 * scale);
    int zeros = 0;
    for (int i = 0; i < ds; ++i)
        if (std::abs(es.eigenvalues()(i)) < 1e-10 * scale) ++zeros;
    report.add("q_gram_kernel_dim", std::abs(zeros - m.null_modes), 0.5);
    return report;
}

FermiOneParticleModel build_fermi_model(const SplittingSpec& spec, int null_modes,
                                        std::uint64_t seed) {
    if (null_modes < 0) throw validation_error("build_fermi_model: null_modes must be >= 0");
    {
        const auto sr = validate_splitting(spec);
        if (!sr.pass()) throw validation_error("build_fermi_model: " + sr.summary());
    }
    FermiOneParticleModel m;
    m.split = spec;
    m.null_modes = null_modes;
    m.sector_dim = 1 + null_modes;
    m.dim_side = 2 * m.sector_dim;
    m.seed = seed;

    Rng rng = Rng::stream(seed, 0xfe2a1);
    // Same-side 0x2 pairing; symmetric so that the pairing is invariant
    // under (f,g) -> (Lg, -star d f).
    m.same_side = random_symmetric(m.sector_dim, rng);

    const int n = 2 * m.dim_side;
    m.cov.setZero(n, n);
    const auto put = [&](int row0, int col0, const Eigen::MatrixXd& p) {
        m.cov.block(row0, col0, m.sector_dim, m.sector_dim) = p;
        m.cov.block(col0, row0, m.sector_dim, m.sector_dim) = -p.transpose();
    };
    // Same-side blocks, mirrored across the reflection.
    put(m.offset(0, 0), m.offset(0, 1), m.same_side);
    put(m.offset(1, 0), m.offset(1, 1), m.same_side);
    // Cross-side pairing reaches only the constant directions: -vol c_f c_g.
    Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(m.sector_dim, m.sector_dim);
    cross(0, 0) = -spec.vol;
    put(m.offset(0, 0), m.offset(1, 1), cross);
    put(m.offset(1, 0), m.offset(0, 1), cross);

    m.report = validate_fermi_model(m);
    if (!m.report.pass())
        throw numeric_error("build_fermi_model: construction invariants failed: " +
                            m.report.summary());
    return m;
}

ValidationReport validate_fermi_model(const FermiOneParticleModel& m, double tol) {
    ValidationReport report;
    report.subject = "fermi_model(null=" + std::to_string(m.null_modes) + ")";
    report.add("cov_antisymmetric", (m.cov + m.cov.transpose()).cwiseAbs().maxCoeff(), tol);

    const int sd = m.sector_dim;
    report.add("zero_form_block_vanishes",
               m.cov.block(m.offset(0, 0), m.offset(1, 0), sd, sd).cwiseAbs().maxCoeff(), tol);
    report.add("two_form_block_vanishes",
               m.cov.block(m.offset(0, 1), m.offset(1, 1), sd, sd).cwiseAbs().maxCoeff(), tol);

    // Reflection invariance of the same-side pairing.
    report.add("reflection_invariance",
               (m.cov.block(m.offset(0, 0), m.offset(0, 1), sd, sd) -
                m.cov.block(m.offset(1, 0), m.offset(1, 1), sd, sd))
                   .cwiseAbs()
                   .maxCoeff(),
               tol);

    // Cross-region pairing equals -vol c_f c_g.
    double cross_res = 0.0;
    for (int i = 0; i < sd; ++i)
        for (int j = 0; j < sd; ++j) {
            const double want = (i == 0 && j == 0) ? -m.split.vol : 0.0;
            cross_res = std::max(
                cross_res, std::abs(m.cov(m.offset(0, 0) + i, m.offset(1, 1) + j) - want));
            cross_res = std::max(
                cross_res, std::abs(m.cov(m.offset(1, 0) + i, m.offset(0, 1) + j) - want));
        }
    report.add("cross_pairing_constant_part", cross_res, tol);

    // t-invariance of the pairing at one-particle level: C(x,y) = C(x^t,y^t).
    // For a 0-form x and 2-form y on matching sides this reduces to the
    // symmetry of the same-side block.
    report.add("t_invariance",
               (m.same_side - m.same_side.transpose()).cwiseAbs().maxCoeff(), tol);
    return report;
}

Eigen::VectorXd ThreeRegionModel::bose_class(int cut, int region,
                                             const Eigen::VectorXd& v) const {
    switch (region) {
        case 0: return pi_u * v;
        case 1: return (cut == 1 ? pi_v_cut1 : pi_v_cut2) * v;
        default: return pi_w * v;
    }
}

ThreeRegionModel build_three_region_model(const SplittingSpec& spec, int null_modes,
                                          std::uint64_t seed) {
    {
        const auto sr = validate_splitting(spec);
        if (!sr.pass()) throw validation_error("build_three_region_model: " + sr.summary());
    }
    ThreeRegionModel m;
    m.split = spec;
    m.null_modes = null_modes;
    m.bose_dim = spec.genus + null_modes;
    m.sector_dim = 1 + null_modes;
    m.seed = seed;

    Rng rng = Rng::stream(seed, 0x73333);
    const Eigen::MatrixXd s_lambda = spec.s_star * spec.lambda;

    // U-supported classes extend across V+W, i.e. land in Lambda; W-supported
    // classes land in S* Lambda. The middle region sees a different class at
    // each cut; the two maps share a kernel (the region's null modes).
    m.pi_u = make_class_map(spec.lambda, m.bose_dim, rng);
    m.pi_w = make_class_map(s_lambda, m.bose_dim, rng);
    {
        const int g = spec.genus;
        Eigen::MatrixXd sel = Eigen::MatrixXd::Zero(g, m.bose_dim);
        sel.leftCols(g) = Eigen::MatrixXd::Identity(g, g);
        const Eigen::MatrixXd mix = sel * random_orthogonal(m.bose_dim, rng);
        m.pi_v_cut1 = s_lambda * random_orthogonal(g, rng) * mix;
        m.pi_v_cut2 = spec.lambda * random_orthogonal(g, rng) * mix;
    }

    const int bd = m.bose_dim;
    m.bose_cov.setZero(3 * bd, 3 * bd);
    for (int r = 0; r < 3; ++r)
        m.bose_cov.block(r * bd, r * bd, bd, bd) = random_symmetric(bd, rng);
    const auto put_cross = [&](int r1, int r2, const Eigen::MatrixXd& c) {
        m.bose_cov.block(r1 * bd, r2 * bd, bd, bd) = c;
        m.bose_cov.block(r2 * bd, r1 * bd, bd, bd) = c.transpose();
    };
    put_cross(0, 1, cohomological_block(spec, m.pi_u, m.pi_v_cut1));  // U|V via cut 1
    put_cross(0, 2, cohomological_block(spec, m.pi_u, m.pi_w));       // U|W via either cut
    put_cross(1, 2, cohomological_block(spec, m.pi_v_cut2, m.pi_w));  // V|W via cut 2

    // Fermi: same-region random symmetric 0x2 pairing; cross-region pairing
    // -vol c_f c_g regardless of the cut.
    const int sd = m.sector_dim;
    const int n = 3 * 2 * sd;
    m.fermi_cov.setZero(n, n);
    const auto put_f = [&](int row0, int col0, const Eigen::MatrixXd& p) {
        m.fermi_cov.block(row0, col0, sd, sd) = p;
        m.fermi_cov.block(col0, row0, sd, sd) = -p.transpose();
    };
    for (int r = 0; r < 3; ++r)
        put_f(m.fermi_offset(r, 0), m.fermi_offset(r, 1), random_symmetric(sd, rng));
    Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(sd, sd);
    cross(0, 0) = -spec.vol;
    for (int r1 = 0; r1 < 3; ++r1)
        for (int r2 = 0; r2 < 3; ++r2)
            if (r1 != r2) put_f(m.fermi_offset(r1, 0), m.fermi_offset(r2, 1), cross);

    ValidationReport report;
    report.subject = "three_region_model";
    report.add("bose_cov_symmetric",
               (m.bose_cov - m.bose_cov.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    report.add("fermi_cov_antisymmetric",
               (m.fermi_cov + m.fermi_cov.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    // U|W pairing is cut-independent: both cuts use the same class maps.
    report.add("uw_block_cut_consistent",
               (m.bose_cov.block(0, 2 * bd, bd, bd) -
                cohomological_block(spec, m.pi_u, m.pi_w))
                   .cwiseAbs()
                   .maxCoeff(),
               1e-12);
    m.report = report;
    return m;
}

nlohmann::json to_json(const BoseOneParticleModel& m) {
    nlohmann::json j;
    j["type"] = "bose_one_particle";
    j["genus"] = m.split.genus;
    j["null_modes"] = m.null_modes;
    j["seed"] = m.seed;
    j["dim_side"] = m.dim_side;
    j["pi_plus"] = std::vector<double>(m.pi_plus.data(), m.pi_plus.data() + m.pi_plus.size());
    j["cov"] = std::vector<double>(m.cov.data(), m.cov.data() + m.cov.size());
    return j;
}

nlohmann::json to_json(const FermiOneParticleModel& m) {
    nlohmann::json j;
    j["type"] = "fermi_one_particle";
    j["null_modes"] = m.null_modes;
    j["seed"] = m.seed;
    j["vol"] = m.split.vol;
    j["cov"] = std::vector<double>(m.cov.data(), m.cov.data() + m.cov.size());
    return j;
}

}  // namespace csrp
