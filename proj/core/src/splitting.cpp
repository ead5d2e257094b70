#include "csrp/splitting.hpp"

#include <cmath>

#include "csrp/errors.hpp"

namespace csrp {

Eigen::MatrixXd derive_Q(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& s_star,
                         const Eigen::MatrixXd& lambda, double* asymmetry_out) {
    if (omega.rows() != omega.cols() || s_star.rows() != omega.rows() ||
        s_star.cols() != omega.cols() || lambda.rows() != omega.rows())
        throw validation_error("derive_Q: dimension mismatch");
    const Eigen::MatrixXd raw = -(s_star * lambda).transpose() * omega * lambda;
    if (asymmetry_out) *asymmetry_out = (raw - raw.transpose()).cwiseAbs().maxCoeff();
    return 0.5 * (raw + raw.transpose());
}

namespace {

// First `count` elements of the symmetric m x m unit basis, diagonal first.
std::vector<Eigen::MatrixXd> symmetric_basis(int m, int count) {
    std::vector<Eigen::MatrixXd> basis;
    for (int k = 0; k < m && static_cast<int>(basis.size()) < count; ++k) {
        Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m, m);
        e(k, k) = 1.0;
        basis.push_back(e);
    }
    for (int i = 0; i < m && static_cast<int>(basis.size()) < count; ++i)
        for (int j = i + 1; j < m && static_cast<int>(basis.size()) < count; ++j) {
            Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m, m);
            e(i, j) = e(j, i) = 1.0;
            basis.push_back(e);
        }
    // Cycle if count exceeds the basis size (only possible for m = 1).
    while (static_cast<int>(basis.size()) < count)
        basis.push_back(basis[basis.size() % std::max<std::size_t>(1, basis.size())]);
    return basis;
}

int levi_civita_sign(int a, int b, int c) {
    if (a == b || b == c || a == c) return 0;
    int sign = 1;
    if (a > b) std::swap(a, b), sign = -sign;
    if (b > c) std::swap(b, c), sign = -sign;
    if (a > b) std::swap(a, b), sign = -sign;
    return sign;
}

}  // namespace

SplittingSpec canonical_preset(int genus, const LieAlgebraSpec& lie, double n_amplitude) {
    if (genus < 1) throw validation_error("canonical_preset: genus must be >= 1");
    const int g = genus;
    SplittingSpec spec;
    spec.genus = g;

    spec.omega = Eigen::MatrixXd::Zero(2 * g, 2 * g);
    spec.omega.topRightCorner(g, g) = Eigen::MatrixXd::Identity(g, g);
    spec.omega.bottomLeftCorner(g, g) = -Eigen::MatrixXd::Identity(g, g);

    spec.s_star = Eigen::MatrixXd::Zero(2 * g, 2 * g);
    spec.s_star.topRightCorner(g, g) = -Eigen::MatrixXd::Identity(g, g);
    spec.s_star.bottomLeftCorner(g, g) = -Eigen::MatrixXd::Identity(g, g);

    spec.lambda_plus = Eigen::MatrixXd::Zero(2 * g, g);
    spec.lambda_plus.topRows(g) = Eigen::MatrixXd::Identity(g, g);
    spec.lambda = spec.s_star * spec.lambda_plus;

    spec.q_mat = derive_Q(spec.omega, spec.s_star, spec.lambda);

    spec.n_tensor.assign(static_cast<std::size_t>(g) * g * g, 0.0);
    if (g >= 3)
        for (int a = 0; a < g; ++a)
            for (int b = 0; b < g; ++b)
                for (int c = 0; c < g; ++c)
                    spec.n_tensor[(a * g + b) * g + c] = n_amplitude * levi_civita_sign(a, b, c);

    spec.v_vec = Eigen::VectorXd::Ones(g);
    spec.vol = 1.0;

    const int m = lie.dim;
    spec.airy_j = spec.q_mat;
    spec.airy_k = Eigen::MatrixXd::Identity(m, m);
    spec.airy_b = symmetric_basis(m, g);
    spec.airy_f = lie.adjoint_matrices();
    return spec;
}

ValidationReport validate_splitting(const SplittingSpec& spec, double tol) {
    ValidationReport report;
    report.subject = "splitting(g=" + std::to_string(spec.genus) + ")";
    const int g = spec.genus;
    const auto& W = spec.omega;
    const auto& S = spec.s_star;

    report.add("omega_antisymmetric", (W + W.transpose()).cwiseAbs().maxCoeff(), tol);
    {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(W);
        report.add_margin("omega_nondegenerate", svd.singularValues().minCoeff());
    }
    report.add("s_star_involution",
               (S * S - Eigen::MatrixXd::Identity(2 * g, 2 * g)).cwiseAbs().maxCoeff(), tol);
    report.add("s_star_antisymplectic", (S.transpose() * W * S + W).cwiseAbs().maxCoeff(), tol);

    // omega(S* a, a) > 0 on Lambda_+ and < 0 on Lambda, at matrix level.
    {
        const Eigen::MatrixXd P = (S * spec.lambda_plus).transpose() * W * spec.lambda_plus;
        const Eigen::MatrixXd Psym = 0.5 * (P + P.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Psym);
        report.add_margin("positivity_on_lambda_plus", es.eigenvalues().minCoeff());
    }
    {
        const Eigen::MatrixXd M = (S * spec.lambda).transpose() * W * spec.lambda;
        const Eigen::MatrixXd Msym = 0.5 * (M + M.transpose());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Msym);
        report.add_margin("negativity_on_lambda", -es.eigenvalues().maxCoeff());
    }

    report.add("lambda_is_s_star_lambda_plus",
               (spec.lambda - S * spec.lambda_plus).cwiseAbs().maxCoeff(), tol);

    report.add("q_symmetric", (spec.q_mat - spec.q_mat.transpose()).cwiseAbs().maxCoeff(), tol);
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spec.q_mat);
        report.add_margin("q_positive_definite", es.eigenvalues().minCoeff());
    }
    report.add("q_matches_derive_Q",
               (spec.q_mat - derive_Q(W, S, spec.lambda)).cwiseAbs().maxCoeff(), tol);

    double nasym = 0.0;
    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b)
            for (int c = 0; c < g; ++c) {
                nasym = std::max(nasym, std::abs(spec.n_at(a, b, c) + spec.n_at(b, a, c)));
                nasym = std::max(nasym, std::abs(spec.n_at(a, b, c) + spec.n_at(a, c, b)));
            }
    report.add("n_tensor_antisymmetric", nasym, tol);

    report.add_margin("vol_positive", spec.vol);
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
            0.5 * (spec.airy_j + spec.airy_j.transpose()));
        report.add_margin("airy_j_positive_definite", es.eigenvalues().minCoeff());
    }
    return report;
}

}  // namespace csrp
