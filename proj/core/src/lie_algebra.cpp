#include "csrp/lie_algebra.hpp"

#include <cmath>

#include "csrp/errors.hpp"

namespace csrp {

namespace {

using cplx = std::complex<double>;
const cplx I{0.0, 1.0};

// f_{abc} = -tr(e_a [e_b, e_c]) from the representation matrices.
std::vector<double> structure_constants(const std::vector<Eigen::MatrixXcd>& e) {
    const int n = static_cast<int>(e.size());
    std::vector<double> f(static_cast<std::size_t>(n) * n * n, 0.0);
    for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) {
            const Eigen::MatrixXcd comm = e[b] * e[c] - e[c] * e[b];
            for (int a = 0; a < n; ++a) {
                const cplx t = -(e[a] * comm).trace();
                f[(static_cast<std::size_t>(a) * n + b) * n + c] = t.real();
            }
        }
    return f;
}

std::vector<Eigen::MatrixXcd> pauli_basis() {
    Eigen::MatrixXcd s1(2, 2), s2(2, 2), s3(2, 2);
    s1 << 0, 1, 1, 0;
    s2 << 0, -I, I, 0;
    s3 << 1, 0, 0, -1;
    const double r = 1.0 / std::sqrt(2.0);
    return {I * r * s1, I * r * s2, I * r * s3};
}

std::vector<Eigen::MatrixXcd> gell_mann_basis() {
    std::vector<Eigen::MatrixXcd> l(8, Eigen::MatrixXcd::Zero(3, 3));
    l[0] << 0, 1, 0, 1, 0, 0, 0, 0, 0;
    l[1] << 0, -I, 0, I, 0, 0, 0, 0, 0;
    l[2] << 1, 0, 0, 0, -1, 0, 0, 0, 0;
    l[3] << 0, 0, 1, 0, 0, 0, 1, 0, 0;
    l[4] << 0, 0, -I, 0, 0, 0, I, 0, 0;
    l[5] << 0, 0, 0, 0, 0, 1, 0, 1, 0;
    l[6] << 0, 0, 0, 0, 0, -I, 0, I, 0;
    const double s = 1.0 / std::sqrt(3.0);
    l[7] << s, 0, 0, 0, s, 0, 0, 0, -2.0 * s;
    const double r = 1.0 / std::sqrt(2.0);
    for (auto& m : l) m = I * r * m;
    return l;
}

}  // namespace

bool LieAlgebraSpec::abelian() const {
    for (double v : f)
        if (v != 0.0) return false;
    return true;
}

std::vector<Eigen::MatrixXd> LieAlgebraSpec::adjoint_matrices() const {
    std::vector<Eigen::MatrixXd> ad(dim, Eigen::MatrixXd::Zero(dim, dim));
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int c = 0; c < dim; ++c) ad[a](c, b) = f_at(a, b, c);
    return ad;
}

LieAlgebraSpec load_preset(const std::string& name) {
    LieAlgebraSpec spec;
    spec.name = name;
    if (name == "u1") {
        spec.dim = 1;
        spec.f = {0.0};
        Eigen::MatrixXcd e(1, 1);
        e << I;
        spec.rep = {e};
        return spec;
    }
    if (name == "su2") {
        spec.rep = pauli_basis();
    } else if (name == "su3") {
        spec.rep = gell_mann_basis();
    } else {
        throw validation_error("unknown lie_algebra preset '" + name + "'");
    }
    spec.dim = static_cast<int>(spec.rep.size());
    spec.f = structure_constants(spec.rep);
    return spec;
}

LieAlgebraSpec make_lie_algebra(int dim, const std::vector<double>& f,
                                std::vector<Eigen::MatrixXcd> rep) {
    if (dim <= 0) throw validation_error("lie_algebra dim must be positive");
    if (f.size() != static_cast<std::size_t>(dim) * dim * dim)
        throw validation_error("lie_algebra f must have dim^3 entries");
    LieAlgebraSpec spec;
    spec.name = "custom";
    spec.dim = dim;
    spec.f = f;
    spec.rep = std::move(rep);
    return spec;
}

ValidationReport validate_lie(const LieAlgebraSpec& spec, double tol) {
    ValidationReport report;
    report.subject = "lie_algebra(" + spec.name + ")";
    const int n = spec.dim;

    double antisym = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                antisym = std::max(antisym, std::abs(spec.f_at(a, b, c) + spec.f_at(b, a, c)));
                antisym = std::max(antisym, std::abs(spec.f_at(a, b, c) + spec.f_at(a, c, b)));
            }
    report.add("f_totally_antisymmetric", antisym, tol);

    double jacobi = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int d = 0; d < n; ++d) {
                    double s = 0.0;
                    for (int m = 0; m < n; ++m)
                        s += spec.f_at(a, b, m) * spec.f_at(m, c, d) +
                             spec.f_at(b, c, m) * spec.f_at(m, a, d) +
                             spec.f_at(c, a, m) * spec.f_at(m, b, d);
                    jacobi = std::max(jacobi, std::abs(s));
                }
    report.add("jacobi_identity", jacobi, tol);

    if (!spec.rep.empty()) {
        double ortho = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const cplx t = -(spec.rep[a] * spec.rep[b]).trace();
                const double want = (a == b) ? 1.0 : 0.0;
                ortho = std::max(ortho, std::abs(t - cplx(want)));
            }
        report.add("basis_orthonormal", ortho, tol);

        const auto f2 = structure_constants(spec.rep);
        double df = 0.0;
        for (std::size_t i = 0; i < f2.size(); ++i) df = std::max(df, std::abs(f2[i] - spec.f[i]));
        report.add("f_matches_commutators", df, tol);
    }
    return report;
}

}  // namespace csrp
