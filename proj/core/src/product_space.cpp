#include "csrp/product_space.hpp"

#include <cmath>

#include "csrp/errors.hpp"
#include "csrp/rng.hpp"

namespace csrp {

ProductSpace::ProductSpace(const BoseSpace& bose, const FermiSpace& fermi)
    : bose_(&bose), fermi_(&fermi) {
    const int db = bose.dim(), df = fermi.dim();
    number_diag_.resize(db * df);
    bose_number_.resize(db * df);
    for (int b = 0; b < db; ++b)
        for (int f = 0; f < df; ++f) {
            number_diag_(b * df + f) = bose.degree_of(b) + fermi.degree_of(f);
            bose_number_(b * df + f) = bose.degree_of(b);
        }

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(db) * df);
    const SpMat& jf = fermi.j_matrix();
    for (int c = 0; c < jf.outerSize(); ++c)
        for (SpMat::InnerIterator it(jf, c); it; ++it)
            for (int b = 0; b < db; ++b)
                trip.emplace_back(b * df + it.row(), b * df + c, it.value());
    j_full_.resize(db * df, db * df);
    j_full_.setFromTriplets(trip.begin(), trip.end());
}

SpMat ProductSpace::lift_bose(const SpMat& a) const {
    const int df = fermi_->dim();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(a.nonZeros()) * df);
    for (int c = 0; c < a.outerSize(); ++c)
        for (SpMat::InnerIterator it(a, c); it; ++it)
            for (int f = 0; f < df; ++f)
                trip.emplace_back(it.row() * df + f, c * df + f, it.value());
    SpMat out(dim(), dim());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SpMat ProductSpace::lift_fermi(const SpMat& a) const {
    const int db = bose_->dim(), df = fermi_->dim();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(a.nonZeros()) * db);
    for (int c = 0; c < a.outerSize(); ++c)
        for (SpMat::InnerIterator it(a, c); it; ++it)
            for (int b = 0; b < db; ++b)
                trip.emplace_back(b * df + it.row(), b * df + c, it.value());
    SpMat out(dim(), dim());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

Eigen::VectorXcd ProductSpace::apply_gram(const Eigen::VectorXcd& x) const {
    const int db = bose_->dim(), df = fermi_->dim();
    Eigen::VectorXcd out(dim());
    // (G_B otimes G_F) x: Fermi first (diagonal), then Bose blocks per degree.
    Eigen::VectorXcd t(x);
    const auto& fd = fermi_->gram_diag();
    for (int b = 0; b < db; ++b)
        t.segment(b * df, df).array() *= fd.array();
    if (bose_->gram_is_diagonal()) {
        for (int b = 0; b < db; ++b) {
            const int k = bose_->degree_of(b);
            const double gb = bose_->gram_block(k)(b - bose_->degree_begin(k),
                                                   b - bose_->degree_begin(k));
            out.segment(b * df, df) = gb * t.segment(b * df, df);
        }
        return out;
    }
    for (int k = 0; k <= bose_->degree(); ++k) {
        const int off = bose_->degree_begin(k), nk = bose_->degree_count(k);
        Eigen::Map<const Eigen::MatrixXcd> tin(t.data() + off * df, df, nk);
        Eigen::Map<Eigen::MatrixXcd> tout(out.data() + off * df, df, nk);
        tout = tin * bose_->gram_block(k).transpose();
    }
    return out;
}

Eigen::VectorXcd ProductSpace::solve_gram(const Eigen::VectorXcd& x) const {
    const int db = bose_->dim(), df = fermi_->dim();
    Eigen::VectorXcd out(dim());
    Eigen::VectorXcd t(x);
    const auto& fd = fermi_->gram_diag();
    for (int b = 0; b < db; ++b)
        t.segment(b * df, df).array() /= fd.array();
    if (bose_->gram_is_diagonal()) {
        for (int b = 0; b < db; ++b) {
            const int k = bose_->degree_of(b);
            const double gb = bose_->gram_block(k)(b - bose_->degree_begin(k),
                                                   b - bose_->degree_begin(k));
            out.segment(b * df, df) = t.segment(b * df, df) / gb;
        }
        return out;
    }
    for (int k = 0; k <= bose_->degree(); ++k) {
        const int off = bose_->degree_begin(k), nk = bose_->degree_count(k);
        Eigen::LLT<Eigen::MatrixXd> llt(bose_->gram_block(k));
        Eigen::Map<const Eigen::MatrixXcd> tin(t.data() + off * df, df, nk);
        Eigen::MatrixXcd rhs = tin.transpose();
        Eigen::MatrixXcd sol(nk, df);
        sol.real() = llt.solve(Eigen::MatrixXd(rhs.real()));
        sol.imag() = llt.solve(Eigen::MatrixXd(rhs.imag()));
        Eigen::Map<Eigen::MatrixXcd> tout(out.data() + off * df, df, nk);
        tout = sol.transpose();
    }
    return out;
}

std::complex<double> ProductSpace::ip(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const {
    // Eigen's dot conjugates its left argument.
    return x.dot(apply_gram(y));
}

double ProductSpace::norm(const Eigen::VectorXcd& x) const {
    return std::sqrt(std::max(0.0, ip(x, x).real()));
}

SpMat ProductSpace::gram_adjoint(const SpMat& a) const {
    // A* = G^{-1} A^T G with G = G_B otimes G_F.
    const int df = fermi_->dim();
    const auto& fd = fermi_->gram_diag();
    if (bose_->gram_is_diagonal()) {
        Eigen::VectorXd gd(dim());
        for (int b = 0; b < bose_->dim(); ++b) {
            const int k = bose_->degree_of(b);
            const double gb = bose_->gram_block(k)(b - bose_->degree_begin(k),
                                                   b - bose_->degree_begin(k));
            for (int f = 0; f < df; ++f) gd(b * df + f) = gb * fd(f);
        }
        SpMat at = SpMat(a.transpose());
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(at.nonZeros());
        for (int c = 0; c < at.outerSize(); ++c)
            for (SpMat::InnerIterator it(at, c); it; ++it)
                trip.emplace_back(it.row(), c, it.value() * gd(c) / gd(it.row()));
        SpMat out(dim(), dim());
        out.setFromTriplets(trip.begin(), trip.end());
        return out;
    }
    if (dim() > 8192)
        throw capacity_error("gram_adjoint on a non-diagonal product Gram above dense cap");
    Eigen::MatrixXd ad = Eigen::MatrixXd(a).transpose();
    // columns scaled by G, then rows solved by G; reuse the complex helpers.
    Eigen::MatrixXd m(dim(), dim());
    for (int c = 0; c < dim(); ++c) {
        Eigen::VectorXcd col = ad.col(c).cast<std::complex<double>>();
        m.col(c) = apply_gram(col).real();
    }
    Eigen::MatrixXd out(dim(), dim());
    for (int c = 0; c < dim(); ++c) {
        Eigen::VectorXcd col = m.col(c).cast<std::complex<double>>();
        out.col(c) = solve_gram(col).real();
    }
    return out.sparseView();
}

Eigen::VectorXcd exp_action(const SpMat& a, std::complex<double> scale,
                            const Eigen::VectorXcd& v, double norm_est, double tol) {
    if (scale == std::complex<double>(0.0, 0.0)) return v;
    const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(scale) * norm_est)));
    const std::complex<double> h = scale / static_cast<double>(steps);
    Eigen::VectorXcd cur = v;
    for (int s = 0; s < steps; ++s) {
        Eigen::VectorXcd acc = cur;
        Eigen::VectorXcd term = cur;
        const double base = cur.norm();
        for (int k = 1; k <= 64; ++k) {
            term = (h / static_cast<double>(k)) * (a * term).eval();
            acc += term;
            if (term.norm() <= tol * std::max(base, acc.norm())) break;
            if (k == 64)
                throw numeric_error("exp_action: Taylor series failed to converge");
        }
        cur.swap(acc);
    }
    return cur;
}

double spectral_norm_estimate(const SpMat& a, int iters, std::uint64_t seed) {
    if (a.nonZeros() == 0) return 0.0;
    Rng rng = Rng::stream(seed, 0x5eec);
    Eigen::VectorXd v(a.cols());
    for (int i = 0; i < v.size(); ++i) v(i) = rng.gaussian();
    v.normalize();
    const SpMat at = SpMat(a.transpose());
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        Eigen::VectorXd w = at * (a * v).eval();
        const double n = w.norm();
        if (n == 0.0) return 0.0;
        lambda = n;
        v = w / n;
    }
    return std::sqrt(lambda);
}

ExtremeEig g_largest_eigenvalue(const ProductSpace& space,
                                const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& mv,
                                int iters, std::uint64_t seed) {
    // Lanczos in the G inner product with full reorthogonalization; handles
    // the tightly clustered spectra of the transfer-operator norms.
    const int dim = space.dim();
    const int kmax = std::min(iters, dim);
    Rng rng = Rng::stream(seed, 0x1a2b);
    std::vector<Eigen::VectorXcd> basis;
    basis.reserve(kmax);
    Eigen::VectorXcd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = std::complex<double>(rng.gaussian(), 0.0);
    v /= space.norm(v);
    basis.push_back(v);

    std::vector<double> alpha, beta;  // tridiagonal entries
    Eigen::VectorXcd w;
    for (int k = 0; k < kmax; ++k) {
        w = mv(basis[k]);
        const double a = space.ip(basis[k], w).real();
        alpha.push_back(a);
        w -= a * basis[k];
        if (k > 0) w -= beta[k - 1] * basis[k - 1];
        for (const auto& q : basis) w -= space.ip(q, w) * q;  // reorthogonalize
        const double b = space.norm(w);
        if (b < 1e-13 * std::max(1.0, std::abs(a)) || k == kmax - 1) break;
        beta.push_back(b);
        basis.push_back(w / b);
    }

    const int k = static_cast<int>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
    for (int i = 0; i < k; ++i) {
        tri(i, i) = alpha[i];
        if (i + 1 < k) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const int top = k - 1;
    const double theta = es.eigenvalues()(top);
    // residual bound: beta_k |last Ritz component|
    const double tail = (static_cast<int>(beta.size()) >= k)
                            ? beta[k - 1] * std::abs(es.eigenvectors()(k - 1, top))
                            : 0.0;
    return {theta, theta + tail};
}

}  // namespace csrp
