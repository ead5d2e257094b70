#include "csrp/bose_fock.hpp"

#include <algorithm>

#include "csrp/errors.hpp"

namespace csrp {

double permanent(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    if (n == 0) return 1.0;
    if (n == 1) return m(0, 0);
    // Ryser with Gray code.
    Eigen::VectorXd row_sum = Eigen::VectorXd::Zero(n);
    double total = 0.0;
    int sign = -1;
    std::uint32_t prev = 0;
    for (std::uint32_t k = 1; k < (1u << n); ++k) {
        const std::uint32_t gray = k ^ (k >> 1);
        const std::uint32_t diff = gray ^ prev;
        const int j = __builtin_ctz(diff);
        if (gray & diff)
            row_sum += m.col(j);
        else
            row_sum -= m.col(j);
        prev = gray;
        sign = -sign;
        double prod = 1.0;
        for (int i = 0; i < n; ++i) prod *= row_sum(i);
        total += sign * prod;
    }
    if (n % 2 == 0) total = -total;
    return total;
}

namespace {

void enumerate_multisets(int num_gen, int degree, std::vector<std::uint16_t>& current,
                         std::vector<std::vector<std::uint16_t>>& out, int min_gen) {
    if (static_cast<int>(current.size()) == degree) {
        out.push_back(current);
        return;
    }
    for (int gidx = min_gen; gidx < num_gen; ++gidx) {
        current.push_back(static_cast<std::uint16_t>(gidx));
        enumerate_multisets(num_gen, degree, current, out, gidx);
        current.pop_back();
    }
}

std::vector<int> color_counts(const std::vector<std::uint16_t>& mset, int n_colors) {
    std::vector<int> c(n_colors, 0);
    for (auto gen : mset) ++c[gen % n_colors];
    return c;
}

}  // namespace

BoseSpace::BoseSpace(const SplittingSpec& spec, const LieAlgebraSpec& lie, int degree) {
    if (degree < 0) throw contract_error("BoseSpace: degree must be >= 0");
    g_ = spec.genus;
    n_ = lie.dim;
    d_ = degree;
    const int gens = g_ * n_;

    degree_offset_.assign(d_ + 2, 0);
    for (int k = 0; k <= d_; ++k) {
        degree_offset_[k] = static_cast<int>(basis_.size());
        std::vector<std::uint16_t> cur;
        enumerate_multisets(gens, k, cur, basis_, 0);
    }
    degree_offset_[d_ + 1] = static_cast<int>(basis_.size());
    for (int i = 0; i < dim(); ++i) index_[basis_[i]] = i;

    // M = Q otimes delta on generators (mode, color).
    metric_.setZero(gens, gens);
    for (int i = 0; i < g_; ++i)
        for (int j = 0; j < g_; ++j)
            for (int a = 0; a < n_; ++a)
                metric_(generator_id(i, a), generator_id(j, a)) = spec.q_mat(i, j);

    gram_.resize(d_ + 1);
    gram_llt_.resize(d_ + 1);
    for (int k = 0; k <= d_; ++k) {
        const int nk = degree_count(k);
        const int off = degree_begin(k);
        Eigen::MatrixXd gk(nk, nk);
        Eigen::MatrixXd pairwise;
        for (int a = 0; a < nk; ++a) {
            const auto& I = basis_[off + a];
            const auto ci = color_counts(I, n_);
            for (int b = a; b < nk; ++b) {
                const auto& J = basis_[off + b];
                // With M = Q otimes delta the permanent vanishes unless the
                // color multisets agree.
                if (ci != color_counts(J, n_)) {
                    gk(a, b) = gk(b, a) = 0.0;
                    continue;
                }
                pairwise.resize(k, k);
                for (int r = 0; r < k; ++r)
                    for (int c = 0; c < k; ++c) pairwise(r, c) = metric_(I[r], J[c]);
                const double v = permanent(pairwise);
                gk(a, b) = gk(b, a) = v;
            }
        }
        gram_[k] = gk;
        gram_llt_[k].compute(gk);
        if (gram_llt_[k].info() != Eigen::Success)
            throw numeric_error("BoseSpace: gram block not positive definite");
    }

    gram_diagonal_ = true;
    for (int k = 0; k <= d_ && gram_diagonal_; ++k) {
        const auto& gk = gram_[k];
        for (int a = 0; a < gk.rows() && gram_diagonal_; ++a)
            for (int b = 0; b < gk.cols(); ++b)
                if (a != b && gk(a, b) != 0.0) {
                    gram_diagonal_ = false;
                    break;
                }
    }
}

BoseSpace build_bose_space(const SplittingSpec& spec, const LieAlgebraSpec& lie, int degree) {
    return BoseSpace(spec, lie, degree);
}

int BoseSpace::index_of(const Multiset& m) const {
    const auto it = index_.find(m);
    return it == index_.end() ? -1 : it->second;
}

double BoseSpace::ip(const BoseState& x, const BoseState& y) const {
    return x.dot(apply_gram(y));
}

std::complex<double> BoseSpace::ip(const Eigen::VectorXcd& x, const Eigen::VectorXcd& y) const {
    std::complex<double> s = 0.0;
    for (int k = 0; k <= d_; ++k) {
        const int off = degree_begin(k), nk = degree_count(k);
        // Eigen's dot conjugates its left argument.
        s += x.segment(off, nk).dot(Eigen::VectorXcd(gram_[k] * y.segment(off, nk)));
    }
    return s;
}

Eigen::VectorXd BoseSpace::apply_gram(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out(dim());
    for (int k = 0; k <= d_; ++k) {
        const int off = degree_begin(k), nk = degree_count(k);
        out.segment(off, nk) = gram_[k] * x.segment(off, nk);
    }
    return out;
}

Eigen::VectorXd BoseSpace::solve_gram(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out(dim());
    for (int k = 0; k <= d_; ++k) {
        const int off = degree_begin(k), nk = degree_count(k);
        out.segment(off, nk) = gram_llt_[k].solve(x.segment(off, nk));
    }
    return out;
}

BoseState BoseSpace::vacuum() const {
    BoseState v = BoseState::Zero(dim());
    v(0) = 1.0;
    return v;
}

BoseState BoseSpace::multiply_one_particle(const BoseState& state,
                                           const Eigen::VectorXd& one_particle) const {
    BoseState out = BoseState::Zero(dim());
    const int gens = generators();
    Multiset scratch;
    for (int i = 0; i < dim(); ++i) {
        if (state(i) == 0.0) continue;
        if (degree_of(i) + 1 > d_) continue;
        const auto& I = basis_[i];
        for (int gidx = 0; gidx < gens; ++gidx) {
            if (one_particle(gidx) == 0.0) continue;
            scratch = I;
            scratch.insert(std::upper_bound(scratch.begin(), scratch.end(),
                                            static_cast<std::uint16_t>(gidx)),
                           static_cast<std::uint16_t>(gidx));
            out(index_.at(scratch)) += state(i) * one_particle(gidx);
        }
    }
    return out;
}

BoseState BoseSpace::state_from_factors(const std::vector<Eigen::VectorXd>& factors) const {
    BoseState s = vacuum();
    for (const auto& f : factors) s = multiply_one_particle(s, f);
    return s;
}

OperatorMatrix number_operator(const BoseSpace& space) {
    SpMat n(space.dim(), space.dim());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(space.dim());
    for (int i = 0; i < space.dim(); ++i)
        trip.emplace_back(i, i, static_cast<double>(space.degree_of(i)));
    n.setFromTriplets(trip.begin(), trip.end());
    return {n, MetricTag::bose_gram};
}

OperatorMatrix multiplication_operator(const BoseSpace& space, const BoseState& xi) {
    // xi must be homogeneous of degree 3.
    for (int i = 0; i < space.dim(); ++i)
        if (xi(i) != 0.0 && space.degree_of(i) != 3)
            throw contract_error("multiplication_operator: xi must be homogeneous of degree 3");
    if (space.degree() < 3)
        throw contract_error("multiplication_operator: truncation degree < 3");

    std::vector<Eigen::Triplet<double>> trip;
    for (int xi_idx = 0; xi_idx < space.dim(); ++xi_idx) {
        if (xi(xi_idx) == 0.0) continue;
        const auto& I = space.multiset(xi_idx);
        for (int col = 0; col < space.dim(); ++col) {
            if (space.degree_of(col) + 3 > space.degree()) continue;
            BoseSpace::Multiset merged = space.multiset(col);
            merged.insert(merged.end(), I.begin(), I.end());
            std::sort(merged.begin(), merged.end());
            trip.emplace_back(space.index_of(merged), col, xi(xi_idx));
        }
    }
    SpMat m(space.dim(), space.dim());
    m.setFromTriplets(trip.begin(), trip.end());
    return {m, MetricTag::bose_gram};
}

OperatorMatrix gram_adjoint(const BoseSpace& space, const OperatorMatrix& op) {
    const int dim = space.dim();
    if (space.gram_is_diagonal()) {
        Eigen::VectorXd diag(dim);
        for (int k = 0; k <= space.degree(); ++k) {
            const int off = space.degree_begin(k);
            for (int a = 0; a < space.degree_count(k); ++a)
                diag(off + a) = space.gram_block(k)(a, a);
        }
        SpMat at = SpMat(op.mat.transpose());
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(at.nonZeros());
        for (int c = 0; c < at.outerSize(); ++c)
            for (SpMat::InnerIterator it(at, c); it; ++it)
                trip.emplace_back(it.row(), c, it.value() * diag(c) / diag(it.row()));
        SpMat out(dim, dim);
        out.setFromTriplets(trip.begin(), trip.end());
        return {out, op.metric};
    }
    // General Gram: dense route, adequate at the sizes where Q != I is used.
    Eigen::MatrixXd a = Eigen::MatrixXd(op.mat);
    Eigen::MatrixXd b = a.transpose();
    // b <- b * G (columns by degree block), then G^{-1} * b (rows by block).
    Eigen::MatrixXd bg(dim, dim);
    for (int k = 0; k <= space.degree(); ++k) {
        const int off = space.degree_begin(k), nk = space.degree_count(k);
        bg.middleCols(off, nk) = b.middleCols(off, nk) * space.gram_block(k);
    }
    Eigen::MatrixXd result(dim, dim);
    for (int k = 0; k <= space.degree(); ++k) {
        const int off = space.degree_begin(k), nk = space.degree_count(k);
        Eigen::LLT<Eigen::MatrixXd> llt(space.gram_block(k));
        result.middleRows(off, nk) = llt.solve(bg.middleRows(off, nk));
    }
    return {result.sparseView(), op.metric};
}

}  // namespace csrp
