#include "csrp/fermi_fock.hpp"

#include "csrp/errors.hpp"

namespace csrp {

namespace {

// Sign of sorting the generator list obtained by applying J to the ascending
// generators of `subset`; J maps id k to (k + n) mod 2n.
double j_sign(int subset, int n) {
    std::vector<int> mapped;
    for (int gen = 0; gen < 2 * n; ++gen)
        if (subset & (1 << gen)) mapped.push_back((gen + n) % (2 * n));
    // parity of inversions
    int inv = 0;
    for (std::size_t i = 0; i < mapped.size(); ++i)
        for (std::size_t j = i + 1; j < mapped.size(); ++j)
            if (mapped[i] > mapped[j]) ++inv;
    return (inv % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

FermiSpace::FermiSpace(const LieAlgebraSpec& lie, double vol) : n_(lie.dim), vol_(vol) {
    if (n_ < 1) throw contract_error("FermiSpace: need dim g >= 1");
    if (n_ > 8) throw capacity_error("FermiSpace: dim g > 8 not supported (4^n basis)");
    const int d = dim();
    gram_diag_.resize(d);
    for (int i = 0; i < d; ++i) gram_diag_(i) = std::pow(vol_, degree_of(i));

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(d);
    const int mask = (1 << n_) - 1;
    for (int i = 0; i < d; ++i) {
        const int swapped = ((i & mask) << n_) | ((i >> n_) & mask);
        trip.emplace_back(swapped, i, j_sign(i, n_));
    }
    j_mat_.resize(d, d);
    j_mat_.setFromTriplets(trip.begin(), trip.end());
}

FermiSpace build_fermi_space(const LieAlgebraSpec& lie, double vol) {
    return FermiSpace(lie, vol);
}

std::pair<double, int> FermiSpace::wedge_generator(int gen, int subset) const {
    const int bit = 1 << gen;
    if (subset & bit) return {0.0, -1};
    const int below = __builtin_popcount(static_cast<unsigned>(subset) & (bit - 1u));
    return {(below % 2 == 0) ? 1.0 : -1.0, subset | bit};
}

FermiState FermiSpace::multiply_one_particle(const FermiState& state,
                                             const Eigen::VectorXd& one_particle) const {
    FermiState out = FermiState::Zero(dim());
    for (int i = 0; i < dim(); ++i) {
        if (state(i) == 0.0) continue;
        for (int gen = 0; gen < generators(); ++gen) {
            if (one_particle(gen) == 0.0) continue;
            const auto [sign, target] = wedge_generator(gen, i);
            if (sign != 0.0) out(target) += sign * one_particle(gen) * state(i);
        }
    }
    return out;
}

FermiState FermiSpace::state_from_factors(const std::vector<Eigen::VectorXd>& factors) const {
    // Right-to-left so that the product reads left to right.
    FermiState s = vacuum();
    for (auto it = factors.rbegin(); it != factors.rend(); ++it)
        s = multiply_one_particle(s, *it);
    return s;
}

Eigen::VectorXd c_conjugation_signs(const FermiSpace& space) {
    Eigen::VectorXd signs(space.dim());
    const int n = space.colors();
    for (int i = 0; i < space.dim(); ++i) {
        const int deg = space.degree_of(i);
        const int s1 = deg * (deg - 1) / 2;
        const int s2 = __builtin_popcount(static_cast<unsigned>(i) >> n);
        signs(i) = ((s1 + s2) % 2 == 0) ? 1.0 : -1.0;
    }
    return signs;
}

FermiState c_conjugation(const FermiSpace& space, const FermiState& p) {
    return c_conjugation_signs(space).cwiseProduct(p);
}

OperatorMatrix number_operator_F(const FermiSpace& space) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(space.dim());
    for (int i = 0; i < space.dim(); ++i)
        trip.emplace_back(i, i, static_cast<double>(space.degree_of(i)));
    SpMat n(space.dim(), space.dim());
    n.setFromTriplets(trip.begin(), trip.end());
    return {n, MetricTag::fermi_gram_plus};
}

OperatorMatrix fermi_multiplication(const FermiSpace& space, const FermiState& eta) {
    std::vector<Eigen::Triplet<double>> trip;
    for (int m = 0; m < space.dim(); ++m) {
        if (eta(m) == 0.0) continue;
        // Multiply basis monomial e_m on the left of every basis state.
        std::vector<int> gens;
        for (int gen = 0; gen < space.generators(); ++gen)
            if (m & (1 << gen)) gens.push_back(gen);
        for (int col = 0; col < space.dim(); ++col) {
            if (m & col) continue;  // shared generator kills the wedge
            double sign = 1.0;
            int cur = col;
            for (auto it = gens.rbegin(); it != gens.rend(); ++it) {
                const auto [s, target] = space.wedge_generator(*it, cur);
                sign *= s;
                cur = target;
            }
            trip.emplace_back(cur, col, sign * eta(m));
        }
    }
    SpMat out(space.dim(), space.dim());
    out.setFromTriplets(trip.begin(), trip.end());
    return {out, MetricTag::fermi_gram_plus};
}

OperatorMatrix plus_adjoint(const FermiSpace& space, const OperatorMatrix& op) {
    const auto& d = space.gram_diag();
    SpMat at = SpMat(op.mat.transpose());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(at.nonZeros());
    for (int c = 0; c < at.outerSize(); ++c)
        for (SpMat::InnerIterator it(at, c); it; ++it)
            trip.emplace_back(it.row(), c, it.value() * d(c) / d(it.row()));
    SpMat out(space.dim(), space.dim());
    out.setFromTriplets(trip.begin(), trip.end());
    return {out, op.metric};
}

OperatorMatrix dagger_adjoint(const FermiSpace& space, const OperatorMatrix& op) {
    // J_F is an involution, so J^{-1} = J.
    const auto star = plus_adjoint(space, op);
    SpMat out = space.j_matrix() * star.mat * space.j_matrix();
    return {out, MetricTag::split_form};
}

}  // namespace csrp
