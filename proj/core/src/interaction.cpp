#include "csrp/interaction.hpp"

#include <cmath>

#include "csrp/errors.hpp"

namespace csrp {

BoseState build_xi_b(const SplittingSpec& spec, const LieAlgebraSpec& lie,
                     const BoseSpace& space) {
    if (space.degree() < 3) throw contract_error("build_xi_b: truncation degree < 3");
    const int g = spec.genus, n = lie.dim;

    // Pairing targets on the degree-3 multiset basis. Tuples with a repeated
    // generator pair to zero (f or N kills them), so any representative
    // ordering of the multiset gives the same value.
    const int off = space.degree_begin(3), count = space.degree_count(3);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(count);
    for (int a = 0; a < count; ++a) {
        const auto& mset = space.multiset(off + a);
        const int i = mset[0] / n, al = mset[0] % n;
        const int j = mset[1] / n, be = mset[1] % n;
        const int k = mset[2] / n, ga = mset[2] % n;
        (void)g;
        rhs(a) = -lie.f_at(al, be, ga) * spec.n_at(i, j, k);
    }
    const Eigen::VectorXd coeffs =
        Eigen::LLT<Eigen::MatrixXd>(space.gram_block(3)).solve(rhs);

    BoseState xi = BoseState::Zero(space.dim());
    xi.segment(off, count) = coeffs;
    return xi;
}

OperatorMatrix build_o_b(const BoseSpace& space, const BoseState& xi_b) {
    const OperatorMatrix mult = multiplication_operator(space, xi_b);
    const OperatorMatrix adj = gram_adjoint(space, mult);
    return {mult.mat + adj.mat, MetricTag::bose_gram};
}

Eigen::VectorXd build_xi_bf(const SplittingSpec& spec, const LieAlgebraSpec& lie,
                            const ProductSpace& pspace) {
    const BoseSpace& bspace = pspace.bose();
    const FermiSpace& fspace = pspace.fermi();
    if (bspace.degree() < 1) throw contract_error("build_xi_bf: truncation degree < 1");
    const int g = spec.genus, n = lie.dim;

    // Defining pairings against J((b_i e_a) otimes (0,b)^(2,c)) reduce, after
    // moving J to the test vector, to plain-basis pairings
    // <xi, (b_i e_a) otimes (0,b)^(2,c)> = +6 f_{abc} V_i.
    // Solve blockwise: Bose degree-1 Gram on the mode index, Fermi diagonal.
    const int bose_off = bspace.degree_begin(1);
    const int bose_count = bspace.degree_count(1);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(bose_count, n * n);  // (i,a) x (b,c)
    for (int col = 0; col < bose_count; ++col) {
        const int gen = bspace.multiset(bose_off + col)[0];
        const int i = gen / n, a = gen % n;
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                rhs(col, b * n + c) = 6.0 * lie.f_at(a, b, c) * spec.v_vec(i);
    }
    (void)g;
    const Eigen::MatrixXd bose_coeffs =
        Eigen::LLT<Eigen::MatrixXd>(bspace.gram_block(1)).solve(rhs);

    // Fermi pair (0,b)^(2,c) has squared norm vol^2 and the basis is
    // orthogonal, so the Fermi solve is a diagonal scaling.
    const double fermi_norm2 = fspace.vol() * fspace.vol();

    Eigen::VectorXd xi = Eigen::VectorXd::Zero(pspace.dim());
    const int df = fspace.dim();
    for (int col = 0; col < bose_count; ++col)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const double v = bose_coeffs(col, b * n + c) / fermi_norm2;
                if (v == 0.0) continue;
                const int mask = (1 << fspace.generator_id(0, b)) |
                                 (1 << fspace.generator_id(1, c));
                xi((bose_off + col) * df + mask) += v;
            }
    return xi;
}

SpMat product_multiplication(const ProductSpace& pspace, const Eigen::VectorXd& xi) {
    const BoseSpace& bspace = pspace.bose();
    const FermiSpace& fspace = pspace.fermi();
    const int df = fspace.dim();

    std::vector<Eigen::Triplet<double>> trip;
    for (int idx = 0; idx < xi.size(); ++idx) {
        if (xi(idx) == 0.0) continue;
        const int bose_idx = idx / df;
        const int fermi_mask = idx % df;
        if (bspace.degree_of(bose_idx) != 1 || fspace.degree_of(fermi_mask) != 2)
            throw contract_error(
                "product_multiplication: element must be Bose degree 1, Fermi degree 2");
        const auto& bmono = bspace.multiset(bose_idx);
        std::vector<int> fgens;
        for (int gidx = 0; gidx < fspace.generators(); ++gidx)
            if (fermi_mask & (1 << gidx)) fgens.push_back(gidx);

        for (int bcol = 0; bcol < bspace.dim(); ++bcol) {
            if (bspace.degree_of(bcol) + 1 > bspace.degree()) continue;
            BoseSpace::Multiset merged = bspace.multiset(bcol);
            merged.insert(std::upper_bound(merged.begin(), merged.end(), bmono[0]), bmono[0]);
            const int brow = bspace.index_of(merged);
            for (int fcol = 0; fcol < df; ++fcol) {
                if (fermi_mask & fcol) continue;
                // left wedge by (g1 ^ g2): g2 first, then g1
                double sign = 1.0;
                int cur = fcol;
                for (auto it = fgens.rbegin(); it != fgens.rend(); ++it) {
                    const auto [s, target] = fspace.wedge_generator(*it, cur);
                    sign *= s;
                    cur = target;
                }
                trip.emplace_back(brow * df + cur, bcol * df + fcol, sign * xi(idx));
            }
        }
    }
    SpMat out(pspace.dim(), pspace.dim());
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

OperatorMatrix build_o_bf(const ProductSpace& pspace, const Eigen::VectorXd& xi_bf) {
    const SpMat mult = product_multiplication(pspace, xi_bf);
    const SpMat star = pspace.gram_adjoint(mult);
    const SpMat dagger = pspace.j_full() * star * pspace.j_full();
    return {mult + dagger, MetricTag::split_form};
}

BoundCertificate certify_bound(const ProductSpace& pspace, const OperatorMatrix& o_bf,
                               double eps, double lambda, const std::vector<int>& ns) {
    BoundCertificate cert;
    const SpMat& o = o_bf.mat;
    if (o.nonZeros() == 0) {
        cert.slack = 0.0;
        return cert;
    }
    const SpMat ostar = pspace.gram_adjoint(o);
    const Eigen::VectorXd& nb = pspace.bose_number_diag();

    const auto mu_of = [&](double k1) {
        const auto mv = [&](const Eigen::VectorXcd& v) {
            Eigen::VectorXcd w = ostar * (o * v).eval();
            w.array() -= k1 * nb.array().cast<std::complex<double>>() * v.array();
            return w;
        };
        return g_largest_eigenvalue(pspace, mv, 400, 0xb0d);
    };

    // Grid over K1, scaled by the top of O*O so the certificate scales
    // homogeneously with the interaction strength.
    const double w_top = std::max(mu_of(0.0).upper, 0.0);
    double best_obj = 0.0;
    bool first = true;
    const int dmax = std::max(1, pspace.bose().degree());
    for (int j = -4; j <= 8; ++j) {
        const double k1 = (j < -3) ? 0.0 : (w_top / dmax) * std::pow(2.0, j);
        const double k2 = std::max(0.0, mu_of(k1).upper);
        const double obj = k1 + k2;
        if (first || obj < best_obj - 1e-12 * std::abs(best_obj)) {
            first = false;
            best_obj = obj;
            cert.k1 = k1;
            cert.k2 = k2;
        }
    }

    // Verify the slack of the chosen pair with an independent run: the min
    // eigenvalue of K1 N_B + K2 - O*O is -max eig of the negation.
    {
        const auto mv = [&](const Eigen::VectorXcd& v) {
            Eigen::VectorXcd w = ostar * (o * v).eval();
            w.array() -= cert.k1 * nb.array().cast<std::complex<double>>() * v.array();
            w -= cert.k2 * v;
            return w;
        };
        cert.slack = -g_largest_eigenvalue(pspace, mv, 600, 0x51ac).theta;
    }

    // Norm growth of T_n = e^{-eps N/n} exp(i lambda O_BF / n).
    const double o_norm = spectral_norm_estimate(o);
    const Eigen::VectorXd& nfull = pspace.number_diag();
    for (int n : ns) {
        const auto apply_t = [&](const Eigen::VectorXcd& v) {
            Eigen::VectorXcd w =
                exp_action(o, std::complex<double>(0.0, lambda / n), v, o_norm);
            w.array() *= (-eps / n * nfull.array()).exp().cast<std::complex<double>>();
            return w;
        };
        // || T ||^2 = top of T* T in the G metric. T = D exp(i a O) with the
        // real diagonal D = e^{-eps N/n}, so T* = exp(i a O)* D with
        // exp(i a O)* = G^{-1} exp(-i a O^T) G.
        const SpMat ot = SpMat(o.transpose());
        const auto mv = [&](const Eigen::VectorXcd& v) {
            Eigen::VectorXcd x = apply_t(v);
            x.array() *= (-eps / n * nfull.array()).exp().cast<std::complex<double>>();
            x = pspace.apply_gram(x);
            x = exp_action(ot, std::complex<double>(0.0, -lambda / n), x, o_norm);
            x = pspace.solve_gram(x);
            return x;
        };
        const double top = std::max(g_largest_eigenvalue(pspace, mv, 200, 0xc0de).theta, 0.0);
        const double cn = n * 0.5 * std::log(std::max(top, 1e-300));
        cert.growth.emplace_back(n, cn);
    }
    if (!cert.growth.empty()) cert.c = cert.growth.back().second;
    return cert;
}

InteractionSet build_interactions(const SplittingSpec& spec, const LieAlgebraSpec& lie,
                                  const ProductSpace& pspace, bool certify) {
    InteractionSet set;
    if (pspace.bose().degree() >= 3) {
        set.xi_b = build_xi_b(spec, lie, pspace.bose());
        set.o_b = build_o_b(pspace.bose(), set.xi_b);
    } else {
        // Below the cubic threshold, multiplication by any degree-3 element
        // truncates to zero, so the Bose interaction operator vanishes.
        set.xi_b = BoseState::Zero(pspace.bose().dim());
        set.o_b = {SpMat(pspace.bose().dim(), pspace.bose().dim()), MetricTag::bose_gram};
    }
    set.xi_bf = build_xi_bf(spec, lie, pspace);
    set.o_bf = build_o_bf(pspace, set.xi_bf);
    if (certify) set.bound = certify_bound(pspace, set.o_bf);
    return set;
}

}  // namespace csrp
