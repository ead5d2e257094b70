#include <doctest.h>

#include "csrp/errors.hpp"
#include "csrp/interaction.hpp"
#include "csrp/partition.hpp"
#include "csrp/rng.hpp"

using namespace csrp;

namespace {

struct Setup {
    LieAlgebraSpec lie;
    SplittingSpec spec;
    BoseSpace bspace;
    FermiSpace fspace;
    ProductSpace pspace;

    Setup(const char* lie_name, int genus, int degree, double amplitude = 1.0)
        : lie(load_preset(lie_name)),
          spec(canonical_preset(genus, lie, amplitude)),
          bspace(spec, lie, degree),
          fspace(lie, spec.vol),
          pspace(bspace, fspace) {}
};

}  // namespace

TEST_CASE("xi_B vanishes for low genus or an abelian algebra") {
    {
        Setup s("su2", 1, 3);
        CHECK(build_xi_b(s.spec, s.lie, s.bspace).cwiseAbs().maxCoeff() == 0.0);
    }
    {
        Setup s("u1", 3, 3);
        CHECK(build_xi_b(s.spec, s.lie, s.bspace).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("xi_B: defining pairings, the explicit coefficient, and linearity") {
    Setup s("su2", 3, 3, 1.0);
    const BoseState xi = build_xi_b(s.spec, s.lie, s.bspace);
    CHECK(s.bspace.ip(xi, xi) > 0.0);

    // re-pair against every degree-3 basis element
    const int off = s.bspace.degree_begin(3), count = s.bspace.degree_count(3);
    const Eigen::VectorXd paired = s.bspace.gram_block(3) * xi.segment(off, count);
    double res = 0.0;
    for (int a = 0; a < count; ++a) {
        const auto& mset = s.bspace.multiset(off + a);
        const int n = s.lie.dim;
        const double want = -s.lie.f_at(mset[0] % n, mset[1] % n, mset[2] % n) *
                            s.spec.n_at(mset[0] / n, mset[1] / n, mset[2] / n);
        res = std::max(res, std::abs(paired(a) - want));
    }
    CHECK(res < 1e-10);

    // coefficient against (b1 e1)(b2 e2)(b3 e3): Q = I makes the Gram entry 1
    BoseSpace::Multiset target = {static_cast<std::uint16_t>(s.bspace.generator_id(0, 0)),
                                  static_cast<std::uint16_t>(s.bspace.generator_id(1, 1)),
                                  static_cast<std::uint16_t>(s.bspace.generator_id(2, 2))};
    const int idx = s.bspace.index_of(target);
    REQUIRE(idx >= 0);
    CHECK(xi(idx) == doctest::Approx(-s.lie.f_at(0, 1, 2) * s.spec.n_at(0, 1, 2)));

    Setup s2("su2", 3, 3, 2.0);
    const BoseState xi2 = build_xi_b(s2.spec, s2.lie, s2.bspace);
    CHECK((xi2 - 2.0 * xi).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("equal-Frobenius choice inputs give equal xi_B norms") {
    const auto lie = load_preset("su2");
    auto spec_a = canonical_preset(3, lie, 1.0);
    auto spec_b = canonical_preset(3, lie, 1.0);
    // a different totally antisymmetric tensor with the same Frobenius norm:
    // scale and rotate the support
    for (auto& v : spec_b.n_tensor) v = 0.0;
    const double w = std::sqrt(6.0) / std::sqrt(6.0);  // keep ||N||_F = sqrt(6)
    const int g = 3;
    auto set = [&](int a, int b, int c, double val) {
        spec_b.n_tensor[(a * g + b) * g + c] = val;
    };
    // N'_{abc} = -1 on the same support: equal Frobenius norm
    set(0, 1, 2, -w), set(1, 2, 0, -w), set(2, 0, 1, -w);
    set(1, 0, 2, w), set(2, 1, 0, w), set(0, 2, 1, w);

    const BoseSpace space(spec_a, lie, 3);
    const BoseState xa = build_xi_b(spec_a, lie, space);
    const BoseState xb = build_xi_b(spec_b, lie, space);
    CHECK(std::sqrt(space.ip(xa, xa)) ==
          doctest::Approx(std::sqrt(space.ip(xb, xb))).epsilon(1e-10));
}

TEST_CASE("O_B: zero element, vacuum expectation, block structure, unitarity") {
    Setup s("su2", 3, 3);

    SUBCASE("xi = 0 gives O_B = 0") {
        const auto ob = build_o_b(s.bspace, BoseState::Zero(s.bspace.dim()));
        CHECK(ob.mat.nonZeros() == 0);
    }

    const BoseState xi = build_xi_b(s.spec, s.lie, s.bspace);
    const auto ob = build_o_b(s.bspace, xi);

    SUBCASE("<Omega, O_B Omega> = 0 by degree orthogonality") {
        const BoseState v = ob.mat * s.bspace.vacuum();
        CHECK(std::abs(s.bspace.ip(s.bspace.vacuum(), v)) < 1e-14);
    }

    SUBCASE("self-adjoint in the Gram; maps degree k to k +- 3") {
        const auto adj = gram_adjoint(s.bspace, ob);
        CHECK((Eigen::MatrixXd(adj.mat) - Eigen::MatrixXd(ob.mat)).cwiseAbs().maxCoeff() <
              1e-12);
        for (int c = 0; c < ob.mat.outerSize(); ++c)
            for (SpMat::InnerIterator it(ob.mat, c); it; ++it)
                CHECK(std::abs(s.bspace.degree_of(static_cast<int>(it.row())) -
                               s.bspace.degree_of(c)) == 3);
    }

    SUBCASE("exp(i lambda O_B) preserves the Gram norm") {
        Rng rng(70);
        const double norm_est = spectral_norm_estimate(ob.mat);
        for (double lambda : {0.1, 1.0, 10.0}) {
            Eigen::VectorXcd v(s.bspace.dim());
            for (int i = 0; i < v.size(); ++i)
                v(i) = std::complex<double>(rng.gaussian(), rng.gaussian());
            const Eigen::VectorXcd w =
                exp_action(ob.mat, std::complex<double>(0.0, lambda), v, norm_est);
            const double nv = std::sqrt(s.bspace.ip(v, v).real());
            const double nw = std::sqrt(s.bspace.ip(w, w).real());
            CHECK(std::abs(nw - nv) < 1e-9 * nv);
        }
    }
}

TEST_CASE("xi_BF: vanishing cases and the genus-1 Fermi-only interaction") {
    {
        Setup s("u1", 2, 2);
        CHECK(build_xi_bf(s.spec, s.lie, s.pspace).cwiseAbs().maxCoeff() == 0.0);
    }
    {
        Setup s("su2", 2, 2);
        auto spec = s.spec;
        spec.v_vec.setZero();
        CHECK(build_xi_bf(spec, s.lie, s.pspace).cwiseAbs().maxCoeff() == 0.0);
    }
    {
        Setup s("su2", 1, 3);
        const BoseState xi_b = build_xi_b(s.spec, s.lie, s.bspace);
        CHECK(xi_b.cwiseAbs().maxCoeff() == 0.0);  // O_B = 0 at genus 1
        const Eigen::VectorXd xi_bf = build_xi_bf(s.spec, s.lie, s.pspace);
        CHECK(xi_bf.cwiseAbs().maxCoeff() > 0.0);  // the Fermi sector acts alone
    }
}

TEST_CASE("xi_BF defining pairings against the J-twisted test vectors") {
    Setup s("su2", 2, 2);
    const Eigen::VectorXd xi = build_xi_bf(s.spec, s.lie, s.pspace);
    const int n = s.lie.dim;
    double res = 0.0;
    for (int i = 0; i < s.spec.genus; ++i)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    // test vector (b_i e_a) otimes (0,b) ^ (2,c), then J
                    Eigen::VectorXcd t = Eigen::VectorXcd::Zero(s.pspace.dim());
                    const int bose_idx =
                        s.bspace.degree_begin(1) + s.bspace.generator_id(i, a);
                    const int mask = (1 << s.fspace.generator_id(0, b)) |
                                     (1 << s.fspace.generator_id(1, c));
                    t(bose_idx * s.fspace.dim() + mask) = 1.0;
                    const Eigen::VectorXcd jt = s.pspace.j_full() * t;
                    const double got =
                        s.pspace.ip(xi.cast<std::complex<double>>(), jt).real();
                    const double want = 6.0 * s.lie.f_at(a, b, c) * s.spec.v_vec(i);
                    res = std::max(res, std::abs(got - want));
                }
    CHECK(res < 1e-10);
}

TEST_CASE("O_BF: split-form symmetry and the degree block structure") {
    Setup s("su2", 2, 3);
    const Eigen::VectorXd xi = build_xi_bf(s.spec, s.lie, s.pspace);
    const auto obf = build_o_bf(s.pspace, xi);
    Rng rng(71);

    SUBCASE("dagger symmetry on the full matrices") {
        // <O x, y>_split = <x, O y>_split with <x,y>_split = <x, J y>_G
        for (int t = 0; t < 50; ++t) {
            Eigen::VectorXcd x(s.pspace.dim()), y(s.pspace.dim());
            for (int i = 0; i < x.size(); ++i) {
                x(i) = std::complex<double>(rng.gaussian(), 0.0);
                y(i) = std::complex<double>(rng.gaussian(), 0.0);
            }
            const auto jy = (s.pspace.j_full() * y).eval();
            const auto jox = (s.pspace.j_full() * (obf.mat * x).eval()).eval();
            const double lhs = s.pspace.ip(Eigen::VectorXcd(obf.mat * x), jy).real();
            const double rhs = s.pspace.ip(x, Eigen::VectorXcd(s.pspace.j_full() *
                                                               (obf.mat * y).eval())).real();
            (void)jox;
            CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)}));
        }
    }

    SUBCASE("Bose degree changes by exactly one") {
        const int df = s.fspace.dim();
        for (int c = 0; c < obf.mat.outerSize(); ++c)
            for (SpMat::InnerIterator it(obf.mat, c); it; ++it) {
                const int row_deg = s.bspace.degree_of(static_cast<int>(it.row()) / df);
                const int col_deg = s.bspace.degree_of(c / df);
                CHECK(std::abs(row_deg - col_deg) == 1);
            }
    }
}

TEST_CASE("certify_bound: trivial operator, spectral slack, quadratic scaling") {
    SUBCASE("O_BF = 0 certifies (0, 0)") {
        Setup s("u1", 1, 2);
        const auto obf = build_o_bf(s.pspace, Eigen::VectorXd::Zero(s.pspace.dim()));
        const auto cert = certify_bound(s.pspace, obf);
        CHECK(cert.k1 == 0.0);
        CHECK(cert.k2 == 0.0);
    }

    Setup s("su2", 2, 2);
    const Eigen::VectorXd xi = build_xi_bf(s.spec, s.lie, s.pspace);
    const auto obf = build_o_bf(s.pspace, xi);
    const auto cert = certify_bound(s.pspace, obf, 0.1, 1.0, {4, 8});
    CHECK(cert.slack >= -1e-8);

    SUBCASE("doubling xi quadruples k1") {
        const auto obf2 = build_o_bf(s.pspace, Eigen::VectorXd(2.0 * xi));
        const auto cert2 = certify_bound(s.pspace, obf2, 0.1, 1.0, {4, 8});
        CHECK(cert2.k1 == doctest::Approx(4.0 * cert.k1).epsilon(1e-6));
    }

    SUBCASE("slack verified densely at this size") {
        const Eigen::MatrixXd o(obf.mat);
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(s.pspace.dim(), s.pspace.dim());
        for (int i = 0; i < s.pspace.dim(); ++i) {
            Eigen::VectorXcd e = Eigen::VectorXcd::Zero(s.pspace.dim());
            e(i) = 1.0;
            g.col(i) = s.pspace.apply_gram(e).real();
        }
        const Eigen::MatrixXd ostar = g.ldlt().solve(o.transpose() * g);
        Eigen::MatrixXd m = cert.k2 * Eigen::MatrixXd::Identity(s.pspace.dim(), s.pspace.dim());
        m += cert.k1 * Eigen::MatrixXd(s.pspace.bose_number_diag().asDiagonal());
        m -= ostar * o;
        // symmetrize in the metric: eigenvalues of G^{1/2} M G^{-1/2}
        const Eigen::VectorXd gd = g.diagonal();  // diagonal Gram at Q = I
        Eigen::MatrixXd sym = m;
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < m.cols(); ++c)
                sym(r, c) = std::sqrt(gd(r)) * m(r, c) / std::sqrt(gd(c));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()));
        CHECK(es.eigenvalues().minCoeff() >= -1e-8);
    }

    SUBCASE("norm growth constant is n-stable") {
        const auto cert_growth = certify_bound(s.pspace, obf, 0.1, 1.0, {4, 8, 16, 32});
        REQUIRE(cert_growth.growth.size() == 4);
        double cmin = 1e300, cmax = -1e300;
        for (auto [n, c] : cert_growth.growth) {
            cmin = std::min(cmin, c);
            cmax = std::max(cmax, c);
        }
        // absolute floor: the transfer factor here is an exact isometry, so
        // the c_n sit at zero up to iteration noise
        CHECK(cmax - cmin <= 0.2 * std::max({std::abs(cmax), std::abs(cmin), 1e-6}));
    }
}

TEST_CASE("interactions require an adequate truncation") {
    Setup s("su2", 3, 2);
    CHECK_THROWS_AS(build_xi_b(s.spec, s.lie, s.bspace), contract_error);
}
