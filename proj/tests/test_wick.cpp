#include <doctest.h>

#include <cmath>

#include "csrp/errors.hpp"
#include "csrp/rng.hpp"
#include "csrp/wick.hpp"

using namespace csrp;

namespace {

struct Models {
    SplittingSpec spec;
    LieAlgebraSpec lie;
    BoseOneParticleModel bose;
    FermiOneParticleModel fermi;
};

Models make_models(int genus, const char* lie_name, int nulls, std::uint64_t seed) {
    Models m{canonical_preset(genus, load_preset(lie_name)), load_preset(lie_name), {}, {}};
    m.bose = build_bose_model(m.spec, nulls, seed);
    m.fermi = build_fermi_model(m.spec, nulls, seed);
    return m;
}

BoseFactor random_bose_factor(const BoseOneParticleModel& m, int colors, Rng& rng,
                              int region = -1) {
    BoseFactor f;
    f.region = region < 0 ? rng.uniform_int(2) : region;
    f.color = rng.uniform_int(colors);
    f.vec = Eigen::VectorXd(m.dim_side);
    for (int i = 0; i < m.dim_side; ++i) f.vec(i) = rng.gaussian();
    return f;
}

FermiFactor random_fermi_factor(const FermiOneParticleModel& m, int colors, Rng& rng,
                                int region = -1) {
    FermiFactor f;
    f.region = region < 0 ? rng.uniform_int(2) : region;
    f.sector = rng.uniform_int(2);
    f.color = rng.uniform_int(colors);
    f.vec = Eigen::VectorXd(m.sector_dim);
    for (int i = 0; i < m.sector_dim; ++i) f.vec(i) = rng.gaussian();
    return f;
}

BoseMonomial random_bose_monomial(const BoseOneParticleModel& m, int degree, int colors,
                                  Rng& rng, int region = -1) {
    BoseMonomial mono;
    mono.coeff = rng.gaussian();
    for (int i = 0; i < degree; ++i) mono.factors.push_back(random_bose_factor(m, colors, rng, region));
    return mono;
}

FermiMonomial random_fermi_monomial(const FermiOneParticleModel& m, int degree, int colors,
                                    Rng& rng, int region = -1) {
    FermiMonomial mono;
    mono.coeff = rng.gaussian();
    for (int i = 0; i < degree; ++i)
        mono.factors.push_back(random_fermi_factor(m, colors, rng, region));
    return mono;
}

// Random colored pairings independent of any model, used to check the
// algebraic Wick-transform identities in the free algebra.
BosePairing random_bose_pairing(int colors, int dim, std::uint64_t seed) {
    auto c = std::make_shared<Eigen::MatrixXd>(2 * dim * colors, 2 * dim * colors);
    Rng rng(seed);
    for (int i = 0; i < c->rows(); ++i)
        for (int j = 0; j < c->cols(); ++j) (*c)(i, j) = rng.gaussian();
    *c = 0.5 * (*c + c->transpose()).eval();
    return [c, dim, colors](const BoseFactor& a, const BoseFactor& b) {
        (void)colors;
        double v = 0.0;
        for (int i = 0; i < a.vec.size(); ++i)
            for (int j = 0; j < b.vec.size(); ++j)
                v += a.vec(i) * b.vec(j) *
                     (*c)(a.region * dim * colors + a.color * dim + i,
                          b.region * dim * colors + b.color * dim + j);
        return v;
    };
}

FermiPairing random_fermi_pairing(int colors, int dim, std::uint64_t seed) {
    auto c = std::make_shared<Eigen::MatrixXd>(4 * dim * colors, 4 * dim * colors);
    Rng rng(seed);
    for (int i = 0; i < c->rows(); ++i)
        for (int j = 0; j < c->cols(); ++j) (*c)(i, j) = rng.gaussian();
    *c = 0.5 * (*c - c->transpose()).eval();
    return [c, dim, colors](const FermiFactor& a, const FermiFactor& b) {
        double v = 0.0;
        const int abase = ((a.region * 2 + a.sector) * colors + a.color) * dim;
        const int bbase = ((b.region * 2 + b.sector) * colors + b.color) * dim;
        for (int i = 0; i < a.vec.size(); ++i)
            for (int j = 0; j < b.vec.size(); ++j)
                v += a.vec(i) * b.vec(j) * (*c)(abase + i, bbase + j);
        return v;
    };
}

double poly_scale(const BosePoly& p) {
    double s = 1.0;
    for (const auto& m : p) s = std::max(s, std::abs(m.coeff));
    return s;
}

}  // namespace

TEST_CASE("phi: normalization, odd vanishing, and the three-matching formula") {
    const auto m = make_models(2, "su2", 1, 3);
    const auto c = bose_pairing(m.bose);
    Rng rng(10);

    CHECK(phi({BoseMonomial{1.0, {}}}, c) == 1.0);
    const auto f1 = random_bose_factor(m.bose, 3, rng);
    CHECK(phi({BoseMonomial{1.0, {f1}}}, c) == 0.0);

    for (int t = 0; t < 20; ++t) {
        BoseMonomial mono = random_bose_monomial(m.bose, 4, 3, rng);
        const auto& f = mono.factors;
        const double want = mono.coeff * (c(f[0], f[1]) * c(f[2], f[3]) +
                                          c(f[0], f[2]) * c(f[1], f[3]) +
                                          c(f[0], f[3]) * c(f[1], f[2]));
        CHECK(phi({mono}, c) == doctest::Approx(want).epsilon(1e-12));
        // permutation-sum oracle with the 1/(2^{n/2}(n/2)!) prefactor
        CHECK(phi({mono}, c) == doctest::Approx(phi_permutation_sum(mono, c)).epsilon(1e-12));
    }
    // degree-6 against the permutation oracle
    for (int t = 0; t < 5; ++t) {
        BoseMonomial mono = random_bose_monomial(m.bose, 6, 2, rng);
        CHECK(phi({mono}, c) == doctest::Approx(phi_permutation_sum(mono, c)).epsilon(1e-11));
    }
}

TEST_CASE("phi: capacity cap at degree 12") {
    const auto m = make_models(1, "u1", 0, 3);
    Rng rng(11);
    BoseMonomial mono = random_bose_monomial(m.bose, 14, 1, rng);
    CHECK_THROWS_AS(phi({mono}, bose_pairing(m.bose)), capacity_error);
}

TEST_CASE("psi: normalization, single pair, repeated factor") {
    const auto m = make_models(1, "su2", 1, 5);
    const auto c = fermi_pairing(m.fermi);
    Rng rng(12);

    CHECK(psi({FermiMonomial{1.0, {}}}, c) == 1.0);

    FermiFactor f = random_fermi_factor(m.fermi, 3, rng);
    f.sector = 0;
    FermiFactor g = random_fermi_factor(m.fermi, 3, rng);
    g.sector = 1;
    g.color = f.color;
    CHECK(psi({FermiMonomial{1.0, {f, g}}}, c) == doctest::Approx(c(f, g)).epsilon(1e-14));

    // repeated factor: determinant with equal rows
    CHECK(psi({FermiMonomial{1.0, {f, f, g, g}}}, c) == doctest::Approx(0.0));
}

TEST_CASE("psi agrees with the permutation-sum and determinant oracles") {
    const auto m = make_models(2, "su2", 2, 6);
    const auto c = fermi_pairing(m.fermi);
    Rng rng(13);
    for (int deg : {2, 4, 6}) {
        for (int t = 0; t < 10; ++t) {
            FermiMonomial mono = random_fermi_monomial(m.fermi, deg, 2, rng);
            const double via_pf = psi({mono}, c);
            CHECK(via_pf == doctest::Approx(psi_permutation_sum(mono, c)).epsilon(1e-11));
            CHECK(via_pf == doctest::Approx(psi_determinant(mono, c)).epsilon(1e-11));
        }
    }
    // degree 8 (m = 4 pairs) determinant route, acceptance-grade exactness
    for (int t = 0; t < 5; ++t) {
        FermiMonomial mono = random_fermi_monomial(m.fermi, 8, 2, rng);
        const double a = psi({mono}, c);
        const double b = psi_determinant(mono, c);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
}

TEST_CASE("wick transforms: explicit degree-2 expansion and inverse property") {
    const auto m = make_models(2, "su2", 1, 7);
    const auto c = bose_pairing(m.bose);
    Rng rng(14);

    SUBCASE("order(1) = 1 and order(f) = f") {
        const BosePoly one{BoseMonomial{1.0, {}}};
        const auto w = wick_order(one, c);
        REQUIRE(w.size() == 1);
        CHECK(w[0].coeff == 1.0);
        CHECK(w[0].factors.empty());
        const BosePoly single{BoseMonomial{2.0, {random_bose_factor(m.bose, 3, rng)}}};
        const auto ws = wick_order(single, c);
        REQUIRE(ws.size() == 1);
        CHECK(ws[0].factors.size() == 1);
    }

    SUBCASE("order(f g) = f g - C(f,g)") {
        const auto f = random_bose_factor(m.bose, 3, rng);
        auto g = random_bose_factor(m.bose, 3, rng);
        g.color = f.color;  // nonzero contraction
        const auto w = wick_order({BoseMonomial{1.0, {f, g}}}, c);
        REQUIRE(w.size() == 2);
        double constant = 0.0, quadratic = 0.0;
        for (const auto& mono : w)
            (mono.factors.empty() ? constant : quadratic) += mono.coeff;
        CHECK(quadratic == doctest::Approx(1.0));
        CHECK(constant == doctest::Approx(-c(f, g)).epsilon(1e-14));
    }

    SUBCASE("unorder(order(P)) = P as free-algebra elements (Bose)") {
        for (int t = 0; t < 50; ++t) {
            const int deg = rng.uniform_int(7);
            const BosePoly p{random_bose_monomial(m.bose, deg, 2, rng)};
            const auto round_trip = wick_unorder(wick_order(p, c), c);
            // difference evaluated under independent random pairings
            BosePoly diff = round_trip;
            for (const auto& mono : p) {
                BoseMonomial neg = mono;
                neg.coeff = -neg.coeff;
                diff.push_back(neg);
            }
            for (std::uint64_t probe_seed : {101ull, 102ull}) {
                const auto cp = random_bose_pairing(3, m.bose.dim_side, probe_seed);
                Rng prng(probe_seed);
                for (int parity = 0; parity < 2; ++parity) {
                    const BoseMonomial probe =
                        random_bose_monomial(m.bose, (deg % 2 == parity) ? 0 : 1, 2, prng);
                    const double v = phi(bose_product(diff, {probe}), cp);
                    CHECK(std::abs(v) < 1e-10 * poly_scale(p));
                }
            }
        }
    }

    SUBCASE("unorder(order(p)) = p as free-algebra elements (Fermi)") {
        const auto cf = fermi_pairing(m.fermi);
        for (int t = 0; t < 50; ++t) {
            const int deg = rng.uniform_int(6);
            const FermiPoly p{random_fermi_monomial(m.fermi, deg, 2, rng)};
            const auto round_trip = wick_unorder(wick_order(p, cf), cf);
            FermiPoly diff = round_trip;
            for (const auto& mono : p) {
                FermiMonomial neg = mono;
                neg.coeff = -neg.coeff;
                diff.push_back(neg);
            }
            for (std::uint64_t probe_seed : {201ull, 202ull}) {
                const auto cp = random_fermi_pairing(2, m.fermi.sector_dim, probe_seed);
                Rng prng(probe_seed);
                for (int extra = 0; extra < 2; ++extra) {
                    const FermiMonomial probe =
                        random_fermi_monomial(m.fermi, (deg + extra) % 2 == 0 ? 0 : 1, 2, prng);
                    const double v = psi(fermi_product(diff, {probe}), cp);
                    CHECK(std::abs(v) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("wick ordering never raises degree and commutes with reflection") {
    const auto m = make_models(2, "su2", 1, 8);
    const auto c = bose_pairing(m.bose);
    Rng rng(15);
    for (int t = 0; t < 25; ++t) {
        const BosePoly p{random_bose_monomial(m.bose, 4, 2, rng, /*region=*/0)};
        const auto w = wick_order(p, c);
        for (const auto& mono : w) CHECK(mono.factors.size() <= 4);
        // order(R*P) = R*(order(P)); compare by evaluation
        const auto lhs = wick_order(reflect(p), c);
        auto rhs = reflect(wick_order(p, c));
        for (auto& mono : rhs) mono.coeff = -mono.coeff;
        BosePoly diff = lhs;
        diff.insert(diff.end(), rhs.begin(), rhs.end());
        for (std::uint64_t probe_seed : {301ull, 302ull}) {
            const auto cp = random_bose_pairing(3, m.bose.dim_side, probe_seed);
            Rng prng(probe_seed);
            for (int extra = 0; extra < 2; ++extra) {
                const BoseMonomial probe = random_bose_monomial(m.bose, extra * 2, 2, prng);
                CHECK(std::abs(phi(bose_product(diff, {probe}), cp)) <
                      1e-10 * poly_scale(p));
            }
        }
    }
}

TEST_CASE("Wick identities: Phi(:P::Q:) and Psi(:P::Q:) against the closed forms") {
    const auto m = make_models(2, "su2", 1, 9);
    const auto cb = bose_pairing(m.bose);
    const auto cf = fermi_pairing(m.fermi);
    Rng rng(16);
    for (int dp = 0; dp <= 4; ++dp)
        for (int dq = 0; dq <= 4; ++dq)
            for (int t = 0; t < 4; ++t) {
                const BoseMonomial p = random_bose_monomial(m.bose, dp, 2, rng);
                const BoseMonomial q = random_bose_monomial(m.bose, dq, 2, rng);
                const double lhs =
                    phi(bose_product(wick_order({p}, cb), wick_order({q}, cb)), cb);
                const double rhs = phi_wick_rhs(p, q, cb);
                CHECK(std::abs(lhs - rhs) <=
                      1e-10 * std::max({1.0, std::abs(lhs), std::abs(rhs)}));
            }
    for (int dp = 0; dp <= 3; ++dp)
        for (int dq = 0; dq <= 3; ++dq)
            for (int t = 0; t < 4; ++t) {
                const FermiMonomial p = random_fermi_monomial(m.fermi, dp, 2, rng);
                const FermiMonomial q = random_fermi_monomial(m.fermi, dq, 2, rng);
                const double lhs =
                    psi(fermi_product(wick_order({p}, cf), wick_order({q}, cf)), cf);
                const double rhs = psi_wick_rhs(p, q, cf);
                CHECK(std::abs(lhs - rhs) <=
                      1e-10 * std::max({1.0, std::abs(lhs), std::abs(rhs)}));
            }
}

TEST_CASE("scaling of the free term: Phi_alpha and Psi_alpha") {
    const auto m = make_models(2, "su2", 1, 19);
    Rng rng(17);
    const double alpha = 1.37;
    for (int deg : {2, 4, 6}) {
        const BoseMonomial mono = random_bose_monomial(m.bose, deg, 2, rng);
        const double base = phi({mono}, bose_pairing(m.bose));
        const double scaled = phi({mono}, bose_pairing(m.bose, alpha));
        CHECK(scaled == doctest::Approx(std::pow(alpha, -deg / 2.0) * base).epsilon(1e-12));
    }
    for (int pairs : {1, 2, 3}) {
        const FermiMonomial mono = random_fermi_monomial(m.fermi, 2 * pairs, 2, rng);
        const double base = psi({mono}, fermi_pairing(m.fermi));
        const double scaled = psi({mono}, fermi_pairing(m.fermi, alpha));
        CHECK(scaled ==
              doctest::Approx(std::pow(alpha, -double(pairs)) * base).epsilon(1e-12));
    }
}

TEST_CASE("q_form: vacuum, one-particle Q-pairing, and positivity") {
    const auto m = make_models(3, "su2", 2, 20);
    Rng rng(18);

    CHECK(q_form({BoseMonomial{1.0, {}}}, {BoseMonomial{1.0, {}}}, m.bose) == 1.0);

    for (int t = 0; t < 30; ++t) {
        auto f = random_bose_factor(m.bose, 3, rng, 0);
        auto g = random_bose_factor(m.bose, 3, rng, 0);
        g.color = f.color;
        const double q = q_form({BoseMonomial{1.0, {f}}}, {BoseMonomial{1.0, {g}}}, m.bose);
        const double want =
            m.spec.q_full(m.bose.class_of(0, f.vec), m.bose.class_of(0, g.vec));
        CHECK(q == doctest::Approx(want).epsilon(1e-11));
    }

    for (int t = 0; t < 200; ++t) {
        const auto f = random_bose_factor(m.bose, 3, rng, 0);
        CHECK(q_form({BoseMonomial{1.0, {f}}}, {BoseMonomial{1.0, {f}}}, m.bose) >= -1e-13);
    }

    SUBCASE("region tag violation") {
        const auto f = random_bose_factor(m.bose, 3, rng, 1);
        CHECK_THROWS_AS(q_form({BoseMonomial{1.0, {f}}}, {BoseMonomial{1.0, {f}}}, m.bose),
                        contract_error);
    }
}

TEST_CASE("gram_q: rank, null kernel, and diagonal form on orthogonal Wick monomials") {
    const auto m = make_models(2, "su2", 2, 21);
    const auto c = bose_pairing(m.bose);
    Rng rng(19);

    SUBCASE("{1, f, :ff:} has a PSD rank-3 Gram for a nonzero-class f") {
        BoseFactor f = random_bose_factor(m.bose, 3, rng, 0);
        const BosePoly pf{BoseMonomial{1.0, {f}}};
        const std::vector<BosePoly> polys{
            {BoseMonomial{1.0, {}}},
            pf,
            wick_order({BoseMonomial{1.0, {f, f}}}, c),
        };
        const Eigen::MatrixXd g = gram_q(polys, m.bose);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        CHECK(es.eigenvalues().minCoeff() >= -1e-8 * es.eigenvalues().maxCoeff());
        int rank = 0;
        for (int i = 0; i < 3; ++i)
            if (es.eigenvalues()(i) > 1e-10 * es.eigenvalues().maxCoeff()) ++rank;
        CHECK(rank == 3);
    }

    SUBCASE("null-class Wick monomials span the kernel") {
        // vectors in ker(pi_plus)
        Eigen::FullPivLU<Eigen::MatrixXd> lu(m.bose.pi_plus);
        const Eigen::MatrixXd kernel = lu.kernel();
        REQUIRE(kernel.cols() == 2);
        std::vector<BosePoly> polys;
        for (int k = 0; k < 2; ++k) {
            BoseFactor f;
            f.region = 0;
            f.color = k;
            f.vec = kernel.col(k);
            BoseFactor g = random_bose_factor(m.bose, 3, rng, 0);
            polys.push_back(wick_order({BoseMonomial{1.0, {f}}}, c));
            polys.push_back(wick_order({BoseMonomial{1.0, {f, g}}}, c));
        }
        const Eigen::MatrixXd gm = gram_q(polys, m.bose);
        CHECK(gm.cwiseAbs().maxCoeff() < 1e-10);
    }

    SUBCASE("Wick monomials in q-orthogonal one-particle vectors give a diagonal Gram") {
        // use the lambda basis directly: q-pairing of generators = Q = I,
        // distinct colors orthogonalize repeated modes
        std::vector<BosePoly> polys;
        for (int mode = 0; mode < 2; ++mode)
            for (int color = 0; color < 2; ++color) {
                BoseFactor f;
                f.region = 0;
                f.color = color;
                // a one-particle vector mapping onto lambda column `mode`
                Eigen::VectorXd cls = m.spec.lambda.col(mode);
                f.vec = m.bose.pi_plus.colPivHouseholderQr().solve(cls);
                polys.push_back(wick_order({BoseMonomial{1.0, {f, f}}}, c));
            }
        const Eigen::MatrixXd gm = gram_q(polys, m.bose);
        for (int i = 0; i < gm.rows(); ++i)
            for (int j = 0; j < gm.cols(); ++j)
                if (i != j) CHECK(std::abs(gm(i, j)) < 1e-10);
    }
}

TEST_CASE("ghost negativity witness is strictly negative") {
    const auto m = make_models(1, "su2", 2, 22);
    const double value = ghost_negativity_witness(m.fermi);
    CHECK(value < 0.0);
    CHECK(std::abs(value) > 1e-8);  // the witness picks a non-degenerate pair

    const auto m0 = make_models(1, "su2", 0, 22);
    CHECK_THROWS_AS(ghost_negativity_witness(m0.fermi), contract_error);
}

TEST_CASE("t-map leaves the one-particle pairing invariant") {
    const auto m = make_models(2, "su2", 2, 23);
    const auto c = fermi_pairing(m.fermi);
    Rng rng(24);
    for (int t = 0; t < 50; ++t) {
        const FermiPoly p{random_fermi_monomial(m.fermi, 1, 2, rng)};
        const FermiPoly q{random_fermi_monomial(m.fermi, 1, 2, rng)};
        const double base = psi(fermi_product(p, q), c);
        const double mapped = psi(fermi_product(t_map(p), t_map(q)), c);
        CHECK(mapped == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("verify_gluing passes on seeded three-region models") {
    const auto lie = load_preset("su2");
    for (std::uint64_t seed : {31ull, 32ull}) {
        const auto spec = canonical_preset(2, lie);
        const auto model = build_three_region_model(spec, 1, seed);
        const auto report = verify_gluing(model, 30, seed);
        INFO(report.summary());
        CHECK(report.pass());
    }
}
